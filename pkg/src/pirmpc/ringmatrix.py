"""Small dense matrices over a :class:`~pirmpc.pir.Pir`.

Determinants use Laplace expansion: rings here have zero divisors, so
elimination-based methods are not safe, and the matrices are tiny.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import (
    BadIndex,
    InfeasibleShape,
    NotSquare,
    ShapeMismatch,
    SingularMatrix,
    SpecMismatch,
    TooLarge,
    WideMatrix,
)
from .pir import Pir, pir_from_chain_rings

MAX_DET_SIZE = 8


@dataclass(frozen=True)
class RingMatrix:
    ring: Pir
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if not self.rows or not self.rows[0]:
            raise ShapeMismatch("matrices must have at least one row and one column")
        width = len(self.rows[0])
        for row in self.rows:
            if len(row) != width:
                raise ShapeMismatch("ragged matrix")
            for x in row:
                self.ring.check(x)

    @classmethod
    def of(cls, ring: Pir, rows: Sequence[Sequence[int]]) -> RingMatrix:
        return cls(ring, tuple(tuple(int(x) for x in row) for row in rows))

    @property
    def m(self) -> int:
        return len(self.rows)

    @property
    def l(self) -> int:  # noqa: E743
        return len(self.rows[0])

    @property
    def shape(self) -> tuple[int, int]:
        return self.m, self.l

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.rows[i][j]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(row[j] for row in self.rows)

    def transpose(self) -> RingMatrix:
        return RingMatrix(self.ring, tuple(zip(*self.rows)))

    def __matmul__(self, other: RingMatrix) -> RingMatrix:
        if self.ring != other.ring:
            raise SpecMismatch("matrices over different rings")
        if self.l != other.m:
            raise ShapeMismatch(f"cannot multiply {self.shape} by {other.shape}")
        cols = [other.column(j) for j in range(other.l)]
        return RingMatrix(
            self.ring,
            tuple(tuple(self.ring.dot(row, col) for col in cols) for row in self.rows),
        )

    def permute_columns(self, perm: Sequence[int]) -> RingMatrix:
        """Column ``k`` of the result is column ``perm[k]`` of ``self``."""
        return RingMatrix(self.ring, tuple(tuple(row[j] for j in perm) for row in self.rows))

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> RingMatrix:
        return RingMatrix(self.ring, tuple(tuple(self.rows[i][j] for j in cols) for i in rows))

    def to_json(self) -> list:
        return [[self.ring.encode(x) for x in row] for row in self.rows]

    @classmethod
    def from_json(cls, ring: Pir, data) -> RingMatrix:
        if not isinstance(data, list) or not all(isinstance(row, list) for row in data):
            raise ShapeMismatch("a matrix is a list of rows")
        return cls.of(ring, [[ring.decode(x) for x in row] for row in data])


def identity(ring: Pir, n: int) -> RingMatrix:
    return RingMatrix.of(ring, [[ring.one if i == j else 0 for j in range(n)] for i in range(n)])


def _det(ring: Pir, rows: tuple[tuple[int, ...], ...]) -> int:
    n = len(rows)
    if n == 1:
        return rows[0][0]
    if n == 2:
        return ring.sub(ring.mul(rows[0][0], rows[1][1]), ring.mul(rows[0][1], rows[1][0]))
    acc = 0
    for j, a in enumerate(rows[0]):
        if a == 0:
            continue
        minor = tuple(row[:j] + row[j + 1 :] for row in rows[1:])
        term = ring.mul(a, _det(ring, minor))
        acc = ring.sub(acc, term) if j % 2 else ring.add(acc, term)
    return acc


def det(A: RingMatrix) -> int:
    if A.m != A.l:
        raise NotSquare(f"determinant of a {A.m}x{A.l} matrix")
    if A.m > MAX_DET_SIZE:
        raise TooLarge(f"Laplace expansion limited to size {MAX_DET_SIZE}")
    return _det(A.ring, A.rows)


def minor(A: RingMatrix, rows: Sequence[int], cols: Sequence[int]) -> int:
    return det(A.submatrix(rows, cols))


@dataclass(frozen=True)
class NscResult:
    """Outcome of :func:`is_nsc`; truthy iff the matrix is NSC.  On failure
    ``k`` and ``columns`` name the first non-unit minor (0-based columns)."""

    ok: bool
    k: Optional[int] = None
    columns: Optional[tuple[int, ...]] = None

    def __bool__(self) -> bool:
        return self.ok


def is_nsc(A: RingMatrix) -> NscResult:
    """Non-singular by columns: every ``k x k`` minor inside the first ``k``
    rows is a unit, for ``k = 1..m``."""
    if A.m > A.l:
        raise WideMatrix(f"{A.m}x{A.l}: more rows than columns")
    ring = A.ring
    for k in range(1, A.m + 1):
        top = A.rows[:k]
        for cols in itertools.combinations(range(A.l), k):
            d = _det(ring, tuple(tuple(row[j] for j in cols) for row in top))
            if not ring.is_unit(d):
                return NscResult(False, k, cols)
    return NscResult(True)


def residue_field_ring(ring: Pir, t: int) -> Pir:
    if not 0 <= t < ring.s:
        raise BadIndex(f"component index {t} out of range for s = {ring.s}")
    return pir_from_chain_rings([ring.components[t].residue_field()])


def project(A: RingMatrix, t: int) -> RingMatrix:
    """Entrywise ``rho_t``: the matrix over the residue field of component ``t``."""
    field = residue_field_ring(A.ring, t)
    return RingMatrix.of(field, [[A.ring.residue(x, t) for x in row] for row in A.rows])


def nsc_via_residue_fields(A: RingMatrix) -> bool:
    if A.m > A.l:
        raise WideMatrix(f"{A.m}x{A.l}: more rows than columns")
    return all(is_nsc(project(A, t)).ok for t in range(A.ring.s))


def inverse(A: RingMatrix) -> RingMatrix:
    """Adjugate divided by the determinant."""
    ring = A.ring
    d = det(A)
    if not ring.is_unit(d):
        raise SingularMatrix(f"determinant {ring.encode(d)} is not a unit")
    d_inv = ring.inv(d)
    n = A.m
    if n == 1:
        return RingMatrix.of(ring, [[d_inv]])
    out = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            rest_r = [r for r in range(n) if r != i]
            rest_c = [c for c in range(n) if c != j]
            cof = _det(ring, tuple(tuple(A.rows[r][c] for c in rest_c) for r in rest_r))
            if (i + j) % 2:
                cof = ring.neg(cof)
            out[j][i] = ring.mul(cof, d_inv)
    return RingMatrix.of(ring, out)


def reversal_matrix(m: int, ring: Pir) -> RingMatrix:
    """Anti-diagonal identity ``J``; ``J @ J`` is the identity."""
    if m < 1:
        raise ShapeMismatch("size must be >= 1")
    return RingMatrix.of(ring, [[ring.one if i + j == m - 1 else 0 for j in range(m)] for i in range(m)])


def column_heights(A: RingMatrix) -> list[int]:
    """1-based index of the lowest nonzero entry per column, 0 for a zero column."""
    heights = []
    for j in range(A.l):
        h = 0
        for i in range(A.m):
            if A.rows[i][j] != 0:
                h = i + 1
        heights.append(h)
    return heights


def cput_check(A: RingMatrix) -> Optional[tuple[int, ...]]:
    """Column permutation making ``A`` upper triangular, or ``None``.

    Position ``j`` (1-based, ``j < m``) needs a column whose lowest nonzero
    entry is in a row ``<= j``.  Assigning columns in order of increasing
    height is optimal by an exchange argument.
    """
    if A.m > A.l:
        raise WideMatrix(f"{A.m}x{A.l}: more rows than columns")
    heights = column_heights(A)
    order = sorted(range(A.l), key=lambda j: heights[j])
    for pos in range(A.m - 1):
        if heights[order[pos]] > pos + 1:
            return None
    return tuple(order)


def is_upper_triangular(A: RingMatrix) -> bool:
    return all(A.rows[i][j] == 0 for i in range(A.m) for j in range(min(i, A.l)))


def nsc_feasible(ring: Pir, m: int, l: int) -> bool:  # noqa: E741
    """Whether an ``m x l`` NSC matrix exists over ``ring``."""
    if m < 1 or l < 1:
        return False
    if m == 1:
        return True
    return m <= l <= min(ring.qs)


def build_nsc(ring: Pir, m: int, l: int) -> RingMatrix:  # noqa: E741
    """Deterministic ``m x l`` NSC matrix.

    ``m == 1`` gives the all-ones row.  Otherwise a Vandermonde matrix on
    nodes ``beta_j`` whose component ``t`` is the ``j``-th canonical residue
    representative of ``R_t``; each residue projection is then a field
    Vandermonde matrix with distinct nodes.
    """
    if not nsc_feasible(ring, m, l):
        raise InfeasibleShape(f"no {m}x{l} NSC matrix over {ring.name} (min q = {min(ring.qs)})")
    if m == 1:
        return RingMatrix.of(ring, [[ring.one] * l])
    reps = [c.reps() for c in ring.components]
    betas = [ring.element([r[j] for r in reps]) for j in range(l)]
    rows = []
    powers = [ring.one] * l
    for _ in range(m):
        rows.append(list(powers))
        powers = [ring.mul(p, b) for p, b in zip(powers, betas)]
    return RingMatrix.of(ring, rows)
