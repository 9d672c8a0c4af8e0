"""Matrix product codes ``[C_1, ..., C_m] A`` and checks of their distance bound.

A codeword is the ``n x l`` matrix ``(c_1, ..., c_m) A`` with the ``c_j`` as
columns, flattened row by row: row ``i`` is ``sum_j c_j[i] * A_j``.

The bound under test is::

    d_h(C) >= min_j (l - j + 1) * d_h(C_j)

valid when ``A`` is non-singular by columns and ``q_2 > q_1 + 1`` (if
``s > 1``), with equality when ``A`` is column-permutably upper triangular or
the ``C_j`` are nested linear codes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import prod
from typing import Optional, Sequence

import numpy as np

from .codes import (
    EXPLICIT,
    LINEAR,
    MAX_ENUMERATION,
    Code,
    all_vectors,
    dual,
    is_nested,
    min_distance,
    min_distance_witness,
    word_weights,
)
from .errors import (
    DegenerateCode,
    EnumerationTooLarge,
    HypothesisSatisfied,
    NonlinearCode,
    NotNSC,
    NotSquare,
    ShapeMismatch,
    SpecMismatch,
    TheoremViolation,
)
from .homweight import HAMMING, weight_table
from .pir import Pir
from .ringmatrix import RingMatrix, cput_check, inverse, is_nsc, reversal_matrix


def _fmt(x: Optional[Fraction]) -> Optional[str]:
    return None if x is None else str(x)


def _dec(x: Optional[Fraction]) -> Optional[float]:
    return None if x is None else round(float(x), 12)


# -- construction ---------------------------------------------------------------


def _check_inputs(codes: Sequence[Code], A: RingMatrix) -> tuple[Pir, int]:
    if not codes:
        raise ShapeMismatch("need at least one code")
    ring, n = codes[0].ring, codes[0].length
    for c in codes[1:]:
        codes[0].same_space(c)
    if A.ring != ring:
        raise SpecMismatch(f"matrix over {A.ring.name}, codes over {ring.name}")
    if A.m != len(codes):
        raise ShapeMismatch(f"{len(codes)} codes but the matrix has {A.m} rows")
    return ring, n


def _slot_images(ring: Pir, words: np.ndarray, row: Sequence[int]) -> np.ndarray:
    """``c * A_j`` flattened row-major, for every word ``c`` (one per row)."""
    a = np.asarray(row, dtype=np.int64)
    out = ring.mul_arr(words[:, :, None], a[None, None, :])
    return out.reshape(words.shape[0], words.shape[1] * len(a))


def _combine(ring: Pir, blocks: Sequence[np.ndarray], width: int) -> np.ndarray:
    """All sums ``v_1 + ... + v_k`` with ``v_j`` a row of ``blocks[j]``; the
    first block varies slowest."""
    acc = np.zeros((1, width), dtype=np.int64)
    for b in blocks:
        acc = ring.add_arr(acc[:, None, :], b[None, :, :]).reshape(-1, width)
    return acc


def product_words(codes: Sequence[Code], A: RingMatrix) -> np.ndarray:
    """``(c_1, ..., c_m) A`` for every tuple, duplicates kept, in
    ``itertools.product`` order over the sorted word lists."""
    ring, n = _check_inputs(codes, A)
    total = prod(len(c) for c in codes)
    if total > MAX_ENUMERATION:
        raise EnumerationTooLarge(f"{total} codeword tuples exceed {MAX_ENUMERATION}")
    blocks = [_slot_images(ring, c.array, A.rows[j]) for j, c in enumerate(codes)]
    return _combine(ring, blocks, n * A.l)


def matrix_product(codes: Sequence[Code], A: RingMatrix) -> Code:
    """The matrix product code; linear when every ``C_j`` is."""
    ring, n = _check_inputs(codes, A)
    words = product_words(codes, A)
    if all(c.kind == LINEAR for c in codes):
        gens = [
            _slot_images(ring, c.generators.reshape(-1, n), A.rows[j])
            for j, c in enumerate(codes)
        ]
        gens = np.concatenate(gens, axis=0) if gens else np.zeros((0, n * A.l), dtype=np.int64)
        return Code(ring, n * A.l, LINEAR, gens, words)
    return Code(ring, n * A.l, EXPLICIT, words, words)


# -- bound and hypothesis ---------------------------------------------------------


def theorem_bound(codes: Sequence[Code], l: int, skip_trivial: bool = False) -> Fraction:  # noqa: E741
    """``min_j (l - j + 1) * d_h(C_j)``.

    With ``skip_trivial`` single-word codes count as having infinite distance
    and are left out; otherwise they raise :class:`DegenerateCode`.
    """
    terms = []
    for j, c in enumerate(codes):
        if len(c) < 2:
            if skip_trivial:
                continue
            raise DegenerateCode(f"C_{j + 1} has fewer than two words")
        terms.append((l - j) * min_distance(c))
    if not terms:
        raise DegenerateCode("every code is trivial")
    return min(terms)


@dataclass(frozen=True)
class HypothesisResult:
    ok: bool
    reason: str

    def __bool__(self) -> bool:
        return self.ok


def hypothesis_check(ring: Pir) -> HypothesisResult:
    """``s == 1`` or ``q_2 > q_1 + 1``; for ``Z_N`` this is "6 does not divide N"."""
    if ring.s == 1:
        return HypothesisResult(True, "single chain ring")
    q1, q2 = ring.qs[0], ring.qs[1]
    if q2 > q1 + 1:
        return HypothesisResult(True, f"q_2 = {q2} > q_1 + 1 = {q1 + 1}")
    return HypothesisResult(False, f"q_2 = {q2} <= q_1 + 1 = {q1 + 1}")


def _require_nsc(A: RingMatrix) -> None:
    res = is_nsc(A)
    if not res:
        raise NotNSC(f"matrix is not NSC: {res.k}x{res.k} minor on columns {list(res.columns)} is not a unit")


def _linear(c: Code) -> bool:
    try:
        return c.is_linear
    except EnumerationTooLarge:
        return False


# -- main verification --------------------------------------------------------------


@dataclass(frozen=True)
class MpcReport:
    d_h_actual: Fraction
    bound: Fraction
    hypothesis_ok: bool
    bound_holds: bool
    c1_flag: bool
    c2_flag: bool
    equality: bool
    witness: tuple[tuple[int, ...], tuple[int, ...]]
    size: int
    expected_size: int
    ring: Pir = field(repr=False, compare=False)

    @property
    def consistent(self) -> bool:
        """Whether the outcome agrees with the theorem's claims."""
        if not self.hypothesis_ok:
            return True
        if not self.bound_holds:
            return False
        return self.equality or not (self.c1_flag or self.c2_flag)

    def to_json(self) -> dict:
        enc = self.ring.encode
        return {
            "d_h": _fmt(self.d_h_actual),
            "d_h_decimal": _dec(self.d_h_actual),
            "bound": _fmt(self.bound),
            "bound_decimal": _dec(self.bound),
            "hypothesis_ok": self.hypothesis_ok,
            "bound_holds": self.bound_holds,
            "c1": self.c1_flag,
            "c2": self.c2_flag,
            "equality": self.equality,
            "witness": [[enc(x) for x in w] for w in self.witness],
            "size": self.size,
            "expected_size": self.expected_size,
        }


def verify_theorem(codes: Sequence[Code], A: RingMatrix, strict: bool = True) -> MpcReport:
    """Compute ``d_h(C)`` exhaustively and compare with the bound.

    With ``strict`` a failure of the bound (or of equality under C1/C2) on a
    ring satisfying the hypothesis raises :class:`TheoremViolation`.
    """
    ring, _ = _check_inputs(codes, A)
    _require_nsc(A)
    C = matrix_product(codes, A)
    d, c, c2 = min_distance_witness(C)
    bound = theorem_bound(codes, A.l)
    c1_flag = cput_check(A) is not None
    c2_flag = all(_linear(x) for x in codes) and is_nested(codes)
    report = MpcReport(
        d_h_actual=d,
        bound=bound,
        hypothesis_ok=hypothesis_check(ring).ok,
        bound_holds=d >= bound,
        c1_flag=c1_flag,
        c2_flag=c2_flag,
        equality=d == bound,
        witness=(c, c2),
        size=len(C),
        expected_size=prod(len(x) for x in codes),
        ring=ring,
    )
    if strict and not report.consistent:
        raise TheoremViolation(f"distance bound contradicted: {report.to_json()}")
    return report


@dataclass(frozen=True)
class DualReport:
    identity_holds: bool
    cardinality_ok: bool
    reversed_nsc: bool
    d_h_dual: Optional[Fraction]
    bound: Optional[Fraction]
    hypothesis_ok: bool
    bound_holds: bool
    c1_flag: bool
    c2_flag: bool
    equality: bool
    dual_size: int

    @property
    def consistent(self) -> bool:
        if not (self.identity_holds and self.cardinality_ok and self.reversed_nsc):
            return False
        if not self.hypothesis_ok:
            return True
        if not self.bound_holds:
            return False
        return self.equality or not (self.c1_flag or self.c2_flag)

    def to_json(self) -> dict:
        return {
            "identity_holds": self.identity_holds,
            "cardinality_ok": self.cardinality_ok,
            "reversed_nsc": self.reversed_nsc,
            "d_h_dual": _fmt(self.d_h_dual),
            "bound": _fmt(self.bound),
            "hypothesis_ok": self.hypothesis_ok,
            "bound_holds": self.bound_holds,
            "c1": self.c1_flag,
            "c2": self.c2_flag,
            "equality": self.equality,
            "dual_size": self.dual_size,
        }


def verify_dual(codes: Sequence[Code], A: RingMatrix, strict: bool = True) -> DualReport:
    """Check ``C^perp = [C_1^perp, ..., C_m^perp] (A^-1)^T`` and the dual bound
    ``d_h(C^perp) >= min_j j * d_h(C_j^perp)``.

    Duals equal to ``{0}`` have infinite distance and drop out of the bound;
    if ``C^perp`` itself is ``{0}`` the bound is vacuous.
    """
    ring, n = _check_inputs(codes, A)
    if A.m != A.l:
        raise NotSquare("the dual identity needs a square matrix")
    _require_nsc(A)
    for c in codes:
        if not c.is_linear:
            raise NonlinearCode("dual verification needs linear codes")
    m = A.m
    C = matrix_product(codes, A)
    C_perp = dual(C)
    duals = [dual(c) for c in codes]
    B = inverse(A).transpose()
    rhs = matrix_product(duals, B)
    JB = reversal_matrix(m, ring) @ B

    identity_holds = C_perp == rhs
    cardinality_ok = len(C) * len(C_perp) == ring.size ** (n * m) and len(C_perp) == prod(len(x) for x in duals)
    reversed_nsc = bool(is_nsc(JB))
    hyp = hypothesis_check(ring).ok

    # the reversed list [C_m^perp, ..., C_1^perp] against J (A^-1)^T
    rev = duals[::-1]
    if len(C_perp) >= 2 and any(len(x) >= 2 for x in rev):
        d = min_distance(C_perp)
        bound = theorem_bound(rev, m, skip_trivial=True)
        bound_holds, equality = d >= bound, d == bound
    else:
        d, bound, bound_holds, equality = None, None, True, True
    report = DualReport(
        identity_holds=identity_holds,
        cardinality_ok=cardinality_ok,
        reversed_nsc=reversed_nsc,
        d_h_dual=d,
        bound=bound,
        hypothesis_ok=hyp,
        bound_holds=bound_holds,
        c1_flag=cput_check(JB) is not None,
        c2_flag=is_nested(rev),
        equality=equality,
        dual_size=len(C_perp),
    )
    if strict and not report.consistent:
        raise TheoremViolation(f"dual statement contradicted: {report.to_json()}")
    return report


def rowspan_hamming(A: RingMatrix, k: int, strict: bool = True) -> Fraction:
    """Exhaustive minimum Hamming weight of the span of the first ``k`` rows.

    For NSC ``A`` this is ``l - k + 1``; ``strict`` raises otherwise.
    """
    _require_nsc(A)
    if not 1 <= k <= A.m:
        raise ShapeMismatch(f"k = {k} outside 1..{A.m}")
    ring = A.ring
    coeffs = all_vectors(ring, k)[1:]  # drop the zero combination
    rows = np.asarray(A.rows[:k], dtype=np.int64)
    acc = np.zeros((coeffs.shape[0], A.l), dtype=np.int64)
    for i in range(k):
        acc = ring.add_arr(acc, ring.mul_arr(coeffs[:, i : i + 1], rows[i][None, :]))
    d = Fraction(int(word_weights(ring, acc, HAMMING).min()))
    if strict and d != A.l - k + 1:
        raise TheoremViolation(f"row span of the first {k} rows has distance {d}, expected {A.l - k + 1}")
    return d


@dataclass(frozen=True)
class PartialBoundResult:
    """Outcome of checking ``w_h((c_1..c_k, 0..0) A) >= (l-k+1) w_h(c_k)``.

    ``applicable`` says whether the inputs meet the conditions under which the
    inequality is claimed; ``holds`` is reported either way.
    """

    k: int
    applicable: bool
    holds: bool
    checked: int
    exhaustive: bool
    witness: Optional[tuple[tuple[int, ...], tuple[int, ...]]] = None


def partial_condition(ring: Pir, l: int, k: int) -> bool:  # noqa: E741
    if k == 2:
        q1 = ring.qs[0]
        return l < q1 or (l == q1 and hypothesis_check(ring).ok)
    return k >= 1


def partial_bound_property(
    A: RingMatrix,
    codes: Sequence[Code],
    k: int,
    rng: Optional[np.random.Generator] = None,
    max_tuples: int = 200_000,
) -> PartialBoundResult:
    """Check the inequality over every tuple with ``c_k != 0`` (or a random
    sample of ``max_tuples`` of them when there are more, using ``rng``).

    The reported witness is the worst violation, ties broken by the smallest
    word.
    """
    ring, n = _check_inputs(codes, A)
    _require_nsc(A)
    if not 1 <= k <= A.m:
        raise ShapeMismatch(f"k = {k} outside 1..{A.m}")
    applicable = partial_condition(ring, A.l, k)
    width = n * A.l
    table = weight_table(ring)
    factor = A.l - k + 1

    last = codes[k - 1].array
    last = last[np.any(last != 0, axis=1)]
    prefix_sizes = [len(c) for c in codes[: k - 1]]
    total = prod(prefix_sizes) * last.shape[0]
    if total == 0:
        return PartialBoundResult(k, applicable, True, 0, True)

    if total <= max_tuples:
        prefix = _combine(ring, [_slot_images(ring, c.array, A.rows[j]) for j, c in enumerate(codes[: k - 1])], width)
        words = ring.add_arr(prefix[:, None, :], _slot_images(ring, last, A.rows[k - 1])[None, :, :])
        words = words.reshape(-1, width)
        lasts = np.tile(last, (prefix.shape[0], 1))
        exhaustive = True
    else:
        if rng is None:
            rng = np.random.default_rng(0)
        picks = [rng.integers(0, len(c), size=max_tuples) for c in codes[: k - 1]]
        lasts = last[rng.integers(0, last.shape[0], size=max_tuples)]
        words = np.zeros((max_tuples, width), dtype=np.int64)
        for j, idx in enumerate(picks):
            words = ring.add_arr(words, _slot_images(ring, codes[j].array[idx], A.rows[j]))
        words = ring.add_arr(words, _slot_images(ring, lasts, A.rows[k - 1]))
        exhaustive = False

    lhs = table.weights[words].sum(axis=1)
    rhs = factor * table.weights[lasts].sum(axis=1)
    bad = np.flatnonzero(lhs < rhs)
    witness = None
    if bad.size:
        margin = (lhs - rhs)[bad]
        cand = bad[margin == margin.min()]
        order = np.lexsort(words[cand].T[::-1])
        i = int(cand[order[0]])
        witness = (tuple(map(int, words[i])), tuple(map(int, lasts[i])))
    return PartialBoundResult(k, applicable, bad.size == 0, int(words.shape[0]), exhaustive, witness)


# -- the sharpness example ------------------------------------------------------------


@dataclass(frozen=True)
class Counterexample:
    codes: tuple[Code, Code]
    matrix: RingMatrix
    a: int
    b: int
    witness: tuple[int, ...]
    witness_weight: Fraction
    report: MpcReport

    def to_json(self) -> dict:
        ring = self.matrix.ring
        out = self.report.to_json()
        out.update(
            {
                "ring": ring.name,
                "matrix": self.matrix.to_json(),
                "a": ring.encode(self.a),
                "b": ring.encode(self.b),
                "codes": [c.to_json() for c in self.codes],
                "constructed_word": [ring.encode(x) for x in self.witness],
                "constructed_weight": str(self.witness_weight),
            }
        )
        return out


def build_counterexample(ring: Pir) -> Counterexample:
    """Matrix product code over a ring with ``q_2 = q_1 + 1`` whose distance
    falls strictly below the bound.

    ``A = [[1, ..., 1], [beta_1, ..., beta_q]]`` with ``q = q_1``, where
    ``beta_j`` runs over all residues in component 1, the nonzero residues in
    component 2 and distinct residues elsewhere; ``C_1 = Ra``, ``C_2 = Rb``
    with ``a``, ``b`` minimal-ideal elements supported on components 1 and 2.
    """
    if ring.s < 2 or ring.qs[1] != ring.qs[0] + 1:
        raise HypothesisSatisfied(f"{ring.name}: need s >= 2 and q_2 = q_1 + 1, have q = {ring.qs}")
    q = ring.qs[0]
    reps = [c.reps() for c in ring.components]
    columns = []
    for j in range(q):
        parts = [reps[0][j], reps[1][j + 1]] + [r[j] for r in reps[2:]]
        columns.append(ring.element(parts))
    A = RingMatrix.of(ring, [[ring.one] * q, columns])
    zeros = [0] * ring.s
    a = ring.element([ring.components[0].socle_min()] + zeros[1:])
    b = ring.element([0, ring.components[1].socle_min()] + zeros[2:])
    C1, C2 = Code.linear(ring, [[a]]), Code.linear(ring, [[b]])
    report = verify_theorem([C1, C2], A, strict=False)
    witness = tuple(ring.add(a, ring.mul(b, beta)) for beta in columns)
    w = weight_table(ring)
    w_weight = w.fraction(sum(int(w.weights[x]) for x in witness))
    if not (report.d_h_actual < report.bound and w_weight < report.bound):
        raise TheoremViolation(f"construction over {ring.name} did not beat the bound")
    return Counterexample((C1, C2), A, a, b, witness, w_weight, report)
