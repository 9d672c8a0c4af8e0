"""Codes over ``R^n``: explicit word sets and linear spans.

Words are tuples of element codes.  Internally a materialised code is also kept
as a lexicographically sorted ``(M, n)`` integer array, which is what the
distance and enumeration routines work on.
"""

from __future__ import annotations

from fractions import Fraction
from functools import cached_property
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import (
    DegenerateCode,
    EnumerationTooLarge,
    LengthMismatch,
    NonlinearCode,
    ShapeMismatch,
    SpecMismatch,
)
from .homweight import HAMMING, HOMOGENEOUS, weight_table
from .pir import Pir

MAX_ENUMERATION = 10**6
# pairwise distance scans and closure checks are quadratic in |C|
MAX_PAIRWISE = 20_000

EXPLICIT = "explicit"
LINEAR = "linear"


def all_vectors(ring: Pir, n: int) -> np.ndarray:
    """Every vector of ``R^n`` as an ``(|R|^n, n)`` array, lexicographic."""
    total = ring.size**n
    if total > MAX_ENUMERATION:
        raise EnumerationTooLarge(f"|R|^n = {total} exceeds {MAX_ENUMERATION}")
    if n == 0:
        return np.zeros((1, 0), dtype=np.int64)
    grids = np.indices((ring.size,) * n, dtype=np.int64)
    return grids.reshape(n, -1).T.copy()


def row_keys(arr: np.ndarray, base: int) -> np.ndarray:
    """Injective integer key per row (``arr`` entries in ``range(base)``)."""
    n = arr.shape[1]
    if n and base**n >= 2**62:
        raise EnumerationTooLarge("vectors too long to index")
    keys = np.zeros(arr.shape[0], dtype=np.int64)
    for i in range(n):
        keys = keys * base + arr[:, i]
    return keys


def _unique_rows(arr: np.ndarray) -> np.ndarray:
    if arr.shape[0] == 0:
        return arr
    return np.unique(arr, axis=0)


def span(ring: Pir, generators: np.ndarray, n: int) -> np.ndarray:
    """All ``R``-linear combinations of the rows of ``generators``."""
    words = np.zeros((1, n), dtype=np.int64)
    scalars = np.arange(ring.size, dtype=np.int64)
    for g in generators:
        if words.shape[0] * ring.size > MAX_ENUMERATION:
            raise EnumerationTooLarge(
                f"span enumeration would visit {words.shape[0] * ring.size} words (> {MAX_ENUMERATION})"
            )
        multiples = _unique_rows(ring.mul_arr(scalars[:, None], g[None, :]))
        words = ring.add_arr(words[:, None, :], multiples[None, :, :]).reshape(-1, n)
        words = _unique_rows(words)
    return words


def reduce_generators(ring: Pir, words: np.ndarray) -> np.ndarray:
    """A generating subset of ``words``, picked greedily in row order."""
    n = words.shape[1]
    keys = row_keys(words, ring.size)
    chosen = []
    covered = row_keys(np.zeros((1, n), dtype=np.int64), ring.size)
    while True:
        outside = np.flatnonzero(~np.isin(keys, covered))
        if outside.size == 0:
            break
        chosen.append(words[outside[0]])
        covered = row_keys(span(ring, np.array(chosen), n), ring.size)
    return np.array(chosen, dtype=np.int64).reshape(len(chosen), n)


class Code:
    """A nonempty code of length ``n`` over ``ring``.

    ``kind`` is ``"linear"`` (stored by generators) or ``"explicit"`` (stored
    by its words).  Use :meth:`explicit` / :meth:`linear` to build one.
    """

    def __init__(self, ring: Pir, length: int, kind: str, vectors: np.ndarray, words: Optional[np.ndarray] = None):
        if kind not in (EXPLICIT, LINEAR):
            raise ValueError(f"unknown code kind {kind!r}")
        self.ring = ring
        self.length = length
        self.kind = kind
        self._vectors = vectors
        if words is not None:
            self.__dict__["array"] = _unique_rows(words)

    @staticmethod
    def _as_array(ring: Pir, vectors, length: Optional[int]) -> tuple[np.ndarray, int]:
        rows = [tuple(v) for v in vectors]
        if length is None:
            if not rows:
                raise ShapeMismatch("cannot infer the length of an empty vector list")
            length = len(rows[0])
        for v in rows:
            if len(v) != length:
                raise LengthMismatch(f"vector {v} does not have length {length}")
            for x in v:
                ring.check(x)
        arr = np.array(rows, dtype=np.int64).reshape(len(rows), length)
        return arr, length

    @classmethod
    def explicit(cls, ring: Pir, words: Iterable[Sequence[int]], length: Optional[int] = None) -> Code:
        arr, length = cls._as_array(ring, words, length)
        if arr.shape[0] == 0:
            raise DegenerateCode("a code needs at least one word")
        arr = _unique_rows(arr)
        return cls(ring, length, EXPLICIT, arr, arr)

    @classmethod
    def linear(cls, ring: Pir, generators: Iterable[Sequence[int]], length: Optional[int] = None) -> Code:
        arr, length = cls._as_array(ring, generators, length)
        return cls(ring, length, LINEAR, arr)

    @classmethod
    def full(cls, ring: Pir, n: int) -> Code:
        eye = [[ring.one if i == j else 0 for j in range(n)] for i in range(n)]
        return cls.linear(ring, eye, n)

    @classmethod
    def zero(cls, ring: Pir, n: int) -> Code:
        return cls.linear(ring, [], n)

    # -- materialisation -------------------------------------------------------

    @cached_property
    def array(self) -> np.ndarray:
        return span(self.ring, self._vectors, self.length)

    @cached_property
    def words(self) -> frozenset:
        return frozenset(map(tuple, self.array.tolist()))

    @cached_property
    def keys(self) -> np.ndarray:
        return row_keys(self.array, self.ring.size)

    def __len__(self) -> int:
        return self.array.shape[0]

    def __contains__(self, word) -> bool:
        return tuple(word) in self.words

    def __repr__(self) -> str:
        return f"Code({self.ring.name}, n={self.length}, {self.kind}, |C|={len(self)})"

    @cached_property
    def generators(self) -> np.ndarray:
        """Generating rows: the stored generators, or a generating subset of
        the words of an explicit code (which need not be linear)."""
        if self.kind == LINEAR:
            return self._vectors
        if not self.is_linear:
            return self.array
        return reduce_generators(self.ring, self.array)

    @cached_property
    def is_linear(self) -> bool:
        if self.kind == LINEAR:
            return True
        arr, ring = self.array, self.ring
        if not np.any(np.all(arr == 0, axis=1)):
            return False
        if arr.shape[0] > MAX_PAIRWISE // 10:
            raise EnumerationTooLarge(f"closure check on {arr.shape[0]} words")
        sums = ring.add_arr(arr[:, None, :], arr[None, :, :]).reshape(-1, self.length)
        scalars = np.arange(ring.size, dtype=np.int64)
        mults = ring.mul_arr(scalars[:, None, None], arr[None, :, :]).reshape(-1, self.length)
        cand = np.concatenate([row_keys(sums, ring.size), row_keys(mults, ring.size)])
        return bool(np.isin(cand, self.keys).all())

    def same_space(self, other: Code) -> None:
        if self.ring != other.ring:
            raise SpecMismatch(f"codes over {self.ring.name} and {other.ring.name}")
        if self.length != other.length:
            raise LengthMismatch(f"code lengths {self.length} and {other.length}")

    def issuperset(self, other: Code) -> bool:
        self.same_space(other)
        return bool(np.isin(other.keys, self.keys).all())

    def __eq__(self, other) -> bool:
        if not isinstance(other, Code):
            return NotImplemented
        return (
            self.ring == other.ring
            and self.length == other.length
            and len(self) == len(other)
            and bool(np.array_equal(self.array, other.array))
        )

    __hash__ = None

    # -- JSON ------------------------------------------------------------------

    def to_json(self) -> dict:
        enc = self.ring.encode
        rows = self._vectors if self.kind == LINEAR else self.array
        key = "generators" if self.kind == LINEAR else "words"
        return {"length": self.length, "kind": self.kind, key: [[enc(int(x)) for x in row] for row in rows]}

    @classmethod
    def from_json(cls, ring: Pir, data: dict) -> Code:
        if not isinstance(data, dict):
            raise ShapeMismatch("a code is a JSON object")
        kind = data.get("kind", LINEAR if "generators" in data else EXPLICIT)
        length = data.get("length")
        key = "generators" if kind == LINEAR else "words"
        if key not in data:
            raise ShapeMismatch(f"{kind} code needs a {key!r} field")
        rows = [[ring.decode(x) for x in row] for row in data[key]]
        if length is None and not rows:
            raise ShapeMismatch("code length missing")
        if kind == LINEAR:
            return cls.linear(ring, rows, length)
        if kind == EXPLICIT:
            return cls.explicit(ring, rows, length)
        raise ShapeMismatch(f"unknown code kind {kind!r}")


def materialize(code: Code) -> frozenset:
    return code.words


def word_weights(ring: Pir, arr: np.ndarray, kind: str = HOMOGENEOUS) -> np.ndarray:
    """Per-row weights; homogeneous weights are scaled by ``weight_table(ring).scale``."""
    if kind == HAMMING:
        return (arr != 0).sum(axis=1)
    if kind != HOMOGENEOUS:
        raise ValueError(f"unknown weight {kind!r}")
    return weight_table(ring).weights[arr].sum(axis=1)


def _to_fraction(ring: Pir, value: int, kind: str) -> Fraction:
    if kind == HAMMING:
        return Fraction(int(value))
    return weight_table(ring).fraction(value)


def min_weight_witness(ring: Pir, arr: np.ndarray, kind: str = HOMOGENEOUS) -> tuple[Fraction, tuple]:
    """Minimum weight over the nonzero rows of ``arr`` and the first row that
    attains it."""
    w = word_weights(ring, arr, kind)
    nonzero = np.any(arr != 0, axis=1)
    if not nonzero.any():
        raise DegenerateCode("no nonzero word")
    masked = np.where(nonzero, w, np.iinfo(np.int64).max)
    i = int(np.argmin(masked))
    return _to_fraction(ring, int(w[i]), kind), tuple(int(x) for x in arr[i])


def min_distance_witness(code: Code, kind: str = HOMOGENEOUS) -> tuple[Fraction, tuple, tuple]:
    """``(d, c, c')`` with ``d(c, c') = d`` minimal over distinct pairs.

    Linear codes use the minimum nonzero weight (witness pair ``(c, 0)``);
    other codes are scanned pairwise.
    """
    ring, arr = code.ring, code.array
    if arr.shape[0] < 2:
        raise DegenerateCode(f"{code!r} has fewer than two words")
    if code.kind == LINEAR:
        d, c = min_weight_witness(ring, arr, kind)
        return d, c, (0,) * code.length
    if arr.shape[0] > MAX_PAIRWISE:
        raise EnumerationTooLarge(f"pairwise scan over {arr.shape[0]} words")
    best = None
    for i in range(arr.shape[0] - 1):
        diffs = ring.add_arr(arr[i][None, :], ring.neg_arr(arr[i + 1 :]))
        w = word_weights(ring, diffs, kind)
        j = int(np.argmin(w))
        if best is None or w[j] < best[0]:
            best = (int(w[j]), i, i + 1 + j)
    value, i, j = best
    return _to_fraction(ring, value, kind), tuple(map(int, arr[i])), tuple(map(int, arr[j]))


def min_distance(code: Code, kind: str = HOMOGENEOUS) -> Fraction:
    return min_distance_witness(code, kind)[0]


def min_distance_pairwise(code: Code, kind: str = HOMOGENEOUS) -> Fraction:
    """Pairwise scan regardless of linearity."""
    as_explicit = Code(code.ring, code.length, EXPLICIT, code.array, code.array)
    return min_distance_witness(as_explicit, kind)[0]


def dual(code: Code) -> Code:
    """``{x in R^n : x . c = 0 for every c in C}`` by exhaustive search."""
    if not code.is_linear:
        raise NonlinearCode("duals are only defined here for linear codes")
    ring, n = code.ring, code.length
    space = all_vectors(ring, n)
    keep = np.ones(space.shape[0], dtype=bool)
    for g in code.generators:
        acc = np.zeros(space.shape[0], dtype=np.int64)
        for i in range(n):
            if g[i]:
                acc = ring.add_arr(acc, ring.mul_arr(space[:, i], g[i]))
        keep &= acc == 0
    words = space[keep]
    return Code(ring, n, LINEAR, reduce_generators(ring, words), words)


def is_nested(chain: Sequence[Code]) -> bool:
    """``C_1 >= C_2 >= ... >= C_m`` as sets."""
    for a, b in zip(chain, chain[1:]):
        a.same_space(b)
    return all(a.issuperset(b) for a, b in zip(chain, chain[1:]))
