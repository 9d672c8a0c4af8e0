"""Homogeneous (lambda = 1) and Hamming weights, exact.

On a product of chain rings the homogeneous weight factors through the
component Moebius/phi values::

    w_h(r) = 1 - prod_t mu(r_t) / phi(r_t)

which collapses to the piecewise form used by :func:`hom_weight`.  All values
are :class:`fractions.Fraction`.  For bulk work :func:`weight_table` keeps the
weights as integers over the common denominator ``prod_t (q_t - 1)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import prod
from typing import Optional, Sequence

import numpy as np

from .chain_ring import ChainRing
from .errors import LengthMismatch
from .pir import Pir

HOMOGENEOUS = "homogeneous"
HAMMING = "hamming"


@dataclass(frozen=True)
class MuPhi:
    mu: int
    phi: int


def mu_phi(ring: ChainRing, x: int) -> MuPhi:
    """Moebius value ``mu(0, Rx)`` and generator count ``phi(Rx)`` on a chain ring."""
    if x == 0:
        return MuPhi(1, 1)
    f = ring.e - ring.valuation(x)
    q = ring.q
    if f == 1:
        return MuPhi(-1, q - 1)
    return MuPhi(0, q**f - q ** (f - 1))


def hom_weight(ring: Pir, x: int) -> Fraction:
    if x == 0:
        return Fraction(0)
    sup = ring.support_sets(x)
    if sup.Tbar != sup.T:
        return Fraction(1)
    term = Fraction(1, prod(ring.components[t].q - 1 for t in sup.T))
    return 1 - (-1) ** len(sup.T) * term


def hom_weight_product(ring: Pir, x: int) -> Fraction:
    """Same weight via ``1 - prod mu/phi``; kept as an independent route."""
    acc = Fraction(1)
    for c, a in zip(ring.components, ring.parts(x)):
        mp = mu_phi(c, a)
        acc *= Fraction(mp.mu, mp.phi)
    return 1 - acc


def hamming_weight(x: int) -> int:
    return 0 if x == 0 else 1


@dataclass(frozen=True)
class WeightTable:
    """``weights[x] / scale`` is ``w_h(x)``."""

    scale: int
    weights: np.ndarray

    def fraction(self, total: int) -> Fraction:
        return Fraction(int(total), self.scale)


@lru_cache(maxsize=64)
def weight_table(ring: Pir) -> WeightTable:
    scale = prod(c.q - 1 for c in ring.components)
    ints = np.empty(ring.size, dtype=np.int64)
    for x in ring.elements():
        w = hom_weight(ring, x) * scale
        assert w.denominator == 1
        ints[x] = w.numerator
    ints.flags.writeable = False
    return WeightTable(scale, ints)


def _check_vector(ring: Pir, u: Sequence[int]) -> None:
    for x in u:
        ring.check(x)


def vector_weight(ring: Pir, u: Sequence[int], kind: str = HOMOGENEOUS) -> Fraction:
    _check_vector(ring, u)
    if kind == HAMMING:
        return Fraction(sum(1 for x in u if x))
    if kind != HOMOGENEOUS:
        raise ValueError(f"unknown weight {kind!r}")
    table = weight_table(ring)
    return table.fraction(sum(int(table.weights[x]) for x in u))


def distance(ring: Pir, u: Sequence[int], v: Sequence[int], kind: str = HOMOGENEOUS) -> Fraction:
    if len(u) != len(v):
        raise LengthMismatch(f"lengths {len(u)} and {len(v)} differ")
    _check_vector(ring, v)
    return vector_weight(ring, [ring.sub(a, b) for a, b in zip(u, v)], kind)


def weight_and_distance(
    kind: str, ring: Pir, u: Sequence[int], v: Optional[Sequence[int]] = None
) -> Fraction:
    """``w(u)``, or ``d(u, v) = w(u - v)`` when ``v`` is given."""
    if v is None:
        return vector_weight(ring, u, kind)
    return distance(ring, u, v, kind)


def weight_bounds(ring: Pir) -> tuple[Fraction, Fraction]:
    """Range of ``w_h`` over nonzero elements.

    For ``s >= 2`` this is ``[1 - 1/((q_1-1)(q_2-1)), 1 + 1/(q_1-1)]``.  For a
    single chain ring the lower end is the exact minimum over nonzero
    elements, since the two-component formula has no meaning there.
    """
    q1 = ring.qs[0]
    upper = 1 + Fraction(1, q1 - 1)
    if ring.s >= 2:
        q2 = ring.qs[1]
        return 1 - Fraction(1, (q1 - 1) * (q2 - 1)), upper
    table = weight_table(ring)
    low = int(table.weights[1:].min())
    return table.fraction(low), upper
