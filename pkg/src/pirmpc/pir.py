"""Finite principal ideal rings as products of chain rings.

A :class:`Pir` is ``R_1 x ... x R_s`` with components sorted by residue field
size.  Elements are ``int`` codes in ``range(ring.size)``:

* rings built from a modulus (``Z_N``) use the residue ``k mod N`` itself, and
  the component parts are obtained by the Chinese Remainder Theorem;
* explicit products use a mixed-radix code over the component codes in
  canonical order, first component most significant.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property, reduce
from math import prod
from typing import Iterable, Optional, Sequence

import numpy as np

from .chain_ring import ChainRing, factorize, make_chain_ring, parse_chain_ring
from .errors import (
    EmptyProduct,
    ModulusTooLarge,
    ModulusTooSmall,
    NotAUnit,
    NotAZnRing,
    OutOfRange,
    ParseError,
    SpecMismatch,
)

MAX_MODULUS = 10**12

# Explicit products up to this size get full operation tables.
_TABLE_LIMIT = 1024


@dataclass(frozen=True)
class SupportSets:
    """``T``: components where the element is nonzero; ``Tbar``: those of
    them lying in the minimal ideal ``J_t^(e_t - 1)``.  Indices are 0-based in
    canonical order."""

    T: frozenset
    Tbar: frozenset


@dataclass(frozen=True)
class Pir:
    components: tuple[ChainRing, ...]
    # sort_permutation[i] is the canonical position of user component i
    sort_permutation: tuple[int, ...]
    modulus: Optional[int] = None

    # -- structure -------------------------------------------------------------

    @property
    def s(self) -> int:
        return len(self.components)

    @property
    def qs(self) -> tuple[int, ...]:
        return tuple(c.q for c in self.components)

    @property
    def es(self) -> tuple[int, ...]:
        return tuple(c.e for c in self.components)

    @cached_property
    def size(self) -> int:
        return prod(c.size for c in self.components)

    @property
    def name(self) -> str:
        if self.modulus is not None:
            return f"Z{self.modulus}"
        return " x ".join(c.name for c in self.user_components)

    def __str__(self) -> str:
        return self.name

    @property
    def user_components(self) -> tuple[ChainRing, ...]:
        return tuple(self.components[k] for k in self.sort_permutation)

    def elements(self) -> range:
        return range(self.size)

    def check(self, x) -> int:
        if not isinstance(x, (int, np.integer)) or not 0 <= x < self.size:
            raise SpecMismatch(f"{x!r} is not an element of {self.name}")
        return int(x)

    zero = 0

    @cached_property
    def one(self) -> int:
        return self.element((1,) * self.s)

    # -- element codes <-> component parts -------------------------------------

    @cached_property
    def _strides(self) -> tuple[int, ...]:
        strides = []
        acc = 1
        for c in reversed(self.components):
            strides.append(acc)
            acc *= c.size
        return tuple(reversed(strides))

    @cached_property
    def _crt_basis(self) -> tuple[int, ...]:
        n = self.modulus
        basis = []
        for c in self.components:
            m = c.size
            other = n // m
            basis.append(other * pow(other, -1, m) % n)
        return tuple(basis)

    def parts(self, x: int) -> tuple[int, ...]:
        if self.modulus is not None:
            return tuple(x % c.size for c in self.components)
        out = []
        for c in reversed(self.components):
            x, r = divmod(x, c.size)
            out.append(r)
        return tuple(reversed(out))

    def element(self, parts: Sequence[int]) -> int:
        if len(parts) != self.s:
            raise SpecMismatch(f"{self.name} elements have {self.s} parts, got {len(parts)}")
        for c, a in zip(self.components, parts):
            c.check(a)
        if self.modulus is not None:
            return sum(a * b for a, b in zip(parts, self._crt_basis)) % self.modulus
        return sum(a * st for a, st in zip(parts, self._strides))

    def parts_arr(self, x: np.ndarray) -> list[np.ndarray]:
        if self.modulus is not None:
            return [x % c.size for c in self.components]
        return [(x // st) % c.size for c, st in zip(self.components, self._strides)]

    def element_arr(self, parts: list[np.ndarray]) -> np.ndarray:
        if self.modulus is not None:
            acc = sum(a * b for a, b in zip(parts, self._crt_basis))
            return acc % self.modulus
        return sum(a * st for a, st in zip(parts, self._strides))

    # -- arithmetic ------------------------------------------------------------

    def add(self, x: int, y: int) -> int:
        if self.modulus is not None:
            return (x + y) % self.modulus
        return self.element([c.add(a, b) for c, a, b in zip(self.components, self.parts(x), self.parts(y))])

    def neg(self, x: int) -> int:
        if self.modulus is not None:
            return -x % self.modulus
        return self.element([c.neg(a) for c, a in zip(self.components, self.parts(x))])

    def sub(self, x: int, y: int) -> int:
        return self.add(x, self.neg(y))

    def mul(self, x: int, y: int) -> int:
        if self.modulus is not None:
            return x * y % self.modulus
        return self.element([c.mul(a, b) for c, a, b in zip(self.components, self.parts(x), self.parts(y))])

    def dot(self, u: Sequence[int], v: Sequence[int]) -> int:
        acc = 0
        for a, b in zip(u, v):
            acc = self.add(acc, self.mul(a, b))
        return acc

    @cached_property
    def _tables(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        xs = np.arange(self.size, dtype=np.int64)
        X, Y = np.meshgrid(xs, xs, indexing="ij")
        return self._add_cw(X, Y), self._mul_cw(X, Y), self._neg_cw(xs)

    def _use_tables(self) -> bool:
        return self.modulus is None and self.size <= _TABLE_LIMIT

    def _add_cw(self, x, y):
        return self.element_arr(
            [c.add_arr(a, b) for c, a, b in zip(self.components, self.parts_arr(x), self.parts_arr(y))]
        )

    def _mul_cw(self, x, y):
        return self.element_arr(
            [c.mul_arr(a, b) for c, a, b in zip(self.components, self.parts_arr(x), self.parts_arr(y))]
        )

    def _neg_cw(self, x):
        return self.element_arr([c.neg_arr(a) for c, a in zip(self.components, self.parts_arr(x))])

    def add_arr(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        if self.modulus is not None:
            return (x + y) % self.modulus
        if self._use_tables():
            return self._tables[0][x, y]
        return self._add_cw(x, y)

    def mul_arr(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        if self.modulus is not None:
            return (x * y) % self.modulus
        if self._use_tables():
            return self._tables[1][x, y]
        return self._mul_cw(x, y)

    def neg_arr(self, x: np.ndarray) -> np.ndarray:
        if self.modulus is not None:
            return (-x) % self.modulus
        if self._use_tables():
            return self._tables[2][x]
        return self._neg_cw(x)

    # -- units and ideals ------------------------------------------------------

    def valuations(self, x: int) -> tuple[int, ...]:
        return tuple(c.valuation(a) for c, a in zip(self.components, self.parts(x)))

    def is_unit(self, x: int) -> bool:
        return all(v == 0 for v in self.valuations(x))

    @cached_property
    def unit_mask(self) -> np.ndarray:
        return np.array([self.is_unit(x) for x in self.elements()], dtype=bool)

    def inv(self, x: int) -> int:
        if not self.is_unit(x):
            raise NotAUnit(f"{x} is not a unit of {self.name}")
        return self.element([c.inv(a) for c, a in zip(self.components, self.parts(x))])

    def residue(self, x: int, t: int) -> int:
        """``rho_t(x)``: reduction into the residue field of component ``t``."""
        return self.components[t].residue(self.parts(x)[t])

    def support_sets(self, x: int) -> SupportSets:
        T, Tbar = set(), set()
        for t, (c, a) in enumerate(zip(self.components, self.parts(x))):
            if a != 0:
                T.add(t)
                if c.valuation(a) >= c.e - 1:
                    Tbar.add(t)
        return SupportSets(frozenset(T), frozenset(Tbar))

    def principal_ideal(self, x: int) -> frozenset:
        """``Rx`` by brute force."""
        return frozenset(self.mul(r, x) for r in self.elements())

    # -- serialisation (user component order) ----------------------------------

    def encode(self, x: int):
        """JSON form of an element: an int for ``Z_N`` rings, otherwise a list of
        per-component encodings in the order the components were given."""
        if self.modulus is not None:
            return x
        parts = self.parts(x)
        out = []
        for k in self.sort_permutation:
            c, a = self.components[k], parts[k]
            out.append(a if c.r == 1 else c.to_coeffs(a))
        return out

    def decode(self, obj) -> int:
        if self.modulus is not None:
            if not isinstance(obj, int):
                raise SpecMismatch(f"{self.name} elements are integers, got {obj!r}")
            return obj % self.modulus
        if isinstance(obj, int) and self.s == 1 and self.components[0].r == 1:
            return obj % self.components[0].size
        if isinstance(obj, int) and self.s == 1:
            return self.components[0].check(obj)
        if not isinstance(obj, (list, tuple)) or len(obj) != self.s:
            raise SpecMismatch(f"{self.name} elements are lists of {self.s} parts, got {obj!r}")
        parts = [0] * self.s
        for i, item in enumerate(obj):
            k = self.sort_permutation[i]
            c = self.components[k]
            if c.r == 1:
                if not isinstance(item, int):
                    raise SpecMismatch(f"component {c.name} expects an integer, got {item!r}")
                parts[k] = item % c.size
            elif isinstance(item, int):
                parts[k] = c.check(item)
            else:
                parts[k] = c.from_coeffs(item)
        return self.element(parts)


def pir_from_chain_rings(rings: Iterable[ChainRing]) -> Pir:
    """Product ring, components stably sorted by residue field size."""
    rings = list(rings)
    if not rings:
        raise EmptyProduct("a product needs at least one component")
    order = sorted(range(len(rings)), key=lambda i: rings[i].q)
    perm = [0] * len(rings)
    for pos, i in enumerate(order):
        perm[i] = pos
    return Pir(tuple(rings[i] for i in order), tuple(perm))


def pir_from_modulus(n: int) -> Pir:
    """``Z_N`` decomposed as ``Z_{p_1^e_1} x ... x Z_{p_s^e_s}``, ``p`` ascending."""
    if n <= 1:
        raise ModulusTooSmall(f"modulus must be >= 2, got {n}")
    if n > MAX_MODULUS:
        raise ModulusTooLarge(f"modulus {n} exceeds {MAX_MODULUS}")
    comps = tuple(make_chain_ring(p, e) for p, e in factorize(n))
    return Pir(comps, tuple(range(len(comps))), n)


def crt_encode(ring: Pir, k: int) -> tuple[int, ...]:
    """Residues of ``k`` modulo each prime-power factor."""
    if ring.modulus is None:
        raise NotAZnRing(f"{ring.name} was not built from a modulus")
    if not 0 <= k < ring.modulus:
        raise OutOfRange(f"{k} not in [0, {ring.modulus})")
    return ring.parts(k)


def crt_decode(ring: Pir, parts: Sequence[int]) -> int:
    if ring.modulus is None:
        raise NotAZnRing(f"{ring.name} was not built from a modulus")
    for c, a in zip(ring.components, parts):
        if not 0 <= a < c.size:
            raise OutOfRange(f"{a} not in [0, {c.size})")
    return ring.element(parts)


def pir_arith(ring: Pir, kind: str, x: int, y: int = 0) -> int:
    x, y = ring.check(x), ring.check(y)
    ops = {"add": ring.add, "sub": ring.sub, "mul": ring.mul}
    if kind == "neg":
        return ring.neg(x)
    if kind not in ops:
        raise ValueError(f"unknown operation {kind!r}")
    return ops[kind](x, y)


def pir_is_unit(ring: Pir, x: int) -> bool:
    return ring.is_unit(ring.check(x))


def support_sets(ring: Pir, x: int) -> SupportSets:
    return ring.support_sets(ring.check(x))


def unit_count(ring: Pir) -> int:
    """Closed-form unit count, ``prod_t (|R_t| - |J_t|)``."""
    return reduce(lambda acc, c: acc * (c.size - c.size // c.q), ring.components, 1)


_MOD_RE = re.compile(r"^\s*[Zz]\s*(\d+)\s*$")
_SEP_RE = re.compile(r"\s*(?:\bx\b|×|\*)\s*")


def parse_pir(text: str) -> Pir:
    """Parse ``"Z<N>"`` (CRT-decomposed) or an explicit product such as
    ``"Z4 x Z9 x F4"``.  A lone ``"F<q>"`` is a one-component product."""
    m = _MOD_RE.match(text)
    if m:
        return pir_from_modulus(int(m.group(1)))
    pieces = _SEP_RE.split(text.strip())
    rings = []
    col = 1
    for piece in pieces:
        if not piece:
            raise ParseError(f"empty component in {text!r}", 1, col)
        try:
            rings.append(parse_chain_ring(piece))
        except ParseError as exc:
            raise ParseError(f"cannot parse component {piece!r} of {text!r}", 1, text.find(piece) + 1) from exc
        col = text.find(piece) + len(piece) + 1
    return pir_from_chain_rings(rings)
