"""Finite chain rings: Z_{p^e} and GF(p^r).

Elements are plain ``int`` codes in ``range(ring.size)``.  For ``Z_{p^e}`` the
code is the residue itself.  For ``GF(p^r)`` with ``r > 1`` the code packs the
coefficient vector ``(c_0, ..., c_{r-1})`` of ``c_0 + c_1 x + ...`` as
``sum(c_i * p**i)``, so ``0`` and ``1`` are the field's zero and one and the
generator ``x`` (written alpha) has code ``p``.

Galois rings GR(p^e, r) with both ``e >= 2`` and ``r >= 2`` are not supported.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Sequence

import numpy as np

from .errors import (
    CompositeCharacteristic,
    MissingPolynomial,
    NotAUnit,
    ParseError,
    ReduciblePolynomial,
    SpecMismatch,
    UnexpectedPolynomial,
    UnsupportedGaloisRing,
)

# Monic irreducibles, coefficients listed constant term first.
DEFAULT_IRREDUCIBLES = {
    4: (1, 1, 1),  # x^2 + x + 1
    8: (1, 1, 0, 1),  # x^3 + x + 1
    9: (1, 0, 1),  # x^2 + 1
    16: (1, 1, 0, 0, 1),  # x^4 + x + 1
    25: (2, 0, 1),  # x^2 + 2
    27: (1, 2, 0, 1),  # x^3 + 2x + 1
}

# Field multiplication tables are built only up to this order.
_TABLE_LIMIT = 1024


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def factorize(n: int) -> list[tuple[int, int]]:
    """Prime factorization by trial division, primes ascending."""
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            k = 0
            while n % d == 0:
                n //= d
                k += 1
            out.append((d, k))
        d += 1 if d == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out


# -- polynomials over GF(p), coefficient lists constant term first ----------


def _poly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    a = _poly_trim([c % p for c in a])
    m = _poly_trim([c % p for c in m])
    inv_lead = pow(m[-1], -1, p)
    dm = len(m) - 1
    while len(a) - 1 >= dm and a:
        shift = len(a) - 1 - dm
        c = a[-1] * inv_lead % p
        for i, mc in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mc) % p
        _poly_trim(a)
    return a


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Exhaustive trial division by every monic polynomial of degree <= deg/2."""
    poly = _poly_trim([c % p for c in poly])
    deg = len(poly) - 1
    if deg < 1:
        return False
    if deg == 1:
        return True
    for d in range(1, deg // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if not _poly_mod(poly, list(low) + [1], p):
                return False
    return True


@dataclass(frozen=True)
class ChainRing:
    """A finite chain ring ``Z_{p^e}`` (``r == 1``) or ``GF(p^r)`` (``e == 1``).

    Build instances with :func:`make_chain_ring` or :func:`parse_chain_ring`;
    the constructor itself does not validate.
    """

    p: int
    e: int = 1
    r: int = 1
    irreducible: Optional[tuple[int, ...]] = None

    @property
    def q(self) -> int:
        """Order of the residue field."""
        return self.p**self.r

    @property
    def size(self) -> int:
        return self.p ** (self.e * self.r)

    @property
    def is_field(self) -> bool:
        return self.e == 1

    @property
    def name(self) -> str:
        if self.r == 1:
            return f"Z{self.size}"
        return f"F{self.q}"

    def __str__(self) -> str:
        return self.name

    def elements(self) -> range:
        return range(self.size)

    def check(self, x: int) -> int:
        if not isinstance(x, (int, np.integer)) or not 0 <= x < self.size:
            raise SpecMismatch(f"{x!r} is not an element of {self.name}")
        return int(x)

    # -- coefficient encoding for GF(p^r) --------------------------------------

    def to_coeffs(self, x: int) -> list[int]:
        out = []
        for _ in range(self.r):
            x, c = divmod(x, self.p)
            out.append(c)
        return out

    def from_coeffs(self, coeffs: Sequence[int]) -> int:
        if len(coeffs) != self.r:
            raise SpecMismatch(
                f"{self.name} elements have {self.r} coefficients, got {len(coeffs)}"
            )
        x = 0
        for c in reversed(coeffs):
            x = x * self.p + (int(c) % self.p)
        return x

    # -- arithmetic ------------------------------------------------------------

    def add(self, x: int, y: int) -> int:
        if self.r == 1:
            return (x + y) % self.size
        if self.q <= _TABLE_LIMIT:
            return int(self._add_table[x, y])
        return self.from_coeffs([a + b for a, b in zip(self.to_coeffs(x), self.to_coeffs(y))])

    def sub(self, x: int, y: int) -> int:
        return self.add(x, self.neg(y))

    def neg(self, x: int) -> int:
        if self.r == 1:
            return -x % self.size
        return self.from_coeffs([-c for c in self.to_coeffs(x)])

    def mul(self, x: int, y: int) -> int:
        if self.r == 1:
            return x * y % self.size
        if self.q <= _TABLE_LIMIT:
            return int(self._mul_table[x, y])
        return self._poly_mul(x, y)

    def _poly_mul(self, x: int, y: int) -> int:
        a, b = self.to_coeffs(x), self.to_coeffs(y)
        prod = [0] * (2 * self.r - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    prod[i + j] += ai * bj
        red = _poly_mod(prod, self.irreducible, self.p)
        return self.from_coeffs(red + [0] * (self.r - len(red)))

    @cached_property
    def _add_table(self) -> np.ndarray:
        digits = np.array([self.to_coeffs(x) for x in self.elements()], dtype=np.int64)
        s = (digits[:, None, :] + digits[None, :, :]) % self.p
        weights = self.p ** np.arange(self.r, dtype=np.int64)
        return (s * weights).sum(axis=2)

    @cached_property
    def _mul_table(self) -> np.ndarray:
        t = np.zeros((self.q, self.q), dtype=np.int64)
        for x in range(1, self.q):
            for y in range(x, self.q):
                t[x, y] = t[y, x] = self._poly_mul(x, y)
        return t

    # vectorised forms, used by the enumeration-heavy code paths

    def add_arr(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        if self.r == 1:
            return (x + y) % self.size
        return self._add_table[x, y]

    def neg_arr(self, x: np.ndarray) -> np.ndarray:
        if self.r == 1:
            return (-x) % self.size
        return self._neg_table[x]

    def mul_arr(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        if self.r == 1:
            return (x * y) % self.size
        return self._mul_table[x, y]

    @cached_property
    def _neg_table(self) -> np.ndarray:
        return np.array([self.neg(x) for x in self.elements()], dtype=np.int64)

    # -- ideal structure -------------------------------------------------------

    def valuation(self, x: int) -> int:
        """``v`` with ``x`` in ``J^v`` but not ``J^(v+1)``; ``e`` for zero."""
        if x == 0:
            return self.e
        if self.r > 1:
            return 0
        v = 0
        while x % self.p == 0:
            x //= self.p
            v += 1
        return v

    def is_unit(self, x: int) -> bool:
        return x != 0 and self.valuation(x) == 0

    def inv(self, x: int) -> int:
        if not self.is_unit(x):
            raise NotAUnit(f"{x} is not a unit of {self.name}")
        if self.r == 1:
            return pow(x, -1, self.size)
        # x^(q-2) in the multiplicative group of order q-1
        result, base, k = 1, x, self.q - 2
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    def residue_field(self) -> ChainRing:
        if self.is_field:
            return self
        return ChainRing(self.p, 1, self.r, self.irreducible)

    def residue(self, x: int) -> int:
        """Image of ``x`` in ``R/J`` as an element code of :meth:`residue_field`."""
        if self.is_field:
            return x
        return x % self.p

    def reps(self) -> list[int]:
        """Canonical representatives of ``R/J``, one per residue class."""
        return list(range(self.q))

    def ideal_generator(self, k: int) -> int:
        """A generator of ``J^k`` (``0 <= k <= e``)."""
        if k >= self.e:
            return 0
        return self.p**k if self.r == 1 else 1

    def socle_min(self) -> int:
        """Smallest nonzero element code of ``J^(e-1)``."""
        return self.ideal_generator(self.e - 1)


def make_chain_ring(
    p: int, e: int = 1, r: int = 1, irreducible: Optional[Sequence[int]] = None
) -> ChainRing:
    """Validate parameters and return a :class:`ChainRing`.

    ``irreducible`` lists coefficients constant term first and must be monic of
    degree ``r``.  For ``r > 1`` it may be omitted when ``p**r`` has an entry in
    :data:`DEFAULT_IRREDUCIBLES`.
    """
    if not is_prime(p):
        raise CompositeCharacteristic(f"characteristic {p} is not prime")
    if e < 1 or r < 1:
        raise ValueError("e and r must be >= 1")
    if e >= 2 and r >= 2:
        raise UnsupportedGaloisRing(f"GR({p}^{e}, {r}) is not supported")
    if r == 1:
        if irreducible is not None:
            raise UnexpectedPolynomial("a polynomial is only meaningful for r > 1")
        return ChainRing(p, e, 1, None)
    if irreducible is None:
        irreducible = DEFAULT_IRREDUCIBLES.get(p**r)
        if irreducible is None:
            raise MissingPolynomial(f"no default irreducible polynomial for GF({p**r})")
    poly = tuple(int(c) % p for c in irreducible)
    if len(poly) != r + 1 or poly[-1] != 1:
        raise ReduciblePolynomial(f"expected a monic polynomial of degree {r}, got {list(poly)}")
    if not is_irreducible(poly, p):
        raise ReduciblePolynomial(f"{list(poly)} is reducible over GF({p})")
    return ChainRing(p, 1, r, poly)


_CHAIN_RE = re.compile(r"^\s*([ZzFf])\s*(\d+)\s*$")


def parse_chain_ring(text: str) -> ChainRing:
    """Parse ``"Z<p^e>"`` or ``"F<q>"`` (case-insensitive)."""
    m = _CHAIN_RE.match(text)
    if not m:
        raise ParseError(f"cannot parse chain ring {text!r}", 1, 1)
    kind, n = m.group(1).upper(), int(m.group(2))
    fac = factorize(n) if n > 1 else []
    if len(fac) != 1:
        raise ParseError(f"{text.strip()!r}: order must be a prime power", 1, m.start(2) + 1)
    p, k = fac[0]
    if kind == "Z":
        return make_chain_ring(p, k, 1)
    return make_chain_ring(p, 1, k)


def cr_arith(ring: ChainRing, kind: str, x: int, y: int = 0) -> int:
    x, y = ring.check(x), ring.check(y)
    if kind == "add":
        return ring.add(x, y)
    if kind == "sub":
        return ring.sub(x, y)
    if kind == "mul":
        return ring.mul(x, y)
    if kind == "neg":
        return ring.neg(x)
    raise ValueError(f"unknown operation {kind!r}")
