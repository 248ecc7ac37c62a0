"""
Arithmetic modulo an odd prime and in its quadratic extension.

Residues are plain Python ints kept in ``[0, ell)``.  Functions accept either
a :class:`PrimeModulus` or a bare int; bare ints are checked for primality
once and cached.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence, Union

from sympy import isprime


@dataclass(frozen=True)
class PrimeModulus:
    ell: int

    def __post_init__(self):
        if not isinstance(self.ell, int) or self.ell < 3 or not isprime(self.ell):
            raise ValueError(f"modulus must be an odd prime, got {self.ell!r}")

    def __int__(self):
        return self.ell


Modulus = Union[int, PrimeModulus]


@lru_cache(maxsize=4096)
def _checked(ell: int) -> int:
    return PrimeModulus(ell).ell


def as_int(ell: Modulus) -> int:
    if isinstance(ell, PrimeModulus):
        return ell.ell
    return _checked(int(ell))


def legendre(n: int, ell: Modulus) -> int:
    """Legendre symbol (n/ell) via Euler's criterion."""
    l = as_int(ell)
    n %= l
    if n == 0:
        return 0
    return 1 if pow(n, (l - 1) // 2, l) == 1 else -1


@lru_cache(maxsize=4096)
def smallest_nonresidue(ell: int) -> int:
    l = as_int(ell)
    r = 2
    while legendre(r, l) != -1:
        r += 1
    return r


def sqrt_mod(n: int, ell: Modulus) -> Optional[int]:
    """
    Square root of n modulo ell, or None if n is a non-residue.

    Tonelli-Shanks.  Of the two roots the one in ``[0, ell/2]`` is returned.
    """
    l = as_int(ell)
    n %= l
    if n == 0:
        return 0
    if legendre(n, l) != 1:
        return None
    if l % 4 == 3:
        x = pow(n, (l + 1) // 4, l)
    else:
        q, s = l - 1, 0
        while q % 2 == 0:
            q //= 2
            s += 1
        z = smallest_nonresidue(l)
        m, c, t, x = s, pow(z, q, l), pow(n, q, l), pow(n, (q + 1) // 2, l)
        while t != 1:
            i, t2 = 0, t
            while t2 != 1:
                t2 = t2 * t2 % l
                i += 1
            b = pow(c, 1 << (m - i - 1), l)
            m, c = i, b * b % l
            t, x = t * c % l, x * b % l
    return min(x, l - x)


def poly_eval(coeffs: Sequence[int], x: int, ell: int) -> int:
    """Evaluate a polynomial given high-to-low coefficients."""
    acc = 0
    for c in coeffs:
        acc = (acc * x + c) % ell
    return acc


def poly_from_roots(roots: Sequence[int], ell: Modulus) -> list[int]:
    """Monic prod(X - r), returned high-to-low (leading 1 included)."""
    l = as_int(ell)
    poly = [1]
    for r in roots:
        nxt = poly + [0]
        for k, c in enumerate(poly):
            nxt[k + 1] = (nxt[k + 1] - r * c) % l
        poly = nxt
    return poly


def _deflate(poly: list[int], r: int, ell: int) -> list[int]:
    # synthetic division by (X - r); caller guarantees r is a root
    out = [poly[0]]
    for c in poly[1:-1]:
        out.append((c + r * out[-1]) % ell)
    return out


def linear_roots(coeffs: Sequence[int], ell: Modulus) -> Optional[list[int]]:
    """
    Roots with multiplicity of a monic polynomial (high-to-low coefficients,
    leading 1 omitted) if it splits into linear factors over F_ell, else None.
    """
    l = as_int(ell)
    poly = [1] + [c % l for c in coeffs]
    roots: list[int] = []
    for r in range(l):
        while len(poly) > 1 and poly_eval(poly, r, l) == 0:
            roots.append(r)
            poly = _deflate(poly, r, l)
        if len(poly) == 1:
            return roots
    return None


def quadratic_linear_roots(c1: int, c0: int, ell: Modulus) -> Optional[list[int]]:
    return linear_roots((c1, c0), ell)


def quartic_linear_roots(c3: int, c2: int, c1: int, c0: int,
                         ell: Modulus) -> Optional[list[int]]:
    """Roots of X^4 + c3 X^3 + c2 X^2 + c1 X + c0 if it splits completely."""
    return linear_roots((c3, c2, c1, c0), ell)


@dataclass(frozen=True)
class ExtFieldElem:
    """Element a + b*sqrt(r) of F_{ell^2}, r the smallest non-residue."""

    a: int
    b: int
    ell: int

    def __post_init__(self):
        object.__setattr__(self, "a", self.a % self.ell)
        object.__setattr__(self, "b", self.b % self.ell)

    @property
    def nonresidue(self) -> int:
        return smallest_nonresidue(self.ell)

    @classmethod
    def of(cls, a: int, b: int, ell: Modulus) -> "ExtFieldElem":
        return cls(a, b, as_int(ell))

    def _coerce(self, other) -> "ExtFieldElem":
        if isinstance(other, ExtFieldElem):
            if other.ell != self.ell:
                raise ValueError("mixed characteristics")
            return other
        if isinstance(other, int):
            return ExtFieldElem(other, 0, self.ell)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return ExtFieldElem(self.a + o.a, self.b + o.b, self.ell)

    __radd__ = __add__

    def __neg__(self):
        return ExtFieldElem(-self.a, -self.b, self.ell)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        r = self.nonresidue
        return ExtFieldElem(self.a * o.a + r * self.b * o.b,
                            self.a * o.b + self.b * o.a, self.ell)

    __rmul__ = __mul__

    def __bool__(self):
        return bool(self.a or self.b)

    def norm(self) -> int:
        return (self.a * self.a - self.nonresidue * self.b * self.b) % self.ell

    def conjugate(self) -> "ExtFieldElem":
        return ExtFieldElem(self.a, -self.b, self.ell)

    def inverse(self) -> "ExtFieldElem":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("zero has no inverse")
        ninv = pow(n, -1, self.ell)
        return ExtFieldElem(self.a * ninv, -self.b * ninv, self.ell)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result, base = ExtFieldElem(1, 0, self.ell), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def quadratic_character(self) -> int:
        """1, -1 or 0 according as self is a nonzero square in F_{ell^2}."""
        if not self:
            return 0
        t = self ** ((self.ell * self.ell - 1) // 2)
        return 1 if (t.a, t.b) == (1, 0) else -1
