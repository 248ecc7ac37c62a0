"""
Frobenius quartics X^4 + a1 X^3 + a2 X^2 + q a1 X + q^2 of abelian surfaces.

Everything here is exact integer arithmetic; square roots of q only ever
appear after squaring both sides of an inequality.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from math import isqrt
from typing import Optional

from sympy import factorint, isprime


def prime_power(q: int) -> tuple[int, int]:
    """Return (p, k) with q = p**k, or raise ValueError."""
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    f = factorint(q)
    if len(f) != 1:
        raise ValueError(f"{q} is not a prime power")
    (p, k), = f.items()
    return p, k


def is_squarefree(d: int) -> bool:
    return d != 0 and all(e == 1 for e in factorint(abs(d)).values())


def _weil_bounds_ok(a1: int, a2: int, q: int) -> bool:
    # |a1| <= 4 sqrt(q)
    if a1 * a1 > 16 * q:
        return False
    # a2 <= a1^2/4 + 2q   (real roots of Y^2 + a1 Y + a2 - 2q)
    if 4 * a2 > a1 * a1 + 8 * q:
        return False
    # 2|a1| sqrt(q) - 2q <= a2
    rhs = a2 + 2 * q
    if rhs < 0:
        return False
    return 4 * a1 * a1 * q <= rhs * rhs


def validate_weil(a1: int, a2: int, q: int) -> bool:
    """
    True iff X^4 + a1 X^3 + a2 X^2 + q a1 X + q^2 has all roots on |z| = sqrt(q).

    Writing the quartic as X^2 h(X + q/X) with h(Y) = Y^2 + a1 Y + a2 - 2q,
    this holds iff both roots of h are real and lie in [-2 sqrt q, 2 sqrt q].
    """
    prime_power(q)
    return _weil_bounds_ok(a1, a2, q)


@dataclass(frozen=True)
class WeilQuartic:
    a1: int
    a2: int
    p: int
    k: int = 1

    def __post_init__(self):
        if not isprime(self.p) or self.k < 1:
            raise ValueError(f"q = {self.p}^{self.k} is not a prime power")
        if not _weil_bounds_ok(self.a1, self.a2, self.q):
            raise ValueError(f"({self.a1}, {self.a2}) is not a {self.q}-Weil quartic")

    @property
    def q(self) -> int:
        return self.p ** self.k

    @property
    def trace(self) -> int:
        return -self.a1

    def coefficients(self) -> tuple[int, int, int, int, int]:
        q = self.q
        return (1, self.a1, self.a2, q * self.a1, q * q)


def discriminant(w: WeilQuartic) -> int:
    return w.a1 * w.a1 - 4 * w.a2 + 8 * w.q


class SurfaceClass(enum.Enum):
    ORDINARY = "ordinary"
    PRANK_ONE = "prank1"
    SS_SIMPLE_PP = "ss_simple_pp"     # X^4 + pX^2 + p^2
    SS_SIMPLE_MP = "ss_simple_mp"     # X^4 - pX^2 + p^2
    SS_SIMPLE_0 = "ss_simple_0"       # X^4 + p^2
    SS_SIMPLE_M2P = "ss_simple_m2p"   # (X^2 - p)^2
    SS_SPLIT = "ss_split"             # (X^2 + p)^2
    NOT_SS = "not_ss"

    @property
    def is_supersingular(self) -> bool:
        return self.name.startswith("SS_")

    @property
    def is_simple_ss(self) -> bool:
        return self.name.startswith("SS_SIMPLE")


# a2 as a multiple of p for each supersingular template
SS_TEMPLATES = {
    1: SurfaceClass.SS_SIMPLE_PP,
    -1: SurfaceClass.SS_SIMPLE_MP,
    0: SurfaceClass.SS_SIMPLE_0,
    -2: SurfaceClass.SS_SIMPLE_M2P,
    2: SurfaceClass.SS_SPLIT,
}


def classify_supersingular(w: WeilQuartic) -> SurfaceClass:
    if w.k != 1:
        raise ValueError("classification is only defined over prime fields")
    if w.p < 7:
        raise ValueError(f"classification requires p >= 7, got p = {w.p}")
    if w.a1 == 0 and w.a2 % w.p == 0:
        cls = SS_TEMPLATES.get(w.a2 // w.p)
        if cls is not None:
            return cls
    return SurfaceClass.NOT_SS


def p_rank(w: WeilQuartic) -> int:
    """Number of unit roots, read off from P mod p = X^2 (X^2 + a1 X + a2)."""
    p = w.p
    if w.a2 % p:
        return 2
    if w.a1 % p:
        return 1
    return 0


def classify(w: WeilQuartic) -> SurfaceClass:
    """Supersingular template if any, else ordinary / p-rank one."""
    cls = classify_supersingular(w)
    if cls is not SurfaceClass.NOT_SS:
        return cls
    return {2: SurfaceClass.ORDINARY, 1: SurfaceClass.PRANK_ONE}.get(
        p_rank(w), SurfaceClass.NOT_SS)


@dataclass(frozen=True)
class QuadFieldElem:
    """b = (u + v sqrt(d)) / 2 in the ring of integers of Q(sqrt(d))."""

    d: int
    u: int
    v: int

    def __post_init__(self):
        if self.d <= 1 or not is_squarefree(self.d):
            raise ValueError(f"d = {self.d} must be a squarefree integer > 1")
        if self.d % 4 == 1:
            ok = (self.u - self.v) % 2 == 0
        else:
            ok = self.u % 2 == 0 and self.v % 2 == 0
        if not ok:
            raise ValueError(f"({self.u} + {self.v} sqrt {self.d})/2 is not integral")

    @property
    def trace(self) -> int:
        return self.u

    @property
    def norm(self) -> int:
        return (self.u * self.u - self.d * self.v * self.v) // 4

    def conjugate(self) -> "QuadFieldElem":
        return QuadFieldElem(self.d, self.u, -self.v)

    def quartic(self, q: int) -> tuple[int, int]:
        """(a1, a2) of (X^2 + bX + q)(X^2 + b'X + q)."""
        return self.trace, 2 * q + self.norm


def rm_factor(w: WeilQuartic, d: int) -> Optional[QuadFieldElem]:
    """
    Factor w as (X^2 + bX + q)(X^2 + b'X + q) with b in O_{Q(sqrt d)}.

    Matching coefficients gives trace(b) = a1 and norm(b) = a2 - 2q, i.e.
    u = a1 and d v^2 = discriminant(w).  Returns b with v >= 0, or None when
    no integral solution exists.
    """
    if d <= 1 or not is_squarefree(d):
        raise ValueError(f"d = {d} must be a squarefree integer > 1")
    delta = discriminant(w)
    if delta == 0 and w.k != 1:
        raise ValueError("square factorisation is only characterised for degree-1 primes")
    if delta % d:
        return None
    v2 = delta // d
    v = isqrt(v2)
    if v * v != v2:
        return None
    try:
        return QuadFieldElem(d, w.a1, v)
    except ValueError:
        return None
