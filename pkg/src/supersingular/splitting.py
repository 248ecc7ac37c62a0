"""
Auxiliary primes ell for which the supersingular templates split mod ell.

The five templates are

    i = 1: X^4 + pX^2 + p^2      i = 4: (X^2 - p)^2
    i = 2: X^4 - pX^2 + p^2      i = 5: (X^2 + p)^2
    i = 3: X^4 + p^2

For ell in the admissible set L_i the template splits completely mod ell
exactly when (p / ell) != -1.  Outside L_i this can fail, e.g. i = 5,
ell = 7, p = 2.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Union

from sympy import isprime, primerange

from .finite_field import as_int, legendre, linear_roots
from .weil import WeilQuartic, is_squarefree


class CaseIndex(enum.IntEnum):
    PLUS_P = 1
    MINUS_P = 2
    ZERO = 3
    MINUS_2P = 4
    PLUS_2P = 5


# a2 / p for each template (a1 = 0 throughout)
_A2_OVER_P = {1: 1, 2: -1, 3: 0, 4: -2, 5: 2}


def _ramified_predicate(r) -> Callable[[int], bool]:
    if r is None:
        return lambda ell: False
    if callable(r):
        return r
    primes = frozenset(int(x) for x in r)
    return lambda ell: ell in primes


@dataclass(frozen=True)
class Plain:
    pass


@dataclass(frozen=True)
class RM:
    """
    Real multiplication by Q(sqrt d).

    ``rule`` picks the split condition: ``"displayed"`` is (-d / ell) = 1,
    ``"split"`` is ell split in Q(sqrt d), i.e. (d / ell) = 1.  The two agree
    for ell = 1 mod 4 only.
    """
    d: int
    ramified: Union[Iterable[int], Callable[[int], bool], None] = field(default=None, compare=False)
    rule: str = "displayed"

    def __post_init__(self):
        if self.d <= 1 or not is_squarefree(self.d):
            raise ValueError(f"RM needs squarefree d > 1, got {self.d}")
        if self.rule not in ("displayed", "split"):
            raise ValueError(f"unknown RM rule {self.rule!r}")
        object.__setattr__(self, "ramified", _ramified_predicate(self.ramified))


@dataclass(frozen=True)
class QM:
    dD: int
    ramified: Union[Iterable[int], Callable[[int], bool], None] = field(default=None, compare=False)

    def __post_init__(self):
        if self.dD < 1:
            raise ValueError(f"quaternion discriminant must be >= 1, got {self.dD}")
        object.__setattr__(self, "ramified", _ramified_predicate(self.ramified))


AdmissibilityContext = Union[Plain, RM, QM]


def rm_split_displayed(d: int, ell) -> bool:
    return legendre(-d, ell) == 1


def rm_split_field(d: int, ell) -> bool:
    """ell (odd, prime to d) splits in Q(sqrt d)."""
    return legendre(d, ell) == 1


def _in_plain(l: int, i: int) -> bool:
    if i in (1, 2):
        return l % 12 == 1
    if i == 3:
        return l % 8 == 1
    if i == 4:
        return True
    return l % 4 == 1


def admissible(ell, i: int, ctx: Optional[AdmissibilityContext] = None) -> bool:
    l = as_int(ell)
    i = CaseIndex(i)
    if not _in_plain(l, i):
        return False
    if ctx is None or isinstance(ctx, Plain):
        return True
    if ctx.ramified(l):
        return False
    if isinstance(ctx, RM):
        split = rm_split_displayed if ctx.rule == "displayed" else rm_split_field
        return split(ctx.d, l)
    return l > 7 and ctx.dD % l != 0


def template_coefficients(i: int, p: int) -> tuple[int, int]:
    """(a1, a2) of the i-th template."""
    return 0, _A2_OVER_P[CaseIndex(i)] * p


def ss_template(i: int, p: int) -> WeilQuartic:
    a1, a2 = template_coefficients(i, p)
    return WeilQuartic(a1, a2, p)


def splits_by_legendre(p: int, ell, i: int, ctx: Optional[AdmissibilityContext] = None) -> bool:
    if not admissible(ell, i, ctx):
        raise ValueError(f"ell = {int(ell)} is not admissible for case {int(i)}")
    return legendre(p, ell) != -1


def factor_roots(p: int, ell, i: int) -> Optional[list[int]]:
    """Roots mod ell of the i-th template if it splits completely, else None."""
    if not isprime(p):
        raise ValueError(f"{p} is not prime")
    l = as_int(ell)
    a1, a2 = template_coefficients(i, p)
    return linear_roots((a1, a2, p * a1, p * p), l)


def splits_by_factorization(p: int, ell, i: int) -> bool:
    return factor_roots(p, ell, i) is not None


def equivalence_rows(ells: Iterable[int], p_max: int = 500,
                     ctx: Optional[AdmissibilityContext] = None) -> list[tuple]:
    """(i, ell, p, legendre_side, factor_side, agree) over admissible (i, ell)."""
    rows = []
    for i in CaseIndex:
        for l in ells:
            if not admissible(l, i, ctx):
                continue
            for p in primerange(2, p_max):
                a = splits_by_legendre(p, l, i, ctx)
                b = splits_by_factorization(p, l, i)
                rows.append((int(i), l, int(p), a, b, a == b))
    return rows


def inadmissible_disagreements(p_max: int = 500, ell_max: int = 50) -> list[tuple[int, int, int]]:
    """(p, ell, i) with ell outside L_i where the Legendre rule gives the wrong answer."""
    out = []
    for i in CaseIndex:
        for l in primerange(3, ell_max):
            if admissible(l, i):
                continue
            for p in primerange(2, p_max):
                if (legendre(p, l) != -1) != splits_by_factorization(p, l, i):
                    out.append((int(p), int(l), int(i)))
    return out
