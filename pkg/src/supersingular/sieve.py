"""
Numerical side of the sieve: the residue-class sieve report, the bound
curves, the Chebotarev budget and the parameter schedules.

Asymptotic statements carry unspecified constants, so this module reports
numbers and ratios; only exact identities are meant to be asserted.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

from sympy import isprime

from .finite_field import legendre
from .splitting import CaseIndex, admissible


class BoundCase(enum.Enum):
    GENERIC = "generic"
    RM_OR_QM = "rm_or_qm"


class ScheduleCase(enum.Enum):
    GENERIC = "generic"
    RM = "rm"
    QM = "qm"


def _loglog(x: float) -> float:
    return math.log(math.log(x))


@dataclass(frozen=True)
class SieveConfig:
    x: float
    primes: tuple[int, ...]
    case: CaseIndex = CaseIndex.MINUS_2P
    C: float = 2.0
    t: int = field(default=0)

    def __post_init__(self):
        primes = tuple(int(l) for l in self.primes)
        object.__setattr__(self, "primes", primes)
        object.__setattr__(self, "case", CaseIndex(self.case))
        if not self.t:
            object.__setattr__(self, "t", len(primes))
        if self.x <= math.e:
            raise ValueError("x must exceed e")
        if self.t != len(primes) or self.t < 1:
            raise ValueError("t must equal the number of sieving primes (at least one)")
        if any(l < 3 or not isprime(l) for l in primes):
            raise ValueError("sieving primes must be odd primes")
        if list(primes) != sorted(set(primes)):
            raise ValueError("sieving primes must be strictly increasing")
        logx = math.log(self.x)
        if self.t > math.ceil(math.sqrt(logx)):
            raise ValueError(f"t = {self.t} exceeds ceil(sqrt(log x)) = {math.ceil(math.sqrt(logx))}")
        if self.x > math.e ** math.e:
            cap = self.C * logx / _loglog(self.x)
            if primes[-1] > cap:
                raise ValueError(f"ell = {primes[-1]} exceeds C log x / log log x = {cap:.3f}")
        if self.P >= self.x:
            raise ValueError(f"P_t = {self.P} must be below x = {self.x}")

    @property
    def P(self) -> int:
        return math.prod(self.primes)

    @classmethod
    def from_dict(cls, d: dict) -> "SieveConfig":
        cfg = cls(x=float(d["x"]), primes=tuple(d["primes"]),
                  case=CaseIndex(int(d.get("case", 4))), C=float(d.get("C", 2.0)))
        if "t" in d and int(d["t"]) != cfg.t:
            raise ValueError("t must equal the number of sieving primes")
        return cfg


def omega_set(ell: int) -> list[int]:
    """Non-residues mod ell."""
    return [n for n in range(ell) if legendre(n, ell) == -1]


class SieveReport(NamedTuple):
    total: int
    per_ell: dict
    union: int
    leftover: int
    bound_term: float
    identity: bool
    inequality: bool
    leftover_ratio: float

    def as_dict(self) -> dict:
        d = self._asdict()
        d["per_ell"] = {str(k): v for k, v in self.per_ell.items()}
        return d


def sieve_report(member_primes: Iterable[int], cfg: SieveConfig) -> SieveReport:
    """
    M_ell = {p in M : (p / ell) != -1} and S = {p in M : (p / ell) = -1 for
    every ell}.  M is exactly the disjoint union of (union of M_ell) and S.
    """
    ms = sorted(set(int(p) for p in member_primes))
    bad = [p for p in ms if p > cfg.x or not isprime(p)]
    if bad:
        raise ValueError(f"members must be primes <= x, got {bad[:3]}")
    hit = {l: [legendre(p, l) != -1 for p in ms] for l in cfg.primes}
    per_ell = {l: sum(v) for l, v in hit.items()}
    in_union = [any(hit[l][k] for l in cfg.primes) for k in range(len(ms))]
    union = sum(in_union)
    leftover = len(ms) - union
    bound = cfg.x / (2 ** cfg.t * math.log(cfg.x / cfg.P))
    return SieveReport(
        total=len(ms),
        per_ell=per_ell,
        union=union,
        leftover=leftover,
        bound_term=bound,
        identity=len(ms) == union + leftover,
        inequality=len(ms) <= sum(per_ell.values()) + leftover,
        leftover_ratio=leftover / bound,
    )


def theorem_bound(case: BoundCase, x: float) -> float:
    if x <= math.e ** math.e:
        raise ValueError("theorem bounds need x > e^e")
    lx, llx = math.log(x), _loglog(x)
    if BoundCase(case) is BoundCase.GENERIC:
        return x * (llx / lx) ** 1.5
    return x * (llx / lx) ** 2


# ------------------------------------------------------------ Chebotarev

def adaptive_simpson(f, a: float, b: float, tol: float = 1e-9, rel: float = 1e-13,
                     max_depth: int = 60) -> float:
    """
    Adaptive Simpson.  The per-interval target is max(tol, rel * |estimate|),
    so huge integrals do not chase an absolute tolerance below float precision.
    """
    fa, fm, fb = f(a), f((a + b) / 2), f(b)
    whole = (b - a) / 6 * (fa + 4 * fm + fb)
    eps = max(tol, rel * abs(whole))
    total = 0.0
    stack = [(a, b, fa, fm, fb, whole, eps, 0)]
    while stack:
        a0, b0, f0, fm0, f1, s, e, depth = stack.pop()
        m = (a0 + b0) / 2
        lm, rm = (a0 + m) / 2, (m + b0) / 2
        flm, frm = f(lm), f(rm)
        left = (m - a0) / 6 * (f0 + 4 * flm + fm0)
        right = (b0 - m) / 6 * (fm0 + 4 * frm + f1)
        if depth >= max_depth or abs(left + right - s) <= 15 * e:
            total += left + right + (left + right - s) / 15
        else:
            stack.append((a0, m, f0, flm, fm0, left, e / 2, depth + 1))
            stack.append((m, b0, fm0, frm, f1, right, e / 2, depth + 1))
    return total


def Li(x: float, tol: float = 1e-9) -> float:
    """Offset logarithmic integral: integral of dt / log t over [2, x]."""
    if x < 2:
        raise ValueError("Li is taken from 2")
    if x == 2:
        return 0.0
    # t = e^s smooths the integrand: dt / log t = e^s / s ds
    return adaptive_simpson(lambda s: math.exp(s) / s, math.log(2), math.log(x), tol)


@dataclass(frozen=True)
class FieldBudget:
    degree_LK: int
    degree_LQ: int
    degree_KQ: int
    log_dK: float
    ramified: tuple[int, ...]
    rad_rel_disc: int

    def __post_init__(self):
        if min(self.degree_LK, self.degree_LQ, self.degree_KQ) < 1:
            raise ValueError("degrees must be >= 1")
        if self.degree_LQ != self.degree_LK * self.degree_KQ:
            raise ValueError("[L:Q] must equal [L:K][K:Q]")
        r = tuple(int(p) for p in self.ramified)
        if list(r) != sorted(set(r)):
            raise ValueError("ramified primes must be sorted and distinct")
        object.__setattr__(self, "ramified", r)
        if self.rad_rel_disc < 1:
            raise ValueError("radical must be a positive integer")


class Budget(NamedTuple):
    M: float
    henselUB: float
    upper: float
    applicable: bool


def chebotarev_budget(fb: FieldBudget, cardC: int, cardG: int, x: float,
                      kappa: float = 1.0) -> Budget:
    if not 1 <= cardC <= cardG:
        raise ValueError("need 1 <= |C| <= |G|")
    if x < 2:
        raise ValueError("need x >= 2")
    M = fb.degree_LK * math.exp(fb.log_dK / fb.degree_KQ) * math.prod(fb.ramified)
    hensel = (fb.degree_LK * fb.log_dK
              + (fb.degree_LQ - fb.degree_KQ) * math.log(fb.rad_rel_disc)
              + fb.degree_LQ * math.log(fb.degree_LK))
    upper = cardC / cardG * Li(x)
    applicable = math.log(x) >= kappa * fb.degree_KQ * math.log(M * x)
    return Budget(M, hensel, upper, applicable)


# ------------------------------------------------------------ schedules

def param_schedule(case: ScheduleCase, x: float, n_K: int = 1, N_A: int = 1, d_K: int = 1,
                   c: float = 1.0, c1: float = 1.0) -> tuple[float, int]:
    """(ell_1, t) for the three endomorphism types."""
    case = ScheduleCase(case)
    if x <= math.e ** math.e:
        raise ValueError("schedules need x > e^e")
    if min(n_K, N_A, d_K) < 1 or c <= 0 or c1 <= 0:
        raise ValueError("integer parameters must be >= 1 and c, c1 > 0")
    lx = math.log(x)
    if case is ScheduleCase.GENERIC:
        ell1 = c1 * (lx / (n_K * _loglog(N_A * d_K * x))) ** 0.25
    elif case is ScheduleCase.RM:
        ell1 = c1 * (lx / (n_K * _loglog(N_A * x))) ** 0.5
    else:
        ell1 = c1 * lx / (n_K * _loglog(N_A * d_K * x))
    return ell1, round(c * _loglog(x))


def schedule_primes(ell1: float, t: int, case: int = 4, start: int = 3) -> tuple[int, ...]:
    """The t smallest primes >= max(ell1, start) admissible for the case."""
    out = []
    l = max(start, math.ceil(ell1))
    while len(out) < t:
        if isprime(l) and l > 2 and admissible(l, case):
            out.append(l)
        l += 1
    return tuple(out)


def ratio_identity(x: float) -> float:
    """(log x / log log x)^{1/2}, the exact ratio of the two bound curves."""
    return math.sqrt(math.log(x) / _loglog(x))
