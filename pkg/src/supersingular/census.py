"""
Supersingular-prime census for genus-2 curves y^2 = f(x) over Q.

Point counts over F_p and F_{p^2} are naive character sums, vectorised with
numpy.  F_{p^2} = F_p(sqrt r) with r the smallest non-residue, and the
quadratic character of z in F_{p^2} is the Legendre symbol of its norm.
"""

from __future__ import annotations

import csv
import io
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Optional, Sequence, Union

import numpy as np
from sympy import Poly, discriminant, primerange, symbols

from .finite_field import smallest_nonresidue
from .weil import SurfaceClass, WeilQuartic, classify, p_rank, validate_weil

log = logging.getLogger(__name__)

_X = symbols("x")


class BadReduction(ValueError):
    pass


@dataclass(frozen=True)
class HyperellipticCurve:
    """y^2 = f(x), coefficients high to low, degree 5 or 6."""

    f_coeffs: tuple[int, ...]
    disc: int = 0

    def __post_init__(self):
        coeffs = tuple(int(c) for c in self.f_coeffs)
        while coeffs and coeffs[0] == 0:
            coeffs = coeffs[1:]
        if len(coeffs) - 1 not in (5, 6):
            raise ValueError(f"f must have degree 5 or 6, got {len(coeffs) - 1}")
        d = int(discriminant(Poly(coeffs, _X)))
        if d == 0:
            raise ValueError("f is not squarefree")
        object.__setattr__(self, "f_coeffs", coeffs)
        object.__setattr__(self, "disc", d)

    @classmethod
    def parse(cls, text: str) -> "HyperellipticCurve":
        """
        Parse ``f: c5,c4,c3,c2,c1,c0`` (the ``f:`` prefix is optional).

        Five numbers are the trailing coefficients c4..c0 of a monic quintic,
        six are c5..c0 and seven are c6..c0.
        """
        body = text.strip()
        if ":" in body:
            key, body = body.split(":", 1)
            if key.strip() != "f":
                raise ValueError(f"expected 'f: ...', got {text!r}")
        try:
            vals = [int(v) for v in body.replace(" ", "").split(",") if v != ""]
        except ValueError:
            raise ValueError(f"bad coefficient list {body!r}") from None
        if len(vals) == 5:
            vals = [1] + vals
        if len(vals) not in (6, 7):
            raise ValueError(f"expected 5, 6 or 7 coefficients, got {len(vals)}")
        return cls(tuple(vals))

    @classmethod
    def from_file(cls, path) -> "HyperellipticCurve":
        with open(path) as fh:
            for line in fh:
                line = line.split("#", 1)[0].strip()
                if line.startswith("f"):
                    return cls.parse(line)
        raise ValueError(f"no 'f:' line in {path}")

    @property
    def degree(self) -> int:
        return len(self.f_coeffs) - 1

    @property
    def leading(self) -> int:
        return self.f_coeffs[0]

    def is_bad(self, p: int) -> bool:
        return (2 * self.disc * self.leading) % p == 0

    def __str__(self):
        return "f: " + ",".join(str(c) for c in self.f_coeffs)


def _squares(p: int) -> np.ndarray:
    """chi table: chi[n] for n in [0, p)."""
    chi = -np.ones(p, dtype=np.int64)
    chi[(np.arange(1, p) ** 2) % p] = 1
    chi[0] = 0
    return chi


def _count_fp(coeffs: Sequence[int], p: int) -> int:
    chi = _squares(p)
    x = np.arange(p, dtype=np.int64)
    acc = np.zeros(p, dtype=np.int64)
    for c in coeffs:
        acc = (acc * x + c) % p
    return int(p + chi[acc].sum())


def _count_fp2(coeffs: Sequence[int], p: int) -> int:
    """
    Sum over z in F_{p^2} of (1 + chi(f(z))).  Elements with b = 0 lie in
    F_p, where every nonzero value is a square in F_{p^2}; the b > 0 half
    is doubled since f(conj z) = conj f(z) has the same norm.
    """
    r = smallest_nonresidue(p)
    chi = _squares(p)
    h = (p - 1) // 2
    # u, v < p keeps every intermediate below (r + 1) p^2 + p
    dt = np.int32 if (r + 2) * p * p < 2 ** 31 else np.int64
    a = np.arange(p, dtype=dt)[:, None]
    b = np.arange(1, h + 1, dtype=dt)[None, :]
    u = np.zeros((p, h), dtype=dt)
    v = np.zeros((p, h), dtype=dt)
    for c in coeffs:
        u, v = (u * a + r * (v * b) + c) % p, (u * b + v * a) % p
    norm = (u * u - r * (v * v)) % p
    half = int(chi[norm].sum())
    xs = np.arange(p, dtype=np.int64)
    acc = np.zeros(p, dtype=np.int64)
    for c in coeffs:
        acc = (acc * xs + c) % p
    base = int(np.count_nonzero(acc))
    return p * p + base + 2 * half


def _points_at_infinity(c: HyperellipticCurve, p: int, k: int) -> int:
    if c.degree == 5:
        return 1
    lc = c.leading % p
    # every element of F_p is a square in F_{p^2}
    if k == 2:
        return 2
    return 2 if _squares(p)[lc] == 1 else 0


def reduce_and_count(c: HyperellipticCurve, p: int, k: int = 1) -> int:
    """#C(F_{p^k}) for the smooth model, k in {1, 2}."""
    if k not in (1, 2):
        raise ValueError("only k = 1, 2 are supported")
    if p == 2 or c.is_bad(p):
        raise BadReduction(f"bad reduction at p = {p}")
    coeffs = [x % p for x in c.f_coeffs]
    n = _count_fp(coeffs, p) if k == 1 else _count_fp2(coeffs, p)
    return n + _points_at_infinity(c, p, k)


def quartic_from_counts(n1: int, n2: int, p: int) -> tuple[int, int]:
    a1 = n1 - p - 1
    twice = a1 * a1 + n2 - p * p - 1
    if twice % 2:
        raise ArithmeticError(f"non-integral a2 at p = {p}: counting is inconsistent")
    return a1, twice // 2


def frobenius_quartic(c: HyperellipticCurve, p: int) -> WeilQuartic:
    n1, n2 = reduce_and_count(c, p, 1), reduce_and_count(c, p, 2)
    a1, a2 = quartic_from_counts(n1, n2, p)
    if not validate_weil(a1, a2, p):
        raise ArithmeticError(f"({a1}, {a2}) at p = {p} violates the Weil bounds")
    return WeilQuartic(a1, a2, p)


@dataclass(frozen=True)
class CensusRecord:
    p: int
    n1: int
    n2: int
    a1: int
    a2: int
    delta: int
    cls: SurfaceClass

    def row(self) -> list:
        return [self.p, self.n1, self.n2, self.a1, self.a2, self.delta, self.cls.value]

    @property
    def quartic(self) -> WeilQuartic:
        return WeilQuartic(self.a1, self.a2, self.p)


CSV_HEADER = ("p", "n1", "n2", "a1", "a2", "delta", "class")


def census_record(c: HyperellipticCurve, p: int) -> CensusRecord:
    n1, n2 = reduce_and_count(c, p, 1), reduce_and_count(c, p, 2)
    a1, a2 = quartic_from_counts(n1, n2, p)
    w = WeilQuartic(a1, a2, p)
    return CensusRecord(p, n1, n2, a1, a2, a1 * a1 - 4 * a2 + 8 * p, classify(w))


def _record_or_none(args):
    c, p = args
    if c.is_bad(p):
        return None
    return census_record(c, p)


def census_scan(c: HyperellipticCurve, x: float, workers: Optional[int] = None,
                pmin: int = 7) -> list[CensusRecord]:
    """
    One record per good prime pmin <= p <= x, in increasing order.

    ``workers`` > 1 farms primes out to a process pool; ``map`` keeps the
    input order, so the result is identical to the sequential scan.
    """
    primes = [int(p) for p in primerange(max(pmin, 3), int(x) + 1)]
    jobs = [(c, p) for p in primes]
    if workers and workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(_record_or_none, jobs, chunksize=8))
    else:
        results = [_record_or_none(j) for j in jobs]
    out = []
    for p, rec in zip(primes, results):
        if rec is None:
            log.info("skipping bad prime p = %d", p)
            continue
        out.append(rec)
    return out


def trace_scan(c: HyperellipticCurve, x: float, pmin: int = 7) -> list[tuple[int, int]]:
    """(p, a1) from N1 alone; cheap screening since p-rank 0 forces p | a1."""
    out = []
    for p in primerange(max(pmin, 3), int(x) + 1):
        if c.is_bad(p):
            continue
        out.append((int(p), reduce_and_count(c, int(p), 1) - p - 1))
    return out


def write_csv(records: Iterable[CensusRecord], fh=None) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in records:
        w.writerow(r.row())
    text = buf.getvalue()
    if fh is not None:
        fh.write(text)
    return text


def read_csv(fh) -> list[CensusRecord]:
    rd = csv.DictReader(fh)
    if tuple(rd.fieldnames or ()) != CSV_HEADER:
        raise ValueError(f"census CSV header must be {','.join(CSV_HEADER)}")
    out = []
    for row in rd:
        vals = {k: int(row[k]) for k in CSV_HEADER[:-1]}
        out.append(CensusRecord(cls=SurfaceClass(row["class"]), **vals))
    return out


# ------------------------------------------------------------ counting

@dataclass(frozen=True)
class Constant:
    t: int

    def __call__(self, p: int) -> int:
        return self.t


@dataclass(frozen=True)
class AffineInP:
    """g(p) = 2p + m0."""
    m0: int = 0

    def __call__(self, p: int) -> int:
        return 2 * p + self.m0


@dataclass(frozen=True)
class ExternalTable:
    table: Mapping[int, int]

    def __call__(self, p: int) -> int:
        try:
            return int(self.table[p])
        except KeyError:
            raise ValueError(f"no g({p}) in the table") from None

    def __hash__(self):
        return hash(tuple(sorted(self.table.items())))


CoefficientRule = Union[Constant, AffineInP, ExternalTable]


def evaluate_rule(rule: CoefficientRule, p: int) -> int:
    g = rule(p)
    if abs(g) > 6 * p:
        raise ValueError(f"|g({p})| = {abs(g)} exceeds 6p")
    return g


@dataclass(frozen=True)
class SSTotal:
    pass


@dataclass(frozen=True)
class SSSplit:
    pass


@dataclass(frozen=True)
class SplitWithRule:
    rule: CoefficientRule


@dataclass(frozen=True)
class SplitWithInterval:
    lo: float
    hi: float


Selector = Union[SSTotal, SSSplit, SplitWithRule, SplitWithInterval]


def counting_functions(records: Iterable[CensusRecord], selector: Selector) -> int:
    n = 0
    for r in records:
        if isinstance(selector, SSTotal):
            n += r.cls.is_supersingular
        elif isinstance(selector, SSSplit):
            n += r.cls is SurfaceClass.SS_SPLIT
        elif isinstance(selector, SplitWithRule):
            # the rule is evaluated (and range-checked) at every prime it could count
            if r.delta == 0:
                n += r.a2 == evaluate_rule(selector.rule, r.p)
        elif isinstance(selector, SplitWithInterval):
            n += r.delta == 0 and selector.lo <= r.a2 <= selector.hi
        else:
            raise TypeError(f"unknown selector {selector!r}")
    return int(n)


def ss_primes(records: Iterable[CensusRecord]) -> list[int]:
    return [r.p for r in records if r.cls.is_supersingular]


def prank_zero(records: Iterable[CensusRecord]) -> list[int]:
    return [r.p for r in records if p_rank(r.quartic) == 0]
