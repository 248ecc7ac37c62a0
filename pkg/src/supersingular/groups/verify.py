"""
Structural checks for the three group families.

Each check returns a report entry::

    {"proposition": str, "family": str, "ell": int, "status": "pass" | "fail",
     "counterexample": None | list, "checked": int}

Exhaustive where the group is small; sampled (fixed seed) otherwise.
"""

from __future__ import annotations

import itertools
from typing import Optional

import numpy as np
from sympy import primerange

from ..finite_field import as_int
from .core import (
    ConjSetId, Family, GroupElement, NotTriangularizable, Subgroup, all_conj_ids,
    conj_props_admissible, conjugate_into_borel, group_order, in_conj_set, is_member,
    quotient_image_size, torus_tuples, witness,
)
from .enumerate import (
    all_fiber, all_gl2, binverse, conj_mask, fiber_conj_members, member_mask,
    random_conj_borel, random_fiber, random_gl2, random_gsp4,
    random_unipotent_prime, subgroup_elements, torus_part,
)

SEED = 20240501


def _entry(prop, family, ell, bad, checked, **extra):
    out = {
        "proposition": prop,
        "family": family.value if isinstance(family, Family) else family,
        "ell": int(ell),
        "status": "fail" if bad is not None else "pass",
        "counterexample": bad,
        "checked": int(checked),
    }
    out.update(extra)
    return out


def _tolist(x):
    return None if x is None else np.asarray(x).tolist()


def _first_bad(mask: np.ndarray):
    idx = np.flatnonzero(~mask)
    return int(idx[0]) if len(idx) else None


def _mul(a, b, ell):
    return np.matmul(a, b) % ell


# ------------------------------------------------------------ part (1)

def check_orders(family: Family, ell: int) -> dict:
    """Exhaustive subgroup sizes against the closed forms."""
    sizes = {}
    for sub in Subgroup:
        arr, _ = subgroup_elements(family, sub, ell)
        sizes[sub.value] = (len(arr), group_order(family, sub, ell))
    bad = {k: v for k, v in sizes.items() if v[0] != v[1]}
    return _entry("orders", family, ell, bad or None,
                  sizes[Subgroup.FULL.value][0], sizes=sizes)


# ------------------------------------------------------------ part (2)

def check_normality(family: Family, ell: int) -> list[dict]:
    """g^{-1} u g stays in U and U' for every Borel g."""
    l = as_int(ell)
    b, bmu = subgroup_elements(family, Subgroup.BOREL, l)
    binv = binverse(family, b, l, bmu)
    out = []
    for sub in (Subgroup.UNIPOTENT, Subgroup.UNIPOTENT_PRIME):
        u, umu = subgroup_elements(family, sub, l)
        bad = None
        for k in range(len(b)):
            conj = _mul(_mul(binv[k], u, l), b[k], l)
            ok = member_mask(family, sub, conj, l, umu)
            i = _first_bad(ok)
            if i is not None:
                bad = [_tolist(b[k]), _tolist(u[i])]
                break
        out.append(_entry(f"normal_{sub.value}", family, l, bad, len(b) * len(u)))
    return out


# ------------------------------------------------------------ part (3)

def _torus_mul(family, t1, t2, ell):
    return t1 * t2 % ell


def check_quotients(family: Family, ell: int, chunk: int = 64) -> list[dict]:
    """
    B/U abelian (every commutator lies in U) and the torus projection is a
    homomorphism B -> T with kernel exactly U.
    """
    l = as_int(ell)
    b, bmu = subgroup_elements(family, Subgroup.BOREL, l)
    binv = binverse(family, b, l, bmu)
    tb = torus_part(family, b, l, bmu)
    comm_bad = hom_bad = None
    checked = 0
    for s in range(0, len(b), chunk):
        x, xi = b[s:s + chunk], binv[s:s + chunk]
        xs = x[:, None]
        # [x, y] = x^{-1} y^{-1} x y for every y
        comm = _mul(_mul(_mul(xi[:, None], binv[None], l), xs, l), b[None], l)
        comm = comm.reshape((-1,) + b.shape[1:])
        cmu = None if bmu is None else np.ones(len(comm), dtype=np.int64)
        ok = member_mask(family, Subgroup.UNIPOTENT, comm, l, cmu)
        i = _first_bad(ok)
        if i is not None and comm_bad is None:
            comm_bad = [_tolist(x[i // len(b)]), _tolist(b[i % len(b)])]
        prod = _mul(xs, b[None], l).reshape((-1,) + b.shape[1:])
        pmu = None if bmu is None else (bmu[s:s + chunk, None] * bmu[None] % l).ravel()
        lhs = torus_part(family, prod, l, pmu)
        rhs = _torus_mul(family, tb[s:s + chunk, None], tb[None], l).reshape(lhs.shape)
        i = _first_bad((lhs == rhs).all(axis=1))
        if i is not None and hom_bad is None:
            hom_bad = [_tolist(x[i // len(b)]), _tolist(b[i % len(b)])]
        checked += len(x) * len(b)
    ident = np.ones(tb.shape[1], dtype=np.int64)
    kernel = (tb == ident).all(axis=1)
    in_u = member_mask(family, Subgroup.UNIPOTENT, b, l, bmu)
    i = _first_bad(kernel == in_u)
    ker_bad = None if i is None else [_tolist(b[i])]
    n_t = len(np.unique(tb, axis=0))
    t_bad = None if n_t == group_order(family, Subgroup.TORUS, l) else [n_t]
    return [
        _entry("abelian_quotient", family, l, comm_bad, checked),
        _entry("torus_projection_hom", family, l, hom_bad, checked),
        _entry("torus_projection_kernel", family, l, ker_bad, len(b)),
        _entry("torus_projection_onto", family, l, t_bad, len(b)),
    ]


# ------------------------------------------------------ conjugacy sets

def admissible_ells(family: Family, upto: int = 200) -> list[int]:
    return [l for l in primerange(5, upto + 1) if conj_props_admissible(family, l)]


def check_witnesses(upto: int = 200) -> list[dict]:
    out = []
    for cid in all_conj_ids():
        ells = admissible_ells(cid.family, upto)
        bad = None
        for l in ells:
            w = witness(cid, l)
            if not in_conj_set(w, cid):
                bad = [l, _tolist(w.entries)]
                break
        out.append(_entry(f"witness_{cid.i}", cid.family, max(ells), bad, len(ells), ells=ells))
    return out


def check_set_equalities(ell: int) -> list[dict]:
    """Sets that coincide under the existential reading: C'4 = C'5, C1 = C2, C4 = C5."""
    l = as_int(ell)
    out = []
    g = all_gl2(l)
    a = conj_mask(ConjSetId(Family.GL2QM, 4), g, l)
    b = conj_mask(ConjSetId(Family.GL2QM, 5), g, l)
    i = _first_bad(a == b)
    out.append(_entry("set_equal_4_5", Family.GL2QM, l, None if i is None else _tolist(g[i]), len(g)))
    f = all_fiber(l)
    for i1, i2 in ((1, 2), (4, 5)):
        a = conj_mask(ConjSetId(Family.FIBER, i1), f, l)
        b = conj_mask(ConjSetId(Family.FIBER, i2), f, l)
        i = _first_bad(a == b)
        out.append(_entry(f"set_equal_{i1}_{i2}", Family.FIBER, l,
                          None if i is None else _tolist(f[i]), len(f)))
    return out


def _iter_members(cid: ConjSetId, ell: int):
    if cid.family is Family.GL2QM:
        g = all_gl2(ell)
        yield g[conj_mask(cid, g, ell)]
    else:
        yield from fiber_conj_members(cid, ell)


def borel_elements(family: Family, ell: int) -> tuple[np.ndarray, Optional[np.ndarray]]:
    """Every Borel element of GL2 or the fibre product, built from torus x unipotent."""
    l = as_int(ell)
    if family is Family.GSP4:
        raise ValueError("use subgroup_elements for GSp4")
    t = torus_tuples(family, l)
    r = np.arange(l)
    if family is Family.GL2QM:
        tt, a = np.repeat(t, l, axis=0), np.tile(r, len(t))
        m = np.zeros((len(tt), 2, 2), dtype=np.int64)
        m[:, 0, 0], m[:, 1, 1], m[:, 0, 1] = tt[:, 0], tt[:, 1], a
        return m, None
    uu = np.array(list(itertools.product(r, r)), dtype=np.int64)
    tt, u = np.repeat(t, len(uu), axis=0), np.tile(uu, (len(t), 1))
    m = np.zeros((len(tt), 2, 2, 2), dtype=np.int64)
    m[:, 0, 0, 0], m[:, 0, 1, 1], m[:, 1, 0, 0], m[:, 1, 1, 1] = tt.T
    m[:, 0, 0, 1], m[:, 1, 0, 1] = u.T
    return m, None


def _closure_block(cid, m, mmu, u, umu, ell):
    """First (u, m) with u m outside the set, over all pairs."""
    for k in range(len(u)):
        prod = _mul(u[k], m, ell)
        pmu = None if mmu is None else mmu * umu[k] % ell
        ok = conj_mask(cid, prod, ell, pmu)
        i = _first_bad(ok)
        if i is not None:
            return [_tolist(u[k]), _tolist(m[i])]
    return None


def check_closure_exhaustive(cid: ConjSetId, ell: int, borel_only: bool) -> dict:
    """
    U' . C subset of C, exhaustively over U' and either the whole set C
    (``borel_only=False``, stops at the first counterexample) or C ∩ Borel.
    """
    l = as_int(ell)
    if cid.family is Family.GSP4:
        raise ValueError("GSp4 closure is sampled")
    u = borel_elements(cid.family, l)[0]
    u = u[member_mask(cid.family, Subgroup.UNIPOTENT_PRIME, u, l)]
    checked = 0
    if borel_only:
        b = borel_elements(cid.family, l)[0]
        blocks = [b[conj_mask(cid, b, l)]]
    else:
        blocks = _iter_members(cid, l)
    for m in blocks:
        if not len(m):
            continue
        bad = _closure_block(cid, m, None, u, None, l)
        checked += len(m) * len(u)
        if bad is not None:
            return _entry(_closure_name(cid, borel_only), cid.family, l, bad, checked)
    return _entry(_closure_name(cid, borel_only), cid.family, l, None, checked)


def _closure_name(cid, borel_only):
    return f"closure_{cid.i}" + ("_borel" if borel_only else "")


def check_closure_sampled(cid: ConjSetId, ell: int, n: int, borel_only: bool,
                          seed: int = SEED) -> dict:
    """
    Random u in U' and m in C (or C ∩ Borel).  Elements of C are drawn as
    g b g^{-1} with b uniform in C ∩ Borel and g uniform-ish in the full group.
    """
    l = as_int(ell)
    rng = np.random.default_rng(seed)
    b, bmu = random_conj_borel(rng, cid, l, n)
    if not borel_only:
        if cid.family is not Family.GSP4:
            raise ValueError("sampled literal closure is implemented for GSp4")
        g, gmu = random_gsp4(rng, l, n)
        ginv = binverse(cid.family, g, l, gmu)
        b = _mul(_mul(g, b, l), ginv, l)
    u, umu = random_unipotent_prime(rng, cid.family, l, n)
    prod = _mul(u, b, l)
    pmu = None if bmu is None else bmu * umu % l
    ok = conj_mask(cid, prod, l, pmu)
    i = _first_bad(ok)
    bad = None if i is None else [_tolist(u[i]), _tolist(b[i])]
    return _entry(_closure_name(cid, borel_only), cid.family, l, bad, n,
                  failures=int((~ok).sum()))


def check_borel_conjugation(cid: ConjSetId, ell: int, n: Optional[int] = None,
                            seed: int = SEED) -> dict:
    """conjugate_into_borel on set members: exhaustive for GL2, else n samples."""
    l = as_int(ell)
    rng = np.random.default_rng(seed)
    if cid.family is Family.GL2QM and n is None:
        g = all_gl2(l)
        elems = [GroupElement.gl2(m, l) for m in g[conj_mask(cid, g, l)]]
    else:
        n = n or 500
        b, bmu = random_conj_borel(rng, cid, l, n)
        if cid.family is Family.GSP4:
            g, gmu = random_gsp4(rng, l, n)
        elif cid.family is Family.FIBER:
            g, gmu = random_fiber(rng, l, n), None
        else:
            g, gmu = random_gl2(rng, l, n), None
        m = _mul(_mul(g, b, l), binverse(cid.family, g, l, gmu), l)
        if cid.family is Family.GSP4:
            elems = [GroupElement.gsp4(x, l) for x in m]
        elif cid.family is Family.FIBER:
            elems = [GroupElement.fiber(x[0], x[1], l) for x in m]
        else:
            elems = [GroupElement.gl2(x, l) for x in m]
    bad = None
    for e in elems:
        try:
            g, b = conjugate_into_borel(e)
        except NotTriangularizable:
            bad = [_tolist(e.entries), "not triangularizable"]
            break
        if e.conjugate_by(g) != b or not is_member(b, Subgroup.BOREL) or not in_conj_set(b, cid):
            bad = [_tolist(e.entries)]
            break
    return _entry(f"borel_conjugation_{cid.i}", cid.family, l, bad, len(elems))


def check_quotient_bounds(upto: int = 200, cap: int = 8) -> list[dict]:
    out = []
    for cid in all_conj_ids():
        ells = admissible_ells(cid.family, upto)
        sizes = {l: quotient_image_size(cid, l) for l in ells}
        vals = set(sizes.values())
        bad = None if len(vals) == 1 and max(vals) <= cap else sizes
        out.append(_entry(f"quotient_bounded_{cid.i}", cid.family, max(ells), bad,
                          len(ells), sizes=sizes))
    return out


# ------------------------------------------------------------ driver

def full_report(quick: bool = False) -> list[dict]:
    """Every check, in a fixed order.  ``quick`` trims the slowest cases."""
    rep: list[dict] = []
    small = [(Family.GL2QM, 5), (Family.GL2QM, 7), (Family.FIBER, 5), (Family.GSP4, 3)]
    for fam, l in small:
        rep.append(check_orders(fam, l))
    for fam, l in [(Family.GL2QM, 5), (Family.FIBER, 5), (Family.GSP4, 3)]:
        rep += check_normality(fam, l)
        rep += check_quotients(fam, l)
    rep += check_set_equalities(5)
    rep += check_witnesses()
    closure_ells = [5, 7] if quick else [5, 7, 11, 13]
    for cid in all_conj_ids():
        if cid.family is Family.GSP4:
            n = 1000 if quick else 10_000
            rep.append(check_closure_sampled(cid, 73, n, borel_only=False))
            rep.append(check_closure_sampled(cid, 73, n, borel_only=True))
            rep.append(check_borel_conjugation(cid, 73, n=100 if quick else 500))
            continue
        for l in closure_ells:
            rep.append(check_closure_exhaustive(cid, l, borel_only=False))
            rep.append(check_closure_exhaustive(cid, l, borel_only=True))
        bl = 13 if cid.family is Family.GL2QM else 73
        rep.append(check_borel_conjugation(cid, bl, n=None if cid.family is Family.GL2QM else 500))
    rep += check_quotient_bounds()
    return rep
