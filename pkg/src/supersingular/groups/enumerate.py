"""
Batched enumeration and sampling of group elements as numpy arrays.

Shapes: GL2QM (N, 2, 2); FIBER (N, 2, 2, 2) with the pair on axis 1;
GSP4 (N, 4, 4) plus a multiplier vector of shape (N,).  ``np.matmul``
broadcasts over the pair axis, so products are family-agnostic.
"""

from __future__ import annotations

import itertools

import numpy as np

from ..finite_field import as_int
from . import linalg as la
from .core import ConjSetId, Family, Subgroup, _splits, nonzero_squares, template_mask


# ------------------------------------------------------------ full groups

def all_mat2(ell: int) -> np.ndarray:
    l = as_int(ell)
    grid = np.array(list(itertools.product(range(l), repeat=4)), dtype=np.int64)
    return grid.reshape(-1, 2, 2)


def all_gl2(ell) -> np.ndarray:
    m = all_mat2(ell)
    return m[la.bdet2(m, as_int(ell)) != 0]


def all_fiber(ell) -> np.ndarray:
    """All pairs (M1, M2) in GL2 x GL2 with det M1 = det M2, grouped by det."""
    l = as_int(ell)
    g = all_gl2(l)
    d = la.bdet2(g, l)
    out = []
    for v in range(1, l):
        block = g[d == v]
        i, j = np.meshgrid(np.arange(len(block)), np.arange(len(block)), indexing="ij")
        out.append(np.stack([block[i.ravel()], block[j.ravel()]], axis=1))
    return np.concatenate(out)


def gsp4_scan(ell: int = 3) -> tuple[np.ndarray, np.ndarray]:
    """
    Exhaustive GSp4(F_ell) by scanning all column 4-tuples (c0, c1, c2, c3).

    M^T J M = mu J says omega(c_i, c_j) = mu J_ij, so for every c0 the other
    three columns are tested by broadcasting a precomputed omega table over
    all ell^12 choices.  Only practical for ell = 3 (3^16 tuples).
    """
    l = as_int(ell)
    vecs = np.array(list(itertools.product(range(l), repeat=4)), dtype=np.int64)
    j = np.array(la.J4, dtype=np.int64)
    w = (vecs @ j @ vecs.T) % l
    mats, mus = [], []
    for c0 in range(len(vecs)):
        w0 = w[c0]
        ok = ((w0 == 0)[:, None, None]                  # omega(c0, c1)
              & (w0 == 0)[None, None, :]                # omega(c0, c3)
              & (w == 0)[:, :, None]                    # omega(c1, c2)
              & (w == 0)[None, :, :]                    # omega(c2, c3)
              & (w0 != 0)[None, :, None]                # mu = omega(c0, c2)
              & (w0[None, :, None] == w[:, None, :]))   # omega(c1, c3) = mu
        i1, i2, i3 = np.nonzero(ok)
        cols = np.stack([np.full_like(i1, c0), i1, i2, i3], axis=1)
        mats.append(np.swapaxes(vecs[cols], 1, 2))
        mus.append(w0[i2])
    return np.concatenate(mats), np.concatenate(mus)


# ---------------------------------------------------------------- masks

def _gl2_shape_mask(m: np.ndarray, sub: Subgroup) -> np.ndarray:
    a, b, c, d = m[..., 0, 0], m[..., 0, 1], m[..., 1, 0], m[..., 1, 1]
    if sub is Subgroup.FULL:
        return np.ones(a.shape, dtype=bool)
    tri = c == 0
    if sub is Subgroup.BOREL:
        return tri
    if sub is Subgroup.UNIPOTENT:
        return tri & (a == 1) & (d == 1)
    if sub is Subgroup.UNIPOTENT_PRIME:
        return tri & (a == d)
    return tri & (b == 0)


def member_mask(family: Family, sub: Subgroup, arr: np.ndarray, ell: int,
                mu: np.ndarray | None = None) -> np.ndarray:
    sub = Subgroup(sub)
    if family is Family.GL2QM:
        return _gl2_shape_mask(arr, sub)
    if family is Family.FIBER:
        ok = _gl2_shape_mask(arr, sub).all(axis=-1)
        if sub is Subgroup.UNIPOTENT_PRIME:
            ok &= arr[:, 0, 0, 0] == arr[:, 1, 0, 0]
        return ok
    n = len(arr)
    if sub is Subgroup.FULL:
        return np.ones(n, dtype=bool)
    ok = ~arr[:, 2:, :2].reshape(n, -1).any(axis=1) & (arr[:, 1, 0] == 0)
    a11, a12, a22 = arr[:, 0, 0], arr[:, 0, 1], arr[:, 1, 1]
    if sub is Subgroup.BOREL:
        return ok
    if sub is Subgroup.UNIPOTENT:
        return ok & (a11 == 1) & (a22 == 1) & (mu == 1)
    if sub is Subgroup.UNIPOTENT_PRIME:
        return ok & (a11 == a22) & (mu == a11 * a11 % ell)
    return ok & (a12 == 0) & ~arr[:, :2, 2:].reshape(n, -1).any(axis=1)


def trace_det2(arr: np.ndarray, ell: int) -> tuple[np.ndarray, np.ndarray]:
    return (arr[..., 0, 0] + arr[..., 1, 1]) % ell, la.bdet2(arr, ell)


def quad_product(t1, d1, t2, d2, ell: int) -> np.ndarray:
    """Coefficients of (X^2 - t1 X + d1)(X^2 - t2 X + d2), leading 1 dropped."""
    return np.stack([-(t1 + t2), d1 + d2 + t1 * t2, -(t1 * d2 + t2 * d1), d1 * d2],
                    axis=-1) % ell


def charpolys(family: Family, arr: np.ndarray, ell: int) -> np.ndarray:
    """(N, 2) or (N, 4) characteristic polynomial coefficients, leading 1 dropped."""
    if family is Family.GSP4:
        return la.bcharpoly(arr, ell)
    t, d = trace_det2(arr, ell)
    if family is Family.GL2QM:
        return np.stack([-t % ell, d], axis=-1)
    return quad_product(t[:, 0], d[:, 0], t[:, 1], d[:, 1], ell)


def split_mask(polys: np.ndarray, ell: int) -> np.ndarray:
    uniq, inv = np.unique(polys, axis=0, return_inverse=True)
    flags = np.array([_splits(tuple(int(x) for x in u), ell) for u in uniq], dtype=bool)
    return flags[inv.ravel()]


def _disc_square(t, d, ell):
    # X^2 - tX + d splits iff t^2 - 4d is a square (zero included)
    sq = nonzero_squares(ell)
    sq[0] = True
    return sq[(t * t - 4 * d) % ell]


def conj_mask(cid: ConjSetId, arr: np.ndarray, ell: int, mu: np.ndarray | None = None,
              mu_rule: str | None = None) -> np.ndarray:
    """Vectorised ``in_conj_set`` with the same mu conventions."""
    rule = mu_rule or ("multiplier" if cid.family is Family.GSP4 else "any")
    if rule not in ("multiplier", "any"):
        raise ValueError(f"unknown mu rule {rule!r}")
    polys = charpolys(cid.family, arr, ell)
    use_mu = mu if (rule == "multiplier" and cid.family is not Family.GL2QM) else None
    if rule == "multiplier" and cid.family is not Family.GL2QM and mu is None:
        raise ValueError("multiplier rule needs multipliers")
    ok = template_mask(cid, polys, ell, use_mu)
    if cid.family is Family.GSP4:
        out = np.zeros(len(arr), dtype=bool)
        if ok.any():
            out[ok] = split_mask(polys[ok], ell)
        return out
    t, d = trace_det2(arr, ell)
    split = _disc_square(t, d, ell)
    if cid.family is Family.FIBER:
        split = split.all(axis=-1)
    return ok & split


def fiber_conj_members(cid: ConjSetId, ell: int, chunk: int = 1 << 16):
    """
    Exhaustively yield every element of a fibre-product conjugacy set.

    Membership depends only on (trace M1, trace M2, det), so the admissible
    triples are found first and only matching GL2 classes are paired up.
    """
    l = as_int(ell)
    g = all_gl2(l)
    t, d = trace_det2(g, l)
    r = np.arange(l)
    t1, t2, dd = (x.ravel() for x in np.meshgrid(r, r, np.arange(1, l), indexing="ij"))
    polys = quad_product(t1, dd, t2, dd, l)
    ok = template_mask(cid, polys, l) & _disc_square(t1, dd, l) & _disc_square(t2, dd, l)
    for a, b, v in zip(t1[ok], t2[ok], dd[ok]):
        m1 = g[(t == a) & (d == v)]
        m2 = g[(t == b) & (d == v)]
        n = len(m1) * len(m2)
        for s in range(0, n, chunk):
            idx = np.arange(s, min(s + chunk, n))
            yield np.stack([m1[idx // len(m2)], m2[idx % len(m2)]], axis=1)


def torus_part(family: Family, arr: np.ndarray, ell: int, mu=None) -> np.ndarray:
    """Diagonal data of Borel elements: the image in B/U = T."""
    if family is Family.GL2QM:
        return np.stack([arr[:, 0, 0], arr[:, 1, 1]], axis=1)
    if family is Family.FIBER:
        return np.stack([arr[:, 0, 0, 0], arr[:, 0, 1, 1], arr[:, 1, 0, 0], arr[:, 1, 1, 1]], axis=1)
    return np.stack([arr[:, 0, 0], arr[:, 1, 1], mu % ell], axis=1)


def binverse(family: Family, arr: np.ndarray, ell: int, mu=None) -> np.ndarray:
    if family is Family.GSP4:
        return la.bsymplectic_inverse(arr, mu, ell)
    return la.binv2(arr, ell)


# ------------------------------------------------------- small subgroups

def subgroup_elements(family: Family, sub: Subgroup, ell: int):
    """
    Exhaustive subgroup listing: (array, mu) with mu None except for GSP4.

    GSP4 is only supported at ell = 3 where the full group is scanned.
    """
    l = as_int(ell)
    if family is Family.GL2QM:
        g = all_gl2(l)
        return g[member_mask(family, sub, g, l)], None
    if family is Family.FIBER:
        g = all_fiber(l)
        return g[member_mask(family, sub, g, l)], None
    if l != 3:
        raise ValueError("exhaustive GSp4 listing is only done at ell = 3")
    g, mu = gsp4_scan(l)
    keep = member_mask(family, sub, g, l, mu)
    return g[keep], mu[keep]


# --------------------------------------------------------------- sampling

def random_sp4(rng: np.random.Generator, ell: int, n: int, steps: int = 24) -> np.ndarray:
    """Products of ``steps`` random symplectic transvections x -> x + c w(x, v) v."""
    j = np.array(la.J4, dtype=np.int64)
    out = np.broadcast_to(np.eye(4, dtype=np.int64), (n, 4, 4)).copy()
    for _ in range(steps):
        v = rng.integers(0, ell, size=(n, 4))
        c = rng.integers(1, ell, size=n)
        # T = I + c v (J^T v)^T... as a matrix: T x = x + c v (v^T J^T x)... use w(x, v) = x^T J v
        # w(x, v) = x^T J v = (J v) . x, so T = I + c v (J v)^T
        jv = v @ j.T
        t = np.eye(4, dtype=np.int64) + c[:, None, None] * v[:, :, None] * jv[:, None, :]
        out = np.matmul(t % ell, out) % ell
    return out


def random_gsp4(rng: np.random.Generator, ell: int, n: int) -> tuple[np.ndarray, np.ndarray]:
    mu = rng.integers(1, ell, size=n)
    d = np.broadcast_to(np.eye(4, dtype=np.int64), (n, 4, 4)).copy()
    d[:, 2, 2] = mu
    d[:, 3, 3] = mu
    return np.matmul(random_sp4(rng, ell, n), d) % ell, mu


def borel_from_torus(rng: np.random.Generator, family: Family, torus: np.ndarray,
                     ell: int) -> tuple[np.ndarray, np.ndarray | None]:
    """Random Borel elements with prescribed diagonal data and uniform unipotent part."""
    n = len(torus)
    if family is Family.GL2QM:
        m = np.zeros((n, 2, 2), dtype=np.int64)
        m[:, 0, 0], m[:, 1, 1] = torus[:, 0], torus[:, 1]
        m[:, 0, 1] = rng.integers(0, ell, size=n)
        return m, None
    if family is Family.FIBER:
        m = np.zeros((n, 2, 2, 2), dtype=np.int64)
        m[:, 0, 0, 0], m[:, 0, 1, 1] = torus[:, 0], torus[:, 1]
        m[:, 1, 0, 0], m[:, 1, 1, 1] = torus[:, 2], torus[:, 3]
        m[:, :, 0, 1] = rng.integers(0, ell, size=(n, 2))
        return m, None
    # torus rows (x, y, mu); A = [[x, a], [0, y]], D = mu A^{-T}, B = A S with S symmetric
    x, y, mu = torus.T
    a = rng.integers(0, ell, size=n)
    A = np.zeros((n, 2, 2), dtype=np.int64)
    A[:, 0, 0], A[:, 0, 1], A[:, 1, 1] = x, a, y
    D = np.swapaxes(la.binv2(A, ell), 1, 2) * mu[:, None, None] % ell
    s = rng.integers(0, ell, size=(n, 3))
    S = np.stack([np.stack([s[:, 0], s[:, 1]], 1), np.stack([s[:, 1], s[:, 2]], 1)], 1)
    B = np.matmul(A, S) % ell
    m = np.zeros((n, 4, 4), dtype=np.int64)
    m[:, :2, :2], m[:, :2, 2:], m[:, 2:, 2:] = A, B, D
    return m, mu.copy()


def random_torus(rng: np.random.Generator, family: Family, ell: int, n: int) -> np.ndarray:
    if family is Family.GL2QM:
        return rng.integers(1, ell, size=(n, 2))
    if family is Family.GSP4:
        return rng.integers(1, ell, size=(n, 3))
    x, y, z = rng.integers(1, ell, size=(3, n))
    w = x * y % ell * la.inverse_table(ell)[z] % ell
    return np.stack([x, y, z, w], axis=1)


def random_conj_borel(rng: np.random.Generator, cid: ConjSetId, ell: int, n: int):
    """Uniform random elements of (conjugacy set ∩ Borel)."""
    from .core import torus_mask, torus_tuples
    tup = torus_tuples(cid.family, ell)
    keep = tup[torus_mask(cid, tup, ell)]
    if len(keep) == 0:
        raise ValueError(f"{cid} ∩ Borel is empty at ell = {ell}")
    pick = keep[rng.integers(0, len(keep), size=n)]
    if cid.family is Family.GSP4:
        pick = pick[:, [0, 1, 4]]
    return borel_from_torus(rng, cid.family, pick, ell)


def random_unipotent_prime(rng: np.random.Generator, family: Family, ell: int, n: int):
    lam = rng.integers(1, ell, size=n)
    if family is Family.GL2QM:
        return borel_from_torus(rng, family, np.stack([lam, lam], 1), ell)
    if family is Family.FIBER:
        return borel_from_torus(rng, family, np.stack([lam, lam, lam, lam], 1), ell)
    return borel_from_torus(rng, family, np.stack([lam, lam, lam * lam % ell], 1), ell)


def random_gl2(rng: np.random.Generator, ell: int, n: int) -> np.ndarray:
    out = np.empty((0, 2, 2), dtype=np.int64)
    while len(out) < n:
        m = rng.integers(0, ell, size=(2 * n, 2, 2))
        out = np.concatenate([out, m[la.bdet2(m, ell) != 0]])
    return out[:n]


def random_fiber(rng: np.random.Generator, ell: int, n: int) -> np.ndarray:
    """Random pairs with equal determinant: rescale the first row of M2."""
    m1, m2 = random_gl2(rng, ell, n), random_gl2(rng, ell, n)
    s = la.bdet2(m1, ell) * la.inverse_table(ell)[la.bdet2(m2, ell)] % ell
    m2[:, 0, :] = m2[:, 0, :] * s[:, None] % ell
    return np.stack([m1, m2], axis=1)
