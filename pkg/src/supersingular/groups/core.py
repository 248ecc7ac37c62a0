"""
GL_2, GSp_4 and the determinant fibre product GL_2 x_det GL_2 over F_ell.

Conventions
-----------
GSp_4 is {M : M^T J M = mu J} with J = [[0, I], [-I, 0]] in the basis
(e1, e2, f1, f2).  Its Borel GB is {C = 0, A upper triangular}.

Each conjugation-invariant set is cut out by a characteristic polynomial
template in a parameter mu.  For GSp_4 that mu is the similitude multiplier
of the matrix.  For GL_2 and the fibre product mu is existential: the set is
every element whose characteristic polynomial equals the template for *some*
mu in F_ell^x.  Under the existential reading sets 1/2 and 4/5 coincide;
under the multiplier reading they are disjoint (see ``in_conj_set``).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from ..finite_field import as_int, legendre, linear_roots, sqrt_mod
from . import linalg as la
from .linalg import Matrix


class Family(enum.Enum):
    GL2QM = "GL2"
    GSP4 = "GSp4"
    FIBER = "Fiber"


class Subgroup(enum.Enum):
    FULL = "full"
    BOREL = "borel"
    UNIPOTENT = "unipotent"
    UNIPOTENT_PRIME = "unipotent_prime"
    TORUS = "torus"


@dataclass(frozen=True)
class ConjSetId:
    family: Family
    i: int

    def __post_init__(self):
        legal = (4, 5) if self.family is Family.GL2QM else (1, 2, 3, 4, 5)
        if self.i not in legal:
            raise ValueError(f"no conjugacy set {self.i} for {self.family.value}")

    def __str__(self):
        return f"{self.family.value}:C{self.i}"


def all_conj_ids() -> list[ConjSetId]:
    ids = [ConjSetId(Family.GL2QM, i) for i in (4, 5)]
    for fam in (Family.GSP4, Family.FIBER):
        ids += [ConjSetId(fam, i) for i in range(1, 6)]
    return ids


def group_order(family: Family, sub: Subgroup, ell) -> int:
    l = as_int(ell)
    table = {
        Family.GL2QM: {
            Subgroup.FULL: (l - 1) ** 2 * l * (l + 1),
            Subgroup.BOREL: (l - 1) ** 2 * l,
            Subgroup.UNIPOTENT: l,
            Subgroup.UNIPOTENT_PRIME: l * (l - 1),
            Subgroup.TORUS: (l - 1) ** 2,
        },
        Family.GSP4: {
            Subgroup.FULL: (l - 1) ** 3 * l ** 4 * (l + 1) ** 2 * (l ** 2 + 1),
            Subgroup.BOREL: l ** 4 * (l - 1) ** 3,
            Subgroup.UNIPOTENT: l ** 4,
            Subgroup.UNIPOTENT_PRIME: l ** 4 * (l - 1),
            Subgroup.TORUS: (l - 1) ** 3,
        },
        Family.FIBER: {
            Subgroup.FULL: (l - 1) ** 3 * l ** 2 * (l + 1) ** 2,
            Subgroup.BOREL: (l - 1) ** 3 * l ** 2,
            Subgroup.UNIPOTENT: l ** 2,
            Subgroup.UNIPOTENT_PRIME: l ** 2 * (l - 1),
            Subgroup.TORUS: (l - 1) ** 3,
        },
    }
    try:
        return table[Family(family)][Subgroup(sub)]
    except (KeyError, ValueError):
        raise ValueError(f"no subgroup {sub!r} for family {family!r}") from None


def multiplier(m: Matrix, ell) -> Optional[int]:
    """Similitude factor mu with M^T J M = mu J, or None if M is not in GSp4."""
    l = as_int(ell)
    m = la.as_matrix(m, l)
    form = la.mat_mul(la.mat_mul(la.transpose(m), la.J4, l), m, l)
    mu = form[0][2]
    if mu == 0:
        return None
    target = la.mat_scale(la.as_matrix(la.J4, l), mu, l)
    return mu if form == target else None


@dataclass(frozen=True)
class GroupElement:
    """
    An element of one of the three families, entries reduced mod ell.

    ``entries`` is a 2x2 matrix (GL2QM), a 4x4 matrix (GSP4) or a pair of 2x2
    matrices (FIBER).  ``mu`` is the similitude multiplier for GSP4 and the
    common determinant for FIBER.
    """

    family: Family
    ell: int
    entries: tuple
    mu: Optional[int] = None

    @classmethod
    def gl2(cls, m, ell) -> "GroupElement":
        l = as_int(ell)
        m = la.as_matrix(m, l)
        if la.det(m, l) == 0:
            raise ValueError("matrix is singular")
        return cls(Family.GL2QM, l, m)

    @classmethod
    def gsp4(cls, m, ell) -> "GroupElement":
        l = as_int(ell)
        m = la.as_matrix(m, l)
        mu = multiplier(m, l)
        if mu is None:
            raise ValueError("matrix is not a symplectic similitude")
        return cls(Family.GSP4, l, m, mu)

    @classmethod
    def fiber(cls, m1, m2, ell) -> "GroupElement":
        l = as_int(ell)
        m1, m2 = la.as_matrix(m1, l), la.as_matrix(m2, l)
        d1, d2 = la.det(m1, l), la.det(m2, l)
        if d1 == 0 or d1 != d2:
            raise ValueError("fibre product needs equal nonzero determinants")
        return cls(Family.FIBER, l, (m1, m2), d1)

    @classmethod
    def identity(cls, family: Family, ell) -> "GroupElement":
        if family is Family.GL2QM:
            return cls.gl2(la.identity(2), ell)
        if family is Family.GSP4:
            return cls.gsp4(la.identity(4), ell)
        return cls.fiber(la.identity(2), la.identity(2), ell)

    def _wrap(self, entries) -> "GroupElement":
        if self.family is Family.GL2QM:
            return GroupElement.gl2(entries, self.ell)
        if self.family is Family.GSP4:
            return GroupElement.gsp4(entries, self.ell)
        return GroupElement.fiber(*entries, self.ell)

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        if other.family is not self.family or other.ell != self.ell:
            raise ValueError("elements of different groups")
        l = self.ell
        if self.family is Family.FIBER:
            return self._wrap(tuple(la.mat_mul(a, b, l)
                                    for a, b in zip(self.entries, other.entries)))
        return self._wrap(la.mat_mul(self.entries, other.entries, l))

    def inverse(self) -> "GroupElement":
        l = self.ell
        if self.family is Family.FIBER:
            return self._wrap(tuple(la.mat_inv(a, l) for a in self.entries))
        return self._wrap(la.mat_inv(self.entries, l))

    def conjugate_by(self, g: "GroupElement") -> "GroupElement":
        """g^{-1} self g."""
        return g.inverse() * self * g

    def charpoly(self) -> tuple[int, ...]:
        """Characteristic polynomial coefficients, leading 1 omitted."""
        l = self.ell
        if self.family is Family.FIBER:
            c1 = (1,) + la.charpoly(self.entries[0], l)
            c2 = (1,) + la.charpoly(self.entries[1], l)
            prod = [0] * 5
            for i, a in enumerate(c1):
                for j, b in enumerate(c2):
                    prod[i + j] = (prod[i + j] + a * b) % l
            return tuple(prod[1:])
        return la.charpoly(self.entries, l)

    def as_array(self) -> np.ndarray:
        return np.array(self.entries, dtype=np.int64)

    def __str__(self):
        return f"{self.family.value}/F_{self.ell} {self.entries}"


# ------------------------------------------------------------------ subgroups

def _gl2_shape(m, sub: Subgroup) -> bool:
    (a, b), (c, d) = m
    if sub is Subgroup.FULL:
        return True
    if c:
        return False
    if sub is Subgroup.BOREL:
        return True
    if sub is Subgroup.UNIPOTENT:
        return a == 1 and d == 1
    if sub is Subgroup.UNIPOTENT_PRIME:
        return a == d
    return b == 0


def _gl2_scalar(m) -> int:
    return m[0][0]


def is_member(m: GroupElement, sub: Subgroup) -> bool:
    sub = Subgroup(sub)
    if m.family is Family.GL2QM:
        return _gl2_shape(m.entries, sub)
    if m.family is Family.FIBER:
        m1, m2 = m.entries
        if not (_gl2_shape(m1, sub) and _gl2_shape(m2, sub)):
            return False
        if sub is Subgroup.UNIPOTENT_PRIME:
            return _gl2_scalar(m1) == _gl2_scalar(m2)
        return True
    return _gsp4_shape(m.entries, m.mu, sub, m.ell)


def _gsp4_shape(m, mu: int, sub: Subgroup, ell: int) -> bool:
    if sub is Subgroup.FULL:
        return True
    # C block zero and A upper triangular
    if any(m[i][j] for i in (2, 3) for j in (0, 1)) or m[1][0]:
        return False
    a11, a12, a22 = m[0][0], m[0][1], m[1][1]
    if sub is Subgroup.BOREL:
        return True
    if sub is Subgroup.UNIPOTENT:
        return a11 == 1 and a22 == 1 and mu == 1
    if sub is Subgroup.UNIPOTENT_PRIME:
        return a11 == a22 and mu == a11 * a11 % ell
    # torus: A diagonal, B = 0 (D = mu A^{-1} is then forced)
    return a12 == 0 and not any(m[i][j] for i in (0, 1) for j in (2, 3))


# ------------------------------------------------------------- conjugacy sets

def template(i: int, mu: int, ell: int) -> tuple[int, int, int, int]:
    """(c3, c2, c1, c0) of the i-th characteristic polynomial template."""
    c2 = {1: mu, 2: -mu, 3: 0, 4: -2 * mu, 5: 2 * mu}[i]
    return (0, c2 % ell, 0, mu * mu % ell)


def _template_params(i: int, poly, ell: int) -> list[int]:
    """All mu in F_ell^x for which ``poly`` equals template i."""
    c3, c2, c1, c0 = poly
    if c3 or c1:
        return []
    if i == 3:
        if c2 or not c0:
            return []
        r = sqrt_mod(c0, ell)
        return [] if r is None else sorted({r, ell - r})
    inv2 = pow(2, -1, ell)
    mu = {1: c2, 2: -c2, 4: -c2 * inv2, 5: c2 * inv2}[i] % ell
    return [mu] if mu and mu * mu % ell == c0 else []


@lru_cache(maxsize=1 << 16)
def _splits(poly: tuple, ell: int) -> bool:
    return linear_roots(poly, ell) is not None


def in_conj_set(m: GroupElement, cid: ConjSetId, mu_rule: Optional[str] = None) -> bool:
    """
    Membership in the conjugacy-invariant set ``cid``.

    ``mu_rule`` is ``"multiplier"`` (template parameter = similitude factor,
    the GSP4 default) or ``"any"`` (existential, the default elsewhere).
    """
    if m.family is not cid.family:
        raise ValueError("element and conjugacy set belong to different families")
    l = m.ell
    poly = m.charpoly()
    if cid.family is Family.GL2QM:
        c1, c0 = poly
        # X^2 - mu or X^2 + mu for some mu != 0: trace zero (det is nonzero)
        return c1 == 0 and c0 != 0 and _splits(poly, l)
    rule = mu_rule or ("multiplier" if cid.family is Family.GSP4 else "any")
    if rule == "multiplier":
        if m.mu is None:
            raise ValueError("multiplier rule needs a similitude element")
        if poly != template(cid.i, m.mu, l):
            return False
    elif rule == "any":
        if not _template_params(cid.i, poly, l):
            return False
    else:
        raise ValueError(f"unknown mu rule {rule!r}")
    return _splits(poly, l)


def conj_props_admissible(family: Family, ell) -> bool:
    """Residue hypotheses of the conjugacy-set propositions."""
    l = as_int(ell)
    if family is Family.GL2QM:
        return l >= 5
    return legendre(-1, l) == legendre(2, l) == legendre(3, l) == 1


# square class c with a^2 = c mu for the companion-block constructions; 5: a = 0
_WITNESS_SQUARE = {1: 1, 2: 3, 3: 2, 4: 4, 5: 0}


def companion(c1: int, c0: int, ell: int) -> Matrix:
    """Companion matrix of X^2 + c1 X + c0."""
    return ((0, -c0 % ell), (1, -c1 % ell))


def embed_pair(m1: Matrix, m2: Matrix, ell: int) -> Matrix:
    """Block-diagonal GSp4 element: m1 on span(e1, f1), m2 on span(e2, f2)."""
    out = [[0] * 4 for _ in range(4)]
    for (r, c), (i, j) in zip(((0, 0), (0, 2), (2, 0), (2, 2)), ((0, 0), (0, 1), (1, 0), (1, 1))):
        out[r][c] = m1[i][j]
    for (r, c), (i, j) in zip(((1, 1), (1, 3), (3, 1), (3, 3)), ((0, 0), (0, 1), (1, 0), (1, 1))):
        out[r][c] = m2[i][j]
    return la.as_matrix(out, ell)


def witness_parameters(i: int, ell) -> tuple[int, int]:
    """
    Smallest mu in F_ell^x, with a = sqrt(c mu), such that X^2 + aX + mu and
    X^2 - aX + mu both split.  Their product is template i at that mu.
    """
    l = as_int(ell)
    c = _WITNESS_SQUARE[i]
    for mu in range(1, l):
        a = sqrt_mod(c * mu, l)
        if a is None or (c and a == 0):
            continue
        if _splits((a, mu), l) and _splits((-a % l, mu), l):
            return mu, a
    raise ValueError(f"conjugacy set {i} has no companion-block witness at ell = {l}")


def witness(cid: ConjSetId, ell) -> GroupElement:
    l = as_int(ell)
    if cid.family is Family.GL2QM:
        if l < 5:
            raise ValueError("GL2 witnesses need ell >= 5")
        # diag(lambda, -lambda) has characteristic polynomial X^2 - lambda^2
        return GroupElement.gl2(la.diag((2, -2), l), l)
    mu, a = witness_parameters(cid.i, l)
    m1 = companion(a, mu, l)
    m2 = companion(-a, mu, l)
    if cid.family is Family.FIBER:
        return GroupElement.fiber(m1, m2, l)
    return GroupElement.gsp4(embed_pair(m1, m2, l), l)


# ---------------------------------------------------------- Borel conjugation

class NotTriangularizable(ValueError):
    pass


def _eigenvector(m: Matrix, lam: int, ell: int):
    n = len(m)
    shifted = [[(m[i][j] - (lam if i == j else 0)) % ell for j in range(n)] for i in range(n)]
    basis = la.nullspace(shifted, ell)
    # in reduced echelon form the last basis vector is the lexicographically
    # smallest normalised vector of the eigenspace
    return basis[-1]


def _gl2_flag(m: Matrix, ell: int) -> Matrix:
    poly = la.charpoly(m, ell)
    roots = linear_roots(poly, ell)
    if roots is None:
        raise NotTriangularizable("characteristic polynomial does not split")
    v = _eigenvector(m, roots[0], ell)
    w = (1, 0) if v[1] else (0, 1)
    return la.transpose((v, w))


def _gsp4_flag(m: Matrix, ell: int) -> Matrix:
    roots = linear_roots(la.charpoly(m, ell), ell)
    if roots is None:
        raise NotTriangularizable("characteristic polynomial does not split")
    v1 = _eigenvector(m, roots[0], ell)
    # M preserves v1^perp; pick an eigenvector of M on v1^perp / <v1>
    perp = la.nullspace([[la.symplectic_form(v1, e, ell) for e in la.identity(4)]], ell)
    # extend v1 to a basis (v1, w1, w2) of v1^perp
    w1 = next(w for w in perp if len(la.rref([v1, w], ell)[0]) == 2)
    w2 = next(w for w in perp if len(la.rref([v1, w1, w], ell)[0]) == 3)
    basis = (v1, w1, w2)

    def coords(x):
        # solve x = s0 v1 + s1 w1 + s2 w2
        aug = [[basis[k][r] for k in range(3)] + [x[r]] for r in range(4)]
        red, piv = la.rref(aug, ell)
        assert 3 not in piv
        sol = [0, 0, 0]
        for row, pc in zip(red, piv):
            sol[pc] = row[3]
        return sol

    mw = [coords([sum(m[r][c] * w[c] for c in range(4)) % ell for r in range(4)])
          for w in (w1, w2)]
    quot = ((mw[0][1], mw[1][1]), (mw[0][2], mw[1][2]))
    qroots = linear_roots(la.charpoly(quot, ell), ell)
    y = _eigenvector(quot, qroots[0], ell)
    v2 = tuple((y[0] * a + y[1] * b) % ell for a, b in zip(w1, w2))
    # complete the Lagrangian <v1, v2> to a symplectic basis
    rows = [[la.symplectic_form(v1, e, ell) for e in la.identity(4)],
            [la.symplectic_form(v2, e, ell) for e in la.identity(4)]]

    def solve(rhs):
        aug = [r + [t] for r, t in zip(rows, rhs)]
        red, piv = la.rref(aug, ell)
        sol = [0] * 4
        for row, pc in zip(red, piv):
            sol[pc] = row[4]
        return sol

    y1, y2 = solve((1, 0)), solve((0, 1))
    t = la.symplectic_form(y1, y2, ell)
    f1 = tuple(y1)
    f2 = tuple((a + t * b) % ell for a, b in zip(y2, v1))
    return la.transpose((v1, v2, f1, f2))


def conjugate_into_borel(m: GroupElement) -> tuple[GroupElement, GroupElement]:
    """
    Return (g, b) with b = g^{-1} m g in the Borel subgroup.

    Raises NotTriangularizable when the characteristic polynomial of m does
    not split over F_ell.
    """
    l = m.ell
    if is_member(m, Subgroup.BOREL):
        return GroupElement.identity(m.family, l), m
    if m.family is Family.GL2QM:
        g = GroupElement.gl2(_gl2_flag(m.entries, l), l)
    elif m.family is Family.FIBER:
        m1, m2 = m.entries
        g1 = _gl2_flag(m1, l) if m1[1][0] else la.identity(2)
        g2 = _gl2_flag(m2, l) if m2[1][0] else la.identity(2)
        # rescale the second column of g2 so det g1 = det g2; stays triangularising
        s = la.det(g1, l) * pow(la.det(g2, l), -1, l) % l
        g2 = la.mat_mul(g2, la.diag((1, s), l), l)
        g = GroupElement.fiber(g1, g2, l)
    else:
        g = GroupElement.gsp4(_gsp4_flag(m.entries, l), l)
    b = m.conjugate_by(g)
    assert is_member(b, Subgroup.BOREL)
    return g, b


# --------------------------------------------------------- quotient B / U'

def torus_tuples(family: Family, ell, normalized: bool = False) -> np.ndarray:
    """
    Every Borel/U torus datum, as eigenvalue 4-tuples plus multiplier (GSP4),
    4-tuples (FIBER) or pairs (GL2QM).  With ``normalized`` the first
    diagonal entry is fixed to 1, giving one representative per class of
    Borel/U' (torus modulo simultaneous scalars).
    """
    l = as_int(ell)
    units = np.arange(1, l, dtype=np.int64)
    first = np.ones(1, dtype=np.int64) if normalized else units
    inv = la.inverse_table(l)
    if family is Family.GL2QM:
        a, b = np.meshgrid(first, units, indexing="ij")
        return np.stack([a.ravel(), b.ravel()], axis=1)
    x, y, z = (g.ravel() for g in np.meshgrid(first, units, units, indexing="ij"))
    if family is Family.GSP4:
        # A = diag(x, y), multiplier z, D = diag(z/x, z/y)
        return np.stack([x, y, z * inv[x] % l, z * inv[y] % l, z], axis=1)
    # (diag(x, y), diag(z, w)) with x y = z w
    w = x * y % l * inv[z] % l
    return np.stack([x, y, z, w], axis=1)


def _eig_charpoly(ev: np.ndarray, ell: int) -> np.ndarray:
    a, b, c, d = ev.T
    e1 = a + b + c + d
    e2 = a * b + a * c + a * d + b * c + b * d + c * d
    e3 = (a * b % ell) * (c + d) + (c * d % ell) * (a + b)
    e4 = (a * b % ell) * (c * d % ell)
    return np.stack([-e1, e2, -e3, e4], axis=1) % ell


def nonzero_squares(ell: int) -> np.ndarray:
    sq = np.zeros(ell, dtype=bool)
    sq[(np.arange(1, ell) ** 2) % ell] = True
    return sq


def template_mask(cid: ConjSetId, polys: np.ndarray, ell: int,
                  mu: Optional[np.ndarray] = None) -> np.ndarray:
    """
    Vectorised template test on (N, 4) quartic coefficients (N, 2 for GL2QM),
    ignoring the splitting condition.  ``mu`` given means the multiplier rule.
    """
    l = ell
    if cid.family is Family.GL2QM:
        return (polys[:, 0] == 0) & (polys[:, 1] != 0)
    c3, c2, c1, c0 = polys.T
    base = (c3 == 0) & (c1 == 0)
    if mu is not None:
        k = template(cid.i, 1, l)[1]
        return base & (c2 == k * mu % l) & (c0 == mu * mu % l)
    if cid.i == 3:
        return base & (c2 == 0) & nonzero_squares(l)[c0]
    inv2 = pow(2, -1, l)
    m = {1: c2, 2: -c2, 4: -c2 * inv2, 5: c2 * inv2}[cid.i] % l
    return base & (m != 0) & (c0 == m * m % l)


def torus_mask(cid: ConjSetId, tuples: np.ndarray, ell: int) -> np.ndarray:
    """Which torus data lie in the conjugacy set (their char poly always splits)."""
    if cid.family is Family.GL2QM:
        return (tuples[:, 0] + tuples[:, 1]) % ell == 0
    poly = _eig_charpoly(tuples[:, :4], ell)
    mu = tuples[:, 4] if cid.family is Family.GSP4 else None
    return template_mask(cid, poly, ell, mu)


def quotient_image_size(cid: ConjSetId, ell, method: str = "representatives") -> int:
    """
    |image of (conjugacy set ∩ Borel) in Borel / U'|.

    Borel/U' is the torus modulo simultaneous scalars and membership of a
    Borel element depends only on its torus part.  The default enumerates
    one representative per class (first diagonal entry 1); ``method="full"``
    enumerates the whole torus and counts scalar classes hit, which does not
    presuppose that the set is stable under scalars.
    """
    l = as_int(ell)
    if l < 5:
        raise ValueError("quotient images are computed for ell >= 5")
    if method == "representatives":
        tup = torus_tuples(cid.family, l, normalized=True)
        return int(torus_mask(cid, tup, l).sum())
    if method != "full":
        raise ValueError(f"unknown method {method!r}")
    tup = torus_tuples(cid.family, l)
    keep = tup[torus_mask(cid, tup, l)]
    if keep.size == 0:
        return 0
    inv = la.inverse_table(l)
    s = inv[keep[:, 0]]
    if cid.family is Family.GSP4:
        # scalar lambda acts as (lambda a1, lambda a2, lambda^2 mu)
        reps = np.stack([keep[:, 1] * s % l, keep[:, 4] * s % l * s % l], axis=1)
    else:
        reps = keep[:, 1:] * s[:, None] % l
    return len(np.unique(reps, axis=0))
