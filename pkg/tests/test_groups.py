import itertools

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, strategies as st

from supersingular.groups import core
from supersingular.groups.core import (
    ConjSetId, Family, GroupElement, NotTriangularizable, Subgroup, all_conj_ids,
    conjugate_into_borel, group_order, in_conj_set, is_member, multiplier,
    quotient_image_size, witness,
)
from supersingular.groups.enumerate import gsp4_scan, subgroup_elements
from supersingular.groups import verify

GL2, GSP4, FIBER = Family.GL2QM, Family.GSP4, Family.FIBER


def brute_gl2(ell):
    """Pure-python GL2(F_ell) split by shape."""
    out = {s: 0 for s in Subgroup}
    for a, b, c, d in itertools.product(range(ell), repeat=4):
        if (a * d - b * c) % ell == 0:
            continue
        out[Subgroup.FULL] += 1
        if c == 0:
            out[Subgroup.BOREL] += 1
            if b == 0:
                out[Subgroup.TORUS] += 1
            if a == d:
                out[Subgroup.UNIPOTENT_PRIME] += 1
                if a == 1:
                    out[Subgroup.UNIPOTENT] += 1
    return out


@pytest.mark.parametrize("ell", [5, 7])
def test_gl2_orders_brute(ell):
    brute = brute_gl2(ell)
    for sub in Subgroup:
        assert group_order(GL2, sub, ell) == brute[sub]
        assert len(subgroup_elements(GL2, sub, ell)[0]) == brute[sub]


def test_gl2_orders_at_five():
    got = [group_order(GL2, s, 5) for s in
           (Subgroup.FULL, Subgroup.BOREL, Subgroup.UNIPOTENT, Subgroup.UNIPOTENT_PRIME, Subgroup.TORUS)]
    assert got == [480, 80, 5, 20, 16]


def test_fiber_order_at_five():
    assert group_order(FIBER, Subgroup.FULL, 5) == 57600 == 480 ** 2 // 4
    arr, _ = subgroup_elements(FIBER, Subgroup.FULL, 5)
    assert len(arr) == 57600


def test_gsp4_scan_order():
    arr, mu = gsp4_scan(3)
    assert len(arr) == group_order(GSP4, Subgroup.FULL, 3) == 103680
    # |Sp4(F_3)| = 51840 from the literature, times |F_3^*| = 2 multipliers
    assert (mu == 1).sum() == 51840
    J = np.array(core.la.J4)
    rng = np.random.default_rng(0)
    for k in rng.choice(len(arr), 200, replace=False):
        m = arr[k]
        assert ((m.T @ J @ m - mu[k] * J) % 3 == 0).all()


def test_bad_subgroup_combination():
    with pytest.raises(ValueError):
        group_order("SL3", Subgroup.FULL, 5)
    with pytest.raises(ValueError):
        ConjSetId(GL2, 1)


# -- elements ------------------------------------------------------------------

def test_multiplier_examples():
    assert multiplier(np.eye(4, dtype=int).tolist(), 5) == 1
    assert multiplier([[1, 0, 0, 0], [0, 2, 0, 0], [0, 0, 3, 0], [0, 0, 0, 4]], 5) == 3
    assert multiplier([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 4, 0], [0, 0, 0, 4]], 5) == 4
    assert multiplier([[1, 1, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]], 5) is None


def test_membership_examples():
    ok = GroupElement.fiber([[2, 1], [0, 2]], [[2, 0], [0, 2]], 5)
    assert is_member(ok, Subgroup.UNIPOTENT_PRIME)
    assert is_member(GroupElement.fiber([[1, 3], [0, 2]], [[2, 4], [0, 1]], 5), Subgroup.BOREL)
    assert not is_member(GroupElement.gl2([[1, 0], [1, 1]], 5), Subgroup.BOREL)
    with pytest.raises(ValueError):
        GroupElement.fiber([[1, 0], [0, 1]], [[2, 0], [0, 1]], 5)


def test_conj_set_examples():
    assert in_conj_set(GroupElement.gsp4([[2, 0, 0, 0], [0, 3, 0, 0], [0, 0, 2, 0], [0, 0, 0, 3]], 5),
                       ConjSetId(GSP4, 4))
    assert in_conj_set(GroupElement.gsp4([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 4, 0], [0, 0, 0, 4]], 5),
                       ConjSetId(GSP4, 5))
    for cid in all_conj_ids():
        assert not in_conj_set(GroupElement.identity(cid.family, 5), cid)


def test_witness_examples():
    assert witness(ConjSetId(GL2, 4), 5).entries == ((2, 0), (0, 3))
    w = witness(ConjSetId(FIBER, 3), 17)
    x = sp.symbols("x")
    polys = [sp.Poly(sp.Matrix(m).charpoly(x).as_expr(), x, modulus=17) for m in w.entries]
    assert polys[0] == sp.Poly(x ** 2 + 6 * x + 1, x, modulus=17)
    assert polys[1] == sp.Poly(x ** 2 - 6 * x + 1, x, modulus=17)
    w = witness(ConjSetId(GSP4, 1), 73)
    assert in_conj_set(w, ConjSetId(GSP4, 1))
    with pytest.raises(ValueError):
        witness(ConjSetId(FIBER, 1), 5)


def test_charpoly_against_sympy():
    rng = np.random.default_rng(3)
    x = sp.symbols("x")
    arr, _ = gsp4_scan(3)
    for k in rng.choice(len(arr), 50, replace=False):
        g = GroupElement.gsp4(arr[k].tolist(), 3)
        ref = sp.Poly(sp.Matrix(arr[k].tolist()).charpoly(x).as_expr(), x, modulus=3)
        got = sp.Poly([1, *g.charpoly()], x, modulus=3)
        assert got == ref


@st.composite
def gl2_elements(draw, ell=st.sampled_from([5, 7, 11, 13])):
    l = draw(ell)
    r = st.integers(0, l - 1)
    a, b, c, d = draw(st.tuples(r, r, r, r).filter(lambda t: (t[0] * t[3] - t[1] * t[2]) % l))
    return GroupElement.gl2([[a, b], [c, d]], l)


@given(gl2_elements(), gl2_elements())
def test_group_axioms(a, b):
    if a.ell != b.ell:
        return
    e = GroupElement.identity(GL2, a.ell)
    assert a * a.inverse() == e
    assert (a * b).inverse() == b.inverse() * a.inverse()
    assert a.conjugate_by(b).charpoly() == a.charpoly()


@given(gl2_elements())
def test_borel_conjugation_gl2(m):
    l = m.ell
    t, d = m.charpoly()
    splits = sp.sqrt_mod((t * t - 4 * d) % l, l) is not None
    if not splits:
        with pytest.raises(NotTriangularizable):
            conjugate_into_borel(m)
        return
    g, b = conjugate_into_borel(m)
    assert m.conjugate_by(g) == b and is_member(b, Subgroup.BOREL)


def test_borel_conjugation_examples():
    m = GroupElement.gl2([[0, 4], [1, 0]], 5)
    g, b = conjugate_into_borel(m)
    assert {b.entries[0][0], b.entries[1][1]} == {2, 3}
    b0 = GroupElement.gl2([[2, 1], [0, 3]], 5)
    g, b = conjugate_into_borel(b0)
    assert g == GroupElement.identity(GL2, 5) and b == b0
    with pytest.raises(NotTriangularizable):
        conjugate_into_borel(GroupElement.gl2([[0, 3], [1, 0]], 5))


# -- quotient images --------------------------------------------------------------

def brute_gl2_quotient(i, ell):
    """Diagonal members of the set, counted up to scalars, by direct membership."""
    cid = ConjSetId(GL2, i)
    classes = set()
    for a in range(1, ell):
        for b in range(1, ell):
            if in_conj_set(GroupElement.gl2([[a, 0], [0, b]], ell), cid):
                classes.add(b * pow(a, -1, ell) % ell)
    return len(classes)


@pytest.mark.parametrize("i", [4, 5])
def test_gl2_quotient_brute(i):
    assert quotient_image_size(ConjSetId(GL2, i), 13) == brute_gl2_quotient(i, 13) == 1


def test_fiber_quotient_examples():
    assert quotient_image_size(ConjSetId(FIBER, 4), 13) == 3
    assert quotient_image_size(ConjSetId(FIBER, 4), 17) == 3


@pytest.mark.parametrize("cid", all_conj_ids(), ids=str)
def test_quotient_methods_agree(cid):
    l = 73
    assert quotient_image_size(cid, l) == quotient_image_size(cid, l, method="full")


# -- report helpers -------------------------------------------------------------------

@pytest.mark.parametrize("fam,ell", [(GL2, 5), (FIBER, 5)])
def test_normality_and_quotients(fam, ell):
    for e in verify.check_normality(fam, ell) + verify.check_quotients(fam, ell):
        assert e["status"] == "pass", e


def test_set_equalities_at_five():
    assert all(e["status"] == "pass" for e in verify.check_set_equalities(5))


def test_literal_closure_counterexample():
    # u m leaves the set for a non-triangular m: the closure needs m in the Borel
    cid = ConjSetId(GL2, 4)
    u = GroupElement.gl2([[1, 1], [0, 1]], 5)
    m = GroupElement.gl2([[0, 1], [1, 0]], 5)
    assert in_conj_set(m, cid)
    assert not in_conj_set(u * m, cid)
    e = verify.check_closure_exhaustive(cid, 5, borel_only=True)
    assert e["status"] == "pass" and e["checked"] > 0
