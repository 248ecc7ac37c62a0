import math

import numpy as np
import pytest
import sympy as sp
from hypothesis import assume, given, strategies as st

from supersingular.weil import (
    QuadFieldElem, SurfaceClass, WeilQuartic, classify, classify_supersingular,
    discriminant, is_squarefree, p_rank, rm_factor, validate_weil,
)


def valid_pairs(q):
    m = math.isqrt(16 * q)
    for a1 in range(-m, m + 1):
        for a2 in range(-6 * q, 6 * q + 1):
            if validate_weil(a1, a2, q):
                yield a1, a2


def float_weil(a1, a2, q):
    roots = np.roots([1, a1, a2, q * a1, q * q])
    return bool(np.all(np.abs(np.abs(roots) - math.sqrt(q)) <= 1e-9 * math.sqrt(q) * 10))


def unit_circle_orders(a1, a2, p):
    """Orders of the normalised roots if they are all roots of unity (order <= 24)."""
    z = np.roots([1, a1, a2, p * a1, p * p]) / math.sqrt(p)
    out = []
    for r in z:
        n = next((n for n in range(1, 25) if abs(r ** n - 1) < 1e-6), None)
        if n is None:
            return None
        out.append(n)
    return out


# -- validate_weil ------------------------------------------------------------

def test_validate_examples():
    assert validate_weil(0, 14, 7)
    assert validate_weil(0, 0, 7)
    assert not validate_weil(17, 0, 7)


def test_validate_rejects_non_prime_power():
    with pytest.raises(ValueError):
        validate_weil(0, 0, 12)


@pytest.mark.parametrize("q", [7, 11, 13])
def test_validate_against_float_roots(q):
    # the float oracle is unreliable right at double roots, so compare the
    # exact answer with the oracle away from the boundary and by nudging
    m = math.isqrt(16 * q)
    mismatches = []
    for a1 in range(-m, m + 1):
        top = (a1 * a1 + 8 * q) // 4
        for a2 in range(-top - 2 * q, top + 1):
            exact = validate_weil(a1, a2, q)
            h_disc = a1 * a1 - 4 * (a2 - 2 * q)
            if h_disc == 0 or abs(abs(a1) * math.sqrt(q) * 2 - 2 * q - a2) < 1e-9:
                continue
            if exact != float_weil(a1, a2, q):
                mismatches.append((a1, a2))
    assert mismatches == []


def test_validate_prime_power_q():
    # h(Y) roots worked by hand: -2 double, +-sqrt 27, -3 double, {2, -9}
    expect = {(0, 18): True, (4, 22): True, (0, -9): True, (6, 27): True, (7, 0): False}
    for (a1, a2), ok in expect.items():
        assert validate_weil(a1, a2, 9) is ok
    for a1, a2 in [(0, -9), (7, 0), (1, 3), (-5, 20)]:
        assert validate_weil(a1, a2, 9) == float_weil(a1, a2, 9)


# -- discriminant / p-rank ------------------------------------------------------

def test_discriminant_examples():
    for p in (7, 11, 101):
        assert discriminant(WeilQuartic(0, 2 * p, p)) == 0
    assert discriminant(WeilQuartic(2, 13, 7)) == 8
    assert discriminant(WeilQuartic(0, 0, 7)) == 56


def test_prank_examples():
    assert p_rank(WeilQuartic(0, 14, 7)) == 0
    assert p_rank(WeilQuartic(1, 1, 7)) == 2
    assert p_rank(WeilQuartic(3, 7, 7)) == 1


@pytest.mark.parametrize("p", [7, 11, 13])
def test_prank_counts_unit_roots_mod_p(p):
    # p-rank = number of nonzero roots (with multiplicity, over F_pbar) of P mod p
    x = sp.symbols("x")
    for a1, a2 in valid_pairs(p):
        P = sp.Poly(x ** 4 + a1 * x ** 3 + a2 * x ** 2 + p * a1 * x + p * p, x, modulus=p)
        zero_mult = 0
        while P.eval(0) == 0 and P.degree() > 0:
            P = sp.Poly(sp.quo(P.as_expr(), x, x, modulus=p), x, modulus=p)
            zero_mult += 1
        assert p_rank(WeilQuartic(a1, a2, p)) == 4 - zero_mult


# -- classification ---------------------------------------------------------------

def test_classify_examples():
    assert classify_supersingular(WeilQuartic(0, 7, 7)) is SurfaceClass.SS_SIMPLE_PP
    assert classify_supersingular(WeilQuartic(0, 14, 7)) is SurfaceClass.SS_SPLIT
    assert classify_supersingular(WeilQuartic(1, 1, 7)) is SurfaceClass.NOT_SS
    assert classify(WeilQuartic(1, 1, 7)) is SurfaceClass.ORDINARY
    assert classify(WeilQuartic(3, 7, 7)) is SurfaceClass.PRANK_ONE


def test_classify_range_errors():
    with pytest.raises(ValueError):
        classify_supersingular(WeilQuartic(0, 0, 5))
    with pytest.raises(ValueError):
        classify_supersingular(WeilQuartic(0, 0, 7, k=2))


@pytest.mark.parametrize("p", [7, 11, 13, 17, 19])
def test_supersingular_iff_roots_of_unity(p):
    for a1, a2 in valid_pairs(p):
        cls = classify_supersingular(WeilQuartic(a1, a2, p))
        orders = unit_circle_orders(a1, a2, p)
        assert cls.is_supersingular == (orders is not None), (a1, a2)


@pytest.mark.parametrize("p", [7, 11, 13, 17, 19, 23, 29])
def test_templates_have_zero_trace(p):
    for a1, a2 in valid_pairs(p):
        if classify(WeilQuartic(a1, a2, p)).is_supersingular:
            assert a1 == 0


def test_every_class_reached():
    seen = {classify(WeilQuartic(a1, a2, 7)) for a1, a2 in valid_pairs(7)}
    assert seen == set(SurfaceClass) - {SurfaceClass.NOT_SS}


# -- RM factorisation ---------------------------------------------------------------

def expand(b: QuadFieldElem, q: int):
    x, s = sp.symbols("x s")
    beta = (b.u + b.v * s) / sp.Integer(2)
    beta_c = (b.u - b.v * s) / sp.Integer(2)
    e = sp.expand((x ** 2 + beta * x + q) * (x ** 2 + beta_c * x + q)).subs(s ** 2, b.d)
    P = sp.Poly(sp.expand(e), x)
    return [int(c) for c in P.all_coeffs()]


def test_rm_examples():
    b = rm_factor(WeilQuartic(2, 13, 7), 2)
    assert (b.u, b.v) == (2, 2)
    assert expand(b, 7) == [1, 2, 13, 14, 49]
    for d in (2, 3, 5, 13):
        b = rm_factor(WeilQuartic(4, 18, 7), d)
        assert (b.u, b.v) == (4, 0)
    assert rm_factor(WeilQuartic(1, 1, 7), 5) is None


def test_rm_rejects_non_squarefree():
    with pytest.raises(ValueError):
        rm_factor(WeilQuartic(0, 0, 7), 8)
    with pytest.raises(ValueError):
        QuadFieldElem(4, 2, 2)
    with pytest.raises(ValueError):
        QuadFieldElem(2, 1, 1)      # not integral in Z[sqrt 2]


@given(st.sampled_from([2, 3, 5, 6, 7, 13, 21]), st.integers(-20, 20), st.integers(-10, 10),
       st.sampled_from([7, 11, 13, 101, 1009, 10007]))
def test_rm_round_trip(d, k, j, q):
    # build an integral b directly: u = v mod 2 when d = 1 mod 4, both even otherwise
    if d % 4 == 1:
        u, v = 2 * k + j % 2, j
    else:
        u, v = 2 * k, 2 * j
    b = QuadFieldElem(d, u, v)
    a1, a2 = b.quartic(q)
    assume(validate_weil(a1, a2, q))
    assert expand(b, q) == [1, a1, a2, q * a1, q * q]
    w = WeilQuartic(a1, a2, q)
    assert discriminant(w) == d * v * v
    got = rm_factor(w, d)
    assert got is not None and got.u == u and abs(got.v) == abs(v)


@pytest.mark.parametrize("p", [7, 11])
def test_rm_v_zero_iff_split(p):
    for a1, a2 in valid_pairs(p):
        w = WeilQuartic(a1, a2, p)
        b = rm_factor(w, 2)
        split = discriminant(w) == 0 and a1 % 2 == 0
        assert (b is not None and b.v == 0) == split


def test_squarefree_helper():
    assert [d for d in range(1, 20) if is_squarefree(d)] == [1, 2, 3, 5, 6, 7, 10, 11, 13, 14, 15, 17, 19]
