import pytest
import sympy as sp
from hypothesis import given, strategies as st
from sympy import primerange

from supersingular.splitting import (
    QM, RM, CaseIndex, Plain, admissible, equivalence_rows, factor_roots,
    inadmissible_disagreements, rm_split_displayed, rm_split_field, splits_by_factorization,
    splits_by_legendre, ss_template, template_coefficients,
)

X = sp.symbols("X")


def sympy_splits(p, ell, i):
    """Complete splitting of the template mod ell by sympy's factoriser."""
    a1, a2 = template_coefficients(i, p)
    poly = sp.Poly(X ** 4 + a1 * X ** 3 + a2 * X ** 2 + p * a1 * X + p * p, X, modulus=ell)
    _, factors = poly.factor_list()
    return all(f.degree() == 1 for f, _ in factors)


def test_admissible_examples():
    assert admissible(13, 1, Plain())
    assert not admissible(7, 5, Plain())
    assert admissible(3, 4, Plain())


def test_admissible_congruences():
    for l in primerange(3, 300):
        assert admissible(l, 1) == admissible(l, 2) == (l % 12 == 1)
        assert admissible(l, 3) == (l % 8 == 1)
        assert admissible(l, 5) == (l % 4 == 1)
        assert admissible(l, 4)


def test_templates():
    assert template_coefficients(1, 7) == (0, 7)
    assert template_coefficients(4, 7) == (0, -14)
    assert template_coefficients(5, 7) == (0, 14)
    assert [ss_template(i, 11).a2 for i in CaseIndex] == [11, -11, 0, -22, 22]


def test_legendre_side_examples():
    for i in CaseIndex:
        for l in (5, 13, 17, 29, 37, 41, 73, 97):
            if admissible(l, i):
                assert splits_by_legendre(l, l, i)
    assert not splits_by_legendre(2, 5, 5)
    assert splits_by_legendre(11, 5, 5)
    with pytest.raises(ValueError):
        splits_by_legendre(11, 7, 5)


def test_factor_side_examples():
    assert sorted(factor_roots(11, 5, 5)) == [2, 2, 3, 3]
    assert not splits_by_factorization(2, 13, 1)
    assert splits_by_factorization(3, 13, 1)


@pytest.mark.parametrize("ell", [5, 13, 17, 29])
def test_factorisation_matches_sympy(ell):
    for i in CaseIndex:
        for p in primerange(2, 200):
            assert splits_by_factorization(p, ell, i) == sympy_splits(p, ell, i), (p, i)


@given(st.sampled_from(list(CaseIndex)), st.sampled_from([5, 13, 17, 29, 37, 41, 73, 97, 193]),
       st.sampled_from(list(primerange(2, 5000))))
def test_criterion_on_admissible(i, ell, p):
    if admissible(ell, i):
        assert splits_by_legendre(p, ell, i) == splits_by_factorization(p, ell, i)


def test_rows_have_no_disagreement():
    rows = equivalence_rows([3, 5, 13, 17, 29, 37, 41], 500)
    assert rows and all(r[5] for r in rows)
    # legality is per case: 3 only enters through i = 4
    assert {r[0] for r in rows if r[1] == 3} == {4}


def test_inadmissible_counterexample():
    bad = inadmissible_disagreements(p_max=50, ell_max=12)
    assert (2, 7, 5) in bad
    assert not sympy_splits(2, 7, 5) and sp.legendre_symbol(2, 7) == 1


def test_rm_rules_differ_at_three_mod_four():
    for l in primerange(3, 200):
        if l == 5:
            continue
        same = rm_split_displayed(5, l) == rm_split_field(5, l)
        assert same == (l % 4 == 1)


def test_rm_and_qm_contexts():
    rm = RM(5, ramified=[5])
    assert admissible(29, 4, rm) == (sp.legendre_symbol(-5 % 29, 29) == 1)
    assert not admissible(5, 4, rm)
    assert admissible(29, 4, RM(5, rule="split")) == (sp.legendre_symbol(5, 29) == 1)
    qm = QM(6)
    assert not admissible(5, 4, qm)           # ell > 7 required
    assert admissible(13, 4, qm)
    assert not admissible(13, 4, QM(13))
    assert not admissible(13, 4, QM(6, ramified=lambda l: l == 13))
    with pytest.raises(ValueError):
        RM(4)
