from fractions import Fraction
from itertools import permutations, product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tripleverify import ct_identities as ct
from tripleverify.errors import RouteMismatch
from tripleverify.exact import QPolynomial

# sympy brute-force expansions (tests/oracles/frozen_values.py)
FROZEN_DYSON = {(1, 1, 1): 6, (2, 2, 2): 90, (1, 2, 3): 120, (0, 2, 4): 420, (3, 3, 1): 350}
FROZEN_QDYSON = {
    (1, 1, 1): (1, 2, 2, 1),
    (2, 1, 0): (1, 2, 3, 3, 2, 1),
    (1, 2, 2): (1, 2, 4, 6, 7, 7, 6, 4, 2, 1),
}

naturals = st.tuples(*[st.integers(0, 3)] * 3)


def test_triple_and_permutation_types():
    assert ct.NaturalTriple.of([1, 2, 3]) == (1, 2, 3)
    with pytest.raises(ValueError):
        ct.NaturalTriple.of([1, -1, 0])
    s = ct.Permutation3.of((3, 1, 2))
    assert [s(i) for i in range(3)] == [2, 0, 1]
    with pytest.raises(ValueError):
        ct.Permutation3.of((1, 1, 2))
    assert len(ct.ALL_PERMUTATIONS) == 6


def test_pair_exponent_names_the_missing_index():
    a = (10, 20, 30)
    assert ct.pair_exponent(a, 0, 1) == 30
    assert ct.pair_exponent(a, 0, 2) == 20
    assert ct.pair_exponent(a, 1, 2) == 10


@pytest.mark.parametrize("a, value", sorted(FROZEN_DYSON.items()))
def test_dyson_frozen(a, value):
    assert ct.dyson_ct_lhs(a) == value
    assert ct.dyson_rhs(a) == value


def test_dyson_trivial_cases():
    assert ct.dyson_ct_lhs((0, 0, 0)) == 1
    # with two zero exponents only one factor pair survives: CT (1-x)^n (1-1/x)^n = C(2n, n)
    assert ct.dyson_ct_lhs((0, 0, 3)) == 20


@given(naturals)
def test_dyson_routes_agree(a):
    rhs = ct.dyson_rhs(a)
    assert ct.dyson_alternating_sum(a) == rhs
    assert ct.dyson_via_dixon(a) == rhs


@given(naturals)
def test_dyson_symmetric_under_permuting_a(a):
    values = {ct.dyson_rhs(tuple(a[i] for i in p)) for p in permutations(range(3))}
    assert len(values) == 1


def test_one_sided_alternating_sum_is_wrong():
    # dropping the n < 0 half of the bilateral sum gives 7 instead of 6
    one_sided = sum((-1) ** n * ct.binomial(2, 1 + n) ** 3 for n in range(0, 2))
    assert one_sided == 7
    assert ct.dyson_alternating_sum((1, 1, 1)) == 6


@pytest.mark.parametrize("a, coeffs", sorted(FROZEN_QDYSON.items()))
def test_q_dyson_frozen(a, coeffs):
    assert ct.morris_ct_lhs(a).coeffs == coeffs
    assert ct.morris_rhs(a).coeffs == coeffs


@given(naturals)
def test_q_dyson_specialises_to_dyson(a):
    assert ct.morris_ct_lhs(a)(1) == ct.dyson_ct_lhs(a)


def test_morris_twisted_product_as_printed_fails_for_a_transposition():
    # hand expansion: CT (1-y1/y2)(1-q y2/y1)(1-y1)(1-q/y2) = 1 + q - q^2
    a, sigma = (0, 1, 1), ct.Permutation3(2, 1, 3)
    assert ct.morris_ct_lhs(a, sigma) == QPolynomial([1, 1, -1])
    assert ct.morris_rhs(a, sigma) == QPolynomial([1, 1])


@pytest.mark.parametrize("sigma", [ct.IDENTITY, ct.Permutation3(3, 2, 1)])
def test_morris_holds_for_identity_and_middle_fixing_involution(sigma):
    for a in product(range(3), repeat=3):
        assert ct.morris_ct_lhs(a, sigma) == ct.morris_rhs(a, sigma)


@pytest.mark.parametrize("abc", [(0, 0, 0), (1, 2, 3), (3, 3, 3), (2, 5, 4)])
def test_dixon(abc):
    assert ct.dixon_lhs(*abc) == ct.dixon_rhs(*abc)


@given(st.tuples(*[st.integers(0, 4)] * 3))
def test_q_dixon_both_forms(abc):
    lhs, rhs = ct.q_dixon_v1(*abc)
    assert lhs == rhs
    lhs, rhs = ct.q_dixon_v2(*abc)
    assert lhs == rhs


def test_q_dixon_reduces_to_dixon_at_q_one():
    lhs, _ = ct.q_dixon_v1(2, 3, 4)
    assert lhs(1) == ct.dixon_rhs(2, 3, 4)


@pytest.mark.parametrize("a", list(product(range(2), repeat=3)) + [(2, 1, 2), (2, 2, 2)])
def test_constrained_ct_derivation(a):
    assert ct.ct_derivation_check(a)


def test_constrained_ct_equals_q_dyson():
    # the derivation route reproduces the q-Dyson constant term
    a = (1, 2, 1)
    assert ct.ct_derivation_value(a) == ct.morris_rhs(a)


@pytest.mark.parametrize("a", range(8))
def test_phi_two_routes(a):
    assert ct.phi_by_expansion(a) == ct.phi_polynomial(a)


@given(st.tuples(*[st.integers(0, 12)] * 3))
def test_binomial_convolution(a):
    lhs, rhs = ct.binomial_convolution(a)
    assert lhs == rhs


def test_complex_exact_routes():
    assert ct.complex_exact_eval((1, 1, 1)) == Fraction(1, 9)
    assert ct.complex_exact_eval((0, 0, 0)) == 1
    for a in product(range(5), repeat=3):
        beta, binom, gamma = ct.complex_exact_routes(a)
        assert beta == binom == gamma


def test_complex_exact_raises_on_disagreement(monkeypatch):
    monkeypatch.setattr(ct, "complex_exact_routes", lambda a: (Fraction(1), Fraction(1), Fraction(2)))
    with pytest.raises(RouteMismatch):
        ct.complex_exact_eval((1, 1, 1))
