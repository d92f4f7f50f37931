import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tripleverify import padic
from tripleverify.errors import ConvergenceViolation, DepthTooSmall, DivisionByZero, PoleEncountered
from tripleverify.padic import PAdicContext, PAdicScalar

primes = st.sampled_from((2, 3, 5, 7))
nonzero_rationals = st.fractions(max_denominator=500).filter(lambda x: x != 0)

# plain cell loops over p^-M Z_p / p^N Z_p with y's cell skipped
# (tests/oracles/frozen_values.py)
FROZEN_F_PARTIAL = [
    (2, -4, 1, Fraction(1), (3, 4), Fraction(53, 64)),
    (3, -3, 1, Fraction(1, 3), (2, 3), Fraction(21080, 6561)),
    (2, -5, 2, Fraction(4), (2, 5), Fraction(5961, 8192)),
]


def test_valuation_and_norm():
    assert padic.valuation(Fraction(12), 2) == 2
    assert padic.valuation(Fraction(5, 18), 3) == -2
    assert padic.valuation(0, 5) == padic.INF
    assert padic.norm(Fraction(5, 18), 3) == 9
    assert padic.norm(0, 3) == 0
    assert padic.psi(Fraction(1, 9), 3) == 9
    assert padic.psi(Fraction(9), 3) == 1


@given(nonzero_rationals, nonzero_rationals, primes)
def test_valuation_is_additive(x, y, p):
    assert padic.valuation(x * y, p) == padic.valuation(x, p) + padic.valuation(y, p)


@given(nonzero_rationals, nonzero_rationals, primes)
def test_strong_triangle_inequality(x, y, p):
    assert padic.norm(x + y, p) <= max(padic.norm(x, p), padic.norm(y, p))


def test_scalar_type():
    x = PAdicScalar(Fraction(3, 4), 2)
    assert x.valuation == -2
    assert not x.in_zp
    assert padic.psi_p(x) == 4
    with pytest.raises(ValueError):
        PAdicScalar(1, 4)


def test_gamma_qp_values():
    # Gamma_Qp(s) = (1 - 1/p) / (1 - p^-s)
    assert padic.gamma_qp(1, 5) == 1
    assert padic.gamma_qp(2, 3) == Fraction(3, 4)
    assert padic.gamma_qp(2, 2) * (1 + Fraction(1, 2)) == 1
    with pytest.raises(PoleEncountered):
        padic.gamma_qp(0, 3)
    z = padic.gamma_qp(complex(2, 0.5), 3)
    assert isinstance(z, complex)


def test_context_defaults():
    assert PAdicContext.default(2) == PAdicContext(2, 5, 8)
    assert PAdicContext.default(5) == PAdicContext(5, 4, 6)
    assert PAdicContext(3, 2, 3).cells == 3**5
    with pytest.raises(ValueError):
        PAdicContext(6, 2, 2)


def test_f_convergence_region_enforced():
    with pytest.raises(ConvergenceViolation):
        padic.f_closed(-4, -1, 1, 3)
    with pytest.raises(ConvergenceViolation):
        padic.f_closed(-1, 0, 1, 3)


@pytest.mark.parametrize("p, a, c, y, depth, expected", FROZEN_F_PARTIAL)
def test_oracle_partial_sum_frozen(p, a, c, y, depth, expected):
    value, _ = padic.f_oracle(a, c, y, PAdicContext(p, *depth))
    assert value == expected


@pytest.mark.parametrize(
    "p, a, c, y",
    [(2, -4, 1, Fraction(1)), (3, -5, 2, Fraction(1, 9)), (2, -7, 3, Fraction(8)), (5, -6, 2, Fraction(1, 5)), (3, -4, 1, 0)],
)
def test_oracle_plus_tail_is_closed_form_for_integer_exponents(p, a, c, y):
    # both omitted regions are summed as exact geometric series, so the
    # bound is attained exactly
    value, tail = padic.f_oracle(a, c, y, PAdicContext(p, 3, 4))
    assert value + tail == padic.f_closed(a, c, y, p)


@pytest.mark.parametrize("p", [2, 3])
@pytest.mark.parametrize("a, c", [(-4.5, 1.5), (complex(-5, 0.3), complex(2, -0.2)), (-6.25, 2.75)])
@pytest.mark.parametrize("v", [-2, 0, 2])
def test_oracle_bounds_closed_form_for_complex_exponents(p, a, c, v):
    y = Fraction(p) ** v * (p + 1)
    value, tail = padic.f_oracle(a, c, y, PAdicContext.default(p))
    assert abs(value - padic.f_closed(a, c, y, p)) <= tail


def test_printed_negative_valuation_formula_disagrees_with_oracle():
    p, a, c, y = 3, -5, 2, Fraction(1, 9)
    value, tail = padic.f_oracle(a, c, y, PAdicContext(p, 4, 6))
    printed = padic.f_closed_printed(a, c, -2, p)
    assert abs(value - printed) > 100 * tail
    assert abs(value - padic.f_closed(a, c, y, p)) <= tail


def test_f_locally_constant_in_y():
    p = 3
    for y in (Fraction(2, 9), Fraction(5, 9), Fraction(-7, 9)):
        assert padic.f_closed(-5, 2, y, p) == padic.f_closed(-5, 2, Fraction(1, 9), p)
    assert padic.f_closed(-5, 2, 27, p) == padic.f_closed(-5, 2, 0, p)


def test_oracle_window_too_small():
    with pytest.raises(DepthTooSmall):
        padic.f_oracle(-4, 1, Fraction(1, 27), PAdicContext(3, 2, 3))


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_psi_squared_integral(p):
    assert padic.psi_power_integral(-2, p) == 1 + Fraction(1, p)
    partial = padic.psi_power_partial(-2, p, 20)
    assert partial == 1 + Fraction(1, p) - Fraction(1, p**21)


def test_j_closed_frozen():
    # hand Gamma_Q3 arithmetic: Gamma(2)^3 Gamma(5) / Gamma(4)^3
    assert padic.j_closed(-4, -4, 1, 3) == Fraction(1000, 1089)


@pytest.mark.parametrize("p", [2, 3, 5])
@pytest.mark.parametrize("abc", [(-4, -4, 1), (-5, -3, 1), (-3.5, -4.5, 0.5), (complex(-4, 0.7), -4, 1)])
def test_j_shell_sum_matches_closed_form(p, abc):
    value, tail = padic.j_oracle(*abc, PAdicContext(p, 30, 30))
    closed = padic.j_closed(*abc, p)
    assert abs(complex(value) - complex(closed)) <= tail + 1e-10 * abs(complex(closed))


def test_j_symmetric_in_first_two_exponents():
    assert padic.j_closed(-5, -3, 1, 3) == padic.j_closed(-3, -5, 1, 3)


def test_j_convergence_region():
    with pytest.raises(ConvergenceViolation):
        padic.j_closed(-4, -1, 1, 3)


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_triple_ratio(p):
    tilde, full = padic.triple_closed((2, 2, 2), p)
    assert full / tilde == 1 + Fraction(1, p)


def test_triple_symmetric_under_permuting_sigma():
    values = {padic.triple_closed(s, 3)[0] for s in [(2, 3, 4), (3, 4, 2), (4, 2, 3), (3, 2, 4)]}
    assert len(values) == 1


def test_triple_dictionary():
    assert padic.sigma_to_j_params((2, 2, 2)) == (-4, -4, 1)
    assert padic.triple_closed((2, 2, 2), 3)[0] == padic.j_closed(-4, -4, 1, 3)


def test_moebius_basics():
    ident = ((1, 0), (0, 1))
    assert padic.moebius_act(ident, Fraction(3, 7)) == Fraction(3, 7)
    with pytest.raises(DivisionByZero):
        padic.moebius_act(((1, 0), (1, 1)), -1)
    with pytest.raises(ValueError):
        padic.moebius_act(((2, 0), (0, 1)), 1)
    x = PAdicScalar(Fraction(5, 3), 3)
    assert isinstance(padic.moebius_act(ident, x), PAdicScalar)


@pytest.mark.parametrize("y", [Fraction(3), Fraction(1, 9), Fraction(-2, 5)])
def test_k_matrix_sends_y_to_zero(y):
    k = padic.k_matrix(y, 3)
    assert padic.det(k) == 1
    assert padic.moebius_act(k, y) == 0


@settings(max_examples=40)
@given(st.integers(0, 10**6), primes)
def test_moebius_identities(seed, p):
    rng = random.Random(seed)
    g = padic.random_sl2_zp(rng, p)
    assert all(padic.valuation(e, p) >= 0 for row in g for e in row)
    x = padic.random_rational(rng, p)
    lhs, rhs = padic.psi_identity_sides(g, x, p)
    assert lhs == rhs
    h = padic.random_sl2_qp(rng, p)
    u, v = padic.random_rational(rng, p), padic.random_rational(rng, p)
    lhs, rhs = padic.difference_identity_sides(h, u, v)
    assert lhs == rhs
