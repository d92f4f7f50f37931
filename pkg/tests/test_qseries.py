import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tripleverify.errors import PoleEncountered
from tripleverify.exact import QONE, QPolynomial
from tripleverify.qseries import (
    QContext,
    finite_pochhammer_poly,
    kadell_direct,
    kadell_expansion,
    pochhammer_numeric,
    q_binomial,
    q_factorial,
    q_gamma,
    q_integer,
    truncation_index,
)


# sympy expansions from tests/oracles/frozen_values.py
FROZEN_QBINOM = {
    (4, 2): (1, 1, 2, 1, 1),
    (6, 3): (1, 1, 2, 3, 3, 3, 3, 2, 1, 1),
    (5, 1): (1, 1, 1, 1, 1),
}


def test_q_integer_and_factorial():
    assert q_integer(3) == QPolynomial([1, 1, 1])
    assert q_factorial(0) == QONE
    assert q_factorial(3).coeffs == (1, 2, 2, 1)


@pytest.mark.parametrize("nk, coeffs", sorted(FROZEN_QBINOM.items()))
def test_q_binomial_frozen(nk, coeffs):
    assert q_binomial(*nk).coeffs == coeffs


def test_q_binomial_outside_range_is_zero():
    assert q_binomial(3, 4).is_zero
    assert q_binomial(3, -1).is_zero


@given(st.integers(1, 12), st.integers(0, 12))
def test_q_pascal_rule(n, k):
    # [n, k] = [n-1, k-1] + q^k [n-1, k]
    if k > n:
        return
    rhs = q_binomial(n - 1, k - 1) + q_binomial(n - 1, k).shift(k)
    assert q_binomial(n, k) == rhs


@given(st.integers(0, 12), st.integers(0, 12))
def test_q_binomial_symmetry_and_q_one(n, k):
    if k > n:
        return
    assert q_binomial(n, k) == q_binomial(n, n - k)
    assert q_binomial(n, k)(1) == math.comb(n, k)


def test_finite_pochhammer_coefficients():
    # (1 - t)(1 - tq) = 1 - (1 + q) t + q t^2
    c = finite_pochhammer_poly(2)
    assert c == (QONE, QPolynomial([-1, -1]), QPolynomial([0, 1]))


@pytest.mark.parametrize("a, b", [(0, 0), (1, 0), (0, 3), (2, 3), (4, 4)])
def test_kadell_expansion_matches_product(a, b):
    assert kadell_expansion(a, b) == kadell_direct(a, b)


def test_qcontext_validation():
    with pytest.raises(ValueError):
        QContext(1.0)
    with pytest.raises(ValueError):
        QContext(0.5, truncation_epsilon=0)


def test_truncation_rule():
    ctx = QContext(0.5, 1e-14)
    K = truncation_index(10.0, ctx)
    assert 0.5**K * 10.0 < 1e-14 * 0.5
    assert 0.5 ** (K - 2) * 10.0 >= 1e-14 * 0.5


@pytest.mark.parametrize("q", [0.3, 0.5, 0.8])
def test_pochhammer_integer_order_is_finite_product(q):
    ctx = QContext(q)
    x = 0.7 - 0.2j
    direct = (1 - x) * (1 - x * q) * (1 - x * q * q)
    assert abs(pochhammer_numeric(x, 3, ctx) - direct) < 1e-13


def test_pochhammer_vectorised_and_zero_order():
    ctx = QContext(0.5)
    x = np.exp(1j * np.linspace(0, 2 * np.pi, 7))
    out = pochhammer_numeric(x, 1.5, ctx)
    assert out.shape == x.shape
    assert np.allclose(pochhammer_numeric(x, 0, ctx), 1)
    # (1; q)_a has the factor 1 - 1 = 0
    assert abs(out[0]) < 1e-15


def test_pochhammer_pole():
    ctx = QContext(0.5)
    # x q^a = 1 makes the denominator vanish
    with pytest.raises(PoleEncountered):
        pochhammer_numeric(4.0, -2, ctx)


@pytest.mark.parametrize("q", [0.3, 0.5, 0.8])
@pytest.mark.parametrize("x", [0.5, 1.0, 2.5, 3.7, 1.2 + 0.4j])
def test_q_gamma_against_mpmath(q, x):
    ctx = QContext(q)
    ref = complex(mpmath.qgamma(mpmath.mpmathify(x), q))
    assert abs(q_gamma(x, ctx) - ref) <= 1e-12 * abs(ref)


@settings(max_examples=30)
@given(st.floats(0.1, 0.9), st.floats(0.2, 4.0))
def test_q_gamma_functional_equation(q, x):
    ctx = QContext(q)
    lhs = q_gamma(x + 1, ctx)
    rhs = (1 - q**x) / (1 - q) * q_gamma(x, ctx)
    assert abs(lhs - rhs) <= 1e-11 * abs(lhs)


def test_q_gamma_at_integers_is_q_factorial():
    ctx = QContext(0.5)
    assert abs(q_gamma(4, ctx) - q_factorial(3)(0.5)) < 1e-13
    with pytest.raises(PoleEncountered):
        q_gamma(-1, ctx)
