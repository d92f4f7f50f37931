"""Both sides of the exact constant-term and binomial identities.

Nothing in here touches floating point. Left-hand sides come from explicit
Laurent expansion or finite summation, right-hand sides from factorial
ratios evaluated by exact division.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import permutations
from typing import Iterable, NamedTuple, Tuple

from tripleverify.errors import RouteMismatch
from tripleverify.exact import (
    QONE,
    QZERO,
    LaurentPolynomial,
    QPolynomial,
    as_integer,
    binomial,
    factorial,
    laurent_ct,
    laurent_product,
    qpoly_exact_div,
)
from tripleverify.qseries import (
    kadell_expansion,
    pochhammer_laurent,
    q_binomial,
    q_factorial,
)


class NaturalTriple(NamedTuple):
    a1: int
    a2: int
    a3: int

    @classmethod
    def of(cls, a: Iterable[int]) -> "NaturalTriple":
        t = tuple(int(x) for x in a)
        if len(t) != 3 or any(x < 0 for x in t):
            raise ValueError(f"need three natural numbers, got {a!r}")
        return cls(*t)


class Permutation3(NamedTuple):
    """Images ``(sigma(1), sigma(2), sigma(3))`` of a permutation of {1,2,3}."""

    s1: int
    s2: int
    s3: int

    @classmethod
    def of(cls, images: Iterable[int]) -> "Permutation3":
        t = tuple(int(x) for x in images)
        if sorted(t) != [1, 2, 3]:
            raise ValueError(f"{images!r} is not a permutation of (1, 2, 3)")
        return cls(*t)

    def __call__(self, i: int) -> int:
        """Apply to a 0-based index, returning a 0-based index."""
        return self[i] - 1


IDENTITY = Permutation3(1, 2, 3)
ALL_PERMUTATIONS = tuple(Permutation3(*p) for p in permutations((1, 2, 3)))
PAIRS = ((0, 1), (0, 2), (1, 2))


def pair_exponent(a, i: int, j: int) -> int:
    """``a_ij = a_k`` with ``{k} = {1,2,3} \\ {i,j}`` (0-based indices)."""
    return a[3 - i - j]


def _natural(a) -> NaturalTriple:
    return a if isinstance(a, NaturalTriple) else NaturalTriple.of(a)


def _scalar(c: QPolynomial) -> int:
    if c.degree > 0:
        raise RouteMismatch(f"expected a q-free constant term, got {c}")
    return c[0]


# --------------------------------------------------------------------------
# Dyson (A2, unequal exponents)


def dyson_product(a) -> LaurentPolynomial:
    """``prod_{i<j} (1 - y_i/y_j)^{a_ij} (1 - y_j/y_i)^{a_ij}``."""
    a = _natural(a)
    factors = []
    for i, j in PAIRS:
        k = pair_exponent(a, i, j)
        one = LaurentPolynomial.constant(1)
        factors.append((one - LaurentPolynomial.ratio(i, j)) ** k)
        factors.append((one - LaurentPolynomial.ratio(j, i)) ** k)
    return laurent_product(factors)


def dyson_ct_lhs(a) -> Fraction:
    f = dyson_product(a)
    if not f.is_homogeneous_degree_zero():
        raise RouteMismatch("Dyson product is not degree-0 homogeneous")
    return Fraction(_scalar(laurent_ct(f)))


def dyson_rhs(a) -> Fraction:
    a1, a2, a3 = _natural(a)
    num = factorial(a1 + a2 + a3) * factorial(2 * a1) * factorial(2 * a2) * factorial(2 * a3)
    den = (
        factorial(a1) * factorial(a2) * factorial(a3)
        * factorial(a1 + a2) * factorial(a1 + a3) * factorial(a2 + a3)
    )
    return Fraction(as_integer(Fraction(num, den)))


def dyson_alternating_sum(a) -> Fraction:
    """Constant term read off the multinomial expansion: the bilateral sum
    ``sum_n (-1)^n C(2a,a+n) C(2b,b+n) C(2c,c+n)``."""
    a1, a2, a3 = _natural(a)
    m = min(a1, a2, a3)
    total = 0
    for n in range(-m, m + 1):
        total += (-1) ** (n % 2) * binomial(2 * a1, a1 + n) * binomial(2 * a2, a2 + n) * binomial(2 * a3, a3 + n)
    return Fraction(total)


def dyson_via_dixon(a) -> Fraction:
    """Alternating sum factored through Dixon's identity."""
    a1, a2, a3 = _natural(a)
    pref = Fraction(
        factorial(2 * a1) * factorial(2 * a2) * factorial(2 * a3),
        factorial(a1 + a2) * factorial(a1 + a3) * factorial(a2 + a3),
    )
    return pref * dixon_lhs(a1, a2, a3)


# --------------------------------------------------------------------------
# Morris / q-Dyson


def morris_product(a, sigma=IDENTITY) -> LaurentPolynomial:
    """``prod_{i<j} (y_i/y_j; q)_{a_ij} (q y_j/y_i; q)_{a_{sigma(i) sigma(j)}}``."""
    a = _natural(a)
    sigma = sigma if isinstance(sigma, Permutation3) else Permutation3.of(sigma)
    factors = []
    for i, j in PAIRS:
        fwd = [0, 0, 0]
        fwd[i], fwd[j] = 1, -1
        back = tuple(-x for x in fwd)
        factors.append(pochhammer_laurent(pair_exponent(a, i, j), tuple(fwd), 0))
        factors.append(pochhammer_laurent(pair_exponent(a, sigma(i), sigma(j)), back, 1))
    return laurent_product(factors)


def morris_ct_lhs(a, sigma=IDENTITY) -> QPolynomial:
    f = morris_product(a, sigma)
    if not f.is_homogeneous_degree_zero():
        raise RouteMismatch("Morris product is not degree-0 homogeneous")
    return laurent_ct(f)


def morris_rhs(a, sigma=IDENTITY) -> QPolynomial:
    a = _natural(a)
    sigma = sigma if isinstance(sigma, Permutation3) else Permutation3.of(sigma)
    num = q_factorial(sum(a))
    for i in range(3):
        num = num * q_factorial(a[i] + a[sigma(i)])
    den = QONE
    for i in range(3):
        den = den * q_factorial(a[i])
    for i, j in PAIRS:
        den = den * q_factorial(a[i] + a[j])
    return qpoly_exact_div(num, den)


# --------------------------------------------------------------------------
# Dixon and q-Dixon


def dixon_lhs(a: int, b: int, c: int) -> Fraction:
    m = min(a, b, c)
    total = 0
    for n in range(-m, m + 1):
        total += (-1) ** (n % 2) * binomial(a + b, a + n) * binomial(b + c, b + n) * binomial(a + c, c + n)
    return Fraction(total)


def dixon_rhs(a: int, b: int, c: int) -> Fraction:
    return Fraction(factorial(a + b + c), factorial(a) * factorial(b) * factorial(c))


def _signed_weight(n: int) -> Tuple[int, int]:
    """Sign and q-exponent of ``(-1)^n q^{n(3n+1)/2}``."""
    return (-1 if n % 2 else 1), n * (3 * n + 1) // 2


def q_dixon_v1(a: int, b: int, c: int) -> Tuple[QPolynomial, QPolynomial]:
    m = min(a, b, c)
    lhs = QZERO
    for n in range(-m, m + 1):
        sign, e = _signed_weight(n)
        term = q_binomial(a + b, a + n) * q_binomial(b + c, b + n) * q_binomial(c + a, c + n)
        lhs = lhs + term.shift(e) * sign
    rhs = qpoly_exact_div(q_factorial(a + b + c), q_factorial(a) * q_factorial(b) * q_factorial(c))
    return lhs, rhs


def q_dixon_v2_lhs(a: int, b: int, c: int) -> QPolynomial:
    m = min(a, b, c)
    lhs = QZERO
    for n in range(-m, m + 1):
        sign, e = _signed_weight(n)
        term = q_binomial(2 * a, a + n) * q_binomial(2 * b, b + n) * q_binomial(2 * c, c + n)
        lhs = lhs + term.shift(e) * sign
    return lhs


def q_dixon_v2(a: int, b: int, c: int) -> Tuple[QPolynomial, QPolynomial]:
    num = q_factorial(2 * a) * q_factorial(2 * b) * q_factorial(2 * c) * q_factorial(a + b + c)
    den = (
        q_factorial(a) * q_factorial(b) * q_factorial(c)
        * q_factorial(a + b) * q_factorial(b + c) * q_factorial(a + c)
    )
    return q_dixon_v2_lhs(a, b, c), qpoly_exact_div(num, den)


def _embed(poly: LaurentPolynomial, axis: int) -> LaurentPolynomial:
    terms = {}
    for (e,), c in poly:
        v = [0, 0, 0]
        v[axis] = e
        terms[tuple(v)] = c
    return LaurentPolynomial(terms, 3)


def ct_derivation_value(a) -> QPolynomial:
    """Constant term of ``(qu;q)_a(1/u;q)_a (qv;q)_b(1/v;q)_b (qw;q)_c(1/w;q)_c``
    restricted to ``uvw = 1/q``, with ``a = a3, b = a1, c = a2``.

    Each double product is replaced by its Kadell expansion; on the
    constraint surface ``u^i v^j w^k`` is constant only for ``i = j = k``,
    where it equals ``q^{-i}``.
    """
    a1, a2, a3 = _natural(a)
    F = (
        _embed(kadell_expansion(a3, a3), 0)
        * _embed(kadell_expansion(a1, a1), 1)
        * _embed(kadell_expansion(a2, a2), 2)
    )
    total = QZERO
    for (i, j, k), c in F:
        if i == j == k:
            total = total + c.shift(-i)
    return total


def ct_derivation_check(a) -> bool:
    a1, a2, a3 = _natural(a)
    return ct_derivation_value(a) == q_dixon_v2_lhs(a3, a1, a2)


# --------------------------------------------------------------------------
# complex case: phi polynomial, Beta convolution, exact pi^2 coefficient


def phi_polynomial(a: int) -> Tuple[int, ...]:
    """Coefficients ``C(a,i)^2`` of ``r1^{2i} r2^{2a-2i}``, ``i = 0..a``."""
    return tuple(binomial(a, i) ** 2 for i in range(a + 1))


def phi_by_expansion(a: int) -> Tuple[int, ...]:
    """Same coefficients from ``CT_z (r1 - r2 z)^a (r1 - r2/z)^a``.

    Variables are ``(r1, r2, z)``; only the ``z``-free part is kept.
    """
    r1 = LaurentPolynomial.monomial((1, 0, 0))
    r2z = LaurentPolynomial.monomial((0, 1, 1))
    r2_z = LaurentPolynomial.monomial((0, 1, -1))
    f = ((r1 - r2z) ** a) * ((r1 - r2_z) ** a)
    out = [0] * (a + 1)
    for (e1, e2, ez), c in f:
        if ez == 0:
            if e1 % 2 or e1 + e2 != 2 * a:
                raise RouteMismatch("unexpected monomial in the phi expansion")
            out[e1 // 2] = _scalar(c)
    return tuple(out)


def binomial_convolution(a) -> Tuple[Fraction, Fraction]:
    a1, a2, a3 = _natural(a)
    lhs = sum(binomial(a1 + i, a1) * binomial(a2 + a3 - i, a2) for i in range(a3 + 1))
    return Fraction(lhs), Fraction(binomial(a1 + a2 + a3 + 1, a3))


def complex_exact_routes(a) -> Tuple[Fraction, Fraction, Fraction]:
    """Three exact evaluations of ``I_C2(a) / pi^2`` at natural ``a``.

    * radial Beta-integral sum before simplification,
    * the same after rewriting summands as binomials and applying the
      convolution identity,
    * the Gamma ratio with integer arguments.
    """
    a1, a2, a3 = _natural(a)
    g = factorial  # Gamma(n + 1) = n!
    outer = Fraction(g(a3) ** 2, g(a2 + a3 + 1) * g(a1 + a3 + 1))
    beta_sum = sum(
        Fraction(g(a2 + a3 - i) * g(a1 + i), g(i) * g(a3 - i)) for i in range(a3 + 1)
    )
    route_beta = outer * beta_sum
    _, conv = binomial_convolution(a)
    route_binomial = outer * g(a1) * g(a2) * conv
    route_gamma = Fraction(
        g(a1 + a2 + a3 + 1) * g(a1) * g(a2) * g(a3),
        g(a1 + a2 + 1) * g(a1 + a3 + 1) * g(a2 + a3 + 1),
    )
    return route_beta, route_binomial, route_gamma


def complex_exact_eval(a) -> Fraction:
    routes = complex_exact_routes(a)
    if len(set(routes)) != 1:
        raise RouteMismatch(f"complex exact routes disagree at {tuple(a)}: {routes}")
    return routes[0]
