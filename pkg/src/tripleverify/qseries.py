"""q-combinatorics (exact) and q-analysis (floating point)."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Tuple

import numpy as np

from tripleverify.errors import PoleEncountered
from tripleverify.exact import (
    QONE,
    QZERO,
    LaurentPolynomial,
    QPolynomial,
    qpoly_exact_div,
)

DEFAULT_EPSILON = 1e-14
_POLE_GUARD = 64 * np.finfo(float).eps


# --------------------------------------------------------------------------
# exact side


def q_integer(n: int) -> QPolynomial:
    """``[n]_q = 1 + q + ... + q^(n-1)``."""
    if n < 0:
        raise ValueError("q_integer needs n >= 0")
    return QPolynomial([1] * n)


@lru_cache(maxsize=None)
def q_factorial(a: int) -> QPolynomial:
    """``[a]!_q``, the product of ``[i]_q`` for ``i = 1..a``."""
    if a < 0:
        raise ValueError("q_factorial needs a natural number")
    if a == 0:
        return QONE
    return q_factorial(a - 1) * q_integer(a)


@lru_cache(maxsize=None)
def q_binomial(a: int, b: int) -> QPolynomial:
    """Gaussian binomial; zero outside ``0 <= b <= a``."""
    if a < 0:
        raise ValueError("q_binomial needs a >= 0")
    if b < 0 or b > a:
        return QZERO
    return qpoly_exact_div(q_factorial(a), q_factorial(b) * q_factorial(a - b))


@lru_cache(maxsize=None)
def finite_pochhammer_poly(a: int) -> Tuple[QPolynomial, ...]:
    """Coefficients of ``prod_{i<a} (1 - t q^i)`` as a polynomial in ``t``.

    Entry ``m`` of the returned tuple is the ``Z[q]`` coefficient of ``t^m``.
    """
    if a < 0:
        raise ValueError("finite_pochhammer_poly needs a >= 0")
    coeffs: List[QPolynomial] = [QONE]
    for i in range(a):
        nxt = coeffs + [QZERO]
        for m, c in enumerate(coeffs):
            nxt[m + 1] = nxt[m + 1] - c.shift(i)
        coeffs = nxt
    return tuple(coeffs)


def pochhammer_laurent(a: int, exps: Tuple[int, ...], q_shift: int = 0) -> LaurentPolynomial:
    """``(q^q_shift * y^exps; q)_a`` as a Laurent polynomial."""
    terms = {}
    for m, c in enumerate(finite_pochhammer_poly(a)):
        e = tuple(m * x for x in exps)
        terms[e] = c.shift(q_shift * m)
    return LaurentPolynomial(terms, len(exps))


def kadell_expansion(a: int, b: int) -> LaurentPolynomial:
    """``sum_{i=-a}^{b} q^{i(i+1)/2} [a+b, a+i]_q (-x)^i`` in one variable."""
    if a < 0 or b < 0:
        raise ValueError("kadell_expansion needs a, b >= 0")
    terms = {}
    for i in range(-a, b + 1):
        c = q_binomial(a + b, a + i).shift(i * (i + 1) // 2)
        terms[(i,)] = -c if i % 2 else c
    return LaurentPolynomial(terms, 1)


def kadell_direct(a: int, b: int) -> LaurentPolynomial:
    """The product ``(qx; q)_b (1/x; q)_a`` expanded directly."""
    return pochhammer_laurent(b, (1,), 1) * pochhammer_laurent(a, (-1,), 0)


# --------------------------------------------------------------------------
# numeric side


@dataclass(frozen=True)
class QContext:
    q: float
    truncation_epsilon: float = DEFAULT_EPSILON

    def __post_init__(self):
        if not 0.0 < self.q < 1.0:
            raise ValueError(f"q must satisfy 0 < q < 1, got {self.q}")
        if not self.truncation_epsilon > 0.0:
            raise ValueError("truncation_epsilon must be positive")


def q_power(a, q: float) -> complex:
    """``q**a`` through the real logarithm of ``q``."""
    return cmath.exp(complex(a) * math.log(q))


def truncation_index(scale: float, ctx: QContext) -> int:
    """First ``K`` with ``q^K * max(1, scale) < eps * (1 - q)``."""
    q, eps = ctx.q, ctx.truncation_epsilon
    bound = eps * (1.0 - q) / max(1.0, scale)
    return max(1, math.ceil(math.log(bound) / math.log(q)) + 1)


def pochhammer_numeric(x, a, ctx: QContext):
    """``(x; q)_a = (x; q)_inf / (x q^a; q)_inf`` for complex ``x`` and ``a``.

    ``x`` may be a numpy array; ``a`` is a scalar. Both infinite products
    are cut at the same index ``K`` (see :func:`truncation_index`).
    """
    a = complex(a)
    if a == 0:
        return np.ones_like(x, dtype=complex) if isinstance(x, np.ndarray) else 1 + 0j
    xa = np.asarray(x, dtype=complex)
    qa = q_power(a, ctx.q)
    scale = float(np.max(np.abs(xa), initial=0.0)) * max(1.0, abs(qa))
    K = truncation_index(scale, ctx)
    out = np.ones_like(xa)
    qk = 1.0
    for _ in range(K):
        den = 1.0 - xa * (qa * qk)
        if np.any(np.abs(den) < _POLE_GUARD):
            raise PoleEncountered("(x q^a; q)_inf vanishes: pole of the q-Pochhammer ratio")
        out *= (1.0 - xa * qk) / den
        qk *= ctx.q
    if isinstance(x, np.ndarray):
        return out
    return complex(out)


def q_gamma(x, ctx: QContext) -> complex:
    """``Gamma_q(x) = (1-q)^(1-x) (q;q)_inf / (q^x;q)_inf``."""
    x = complex(x)
    # poles at x = 0, -1, -2, ... where some q^(x+k) = 1
    if x.imag == 0 and x.real <= 0 and float(x.real).is_integer():
        raise PoleEncountered(f"Gamma_q has a pole at {x.real}")
    ratio = pochhammer_numeric(ctx.q, x - 1, ctx)
    return q_power(1 - x, 1 - ctx.q) * ratio
