"""Exact and numeric verification of the triple-product integral identities.

Real, complex, q-deformed and p-adic evaluations of a three-point kernel
integral, together with the constant-term and binomial identities they
reduce to. Every identity is checked along at least two independent routes.
"""

from tripleverify.errors import (
    ConfigError,
    ConvergenceViolation,
    DepthTooSmall,
    DivisionByZero,
    NoConvergence,
    NonDivisible,
    PoleEncountered,
    RouteMismatch,
)
from tripleverify.exact import (
    ExactRational,
    LaurentPolynomial,
    QPolynomial,
    binomial,
    factorial,
    laurent_ct,
    laurent_mul,
    qpoly_exact_div,
)

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "ConvergenceViolation",
    "DepthTooSmall",
    "DivisionByZero",
    "ExactRational",
    "LaurentPolynomial",
    "NoConvergence",
    "NonDivisible",
    "PoleEncountered",
    "QPolynomial",
    "RouteMismatch",
    "binomial",
    "factorial",
    "laurent_ct",
    "laurent_mul",
    "qpoly_exact_div",
]
