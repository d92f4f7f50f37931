"""Floating-point routes: torus integrals, the complex-plane integral, the
rational-form integral over R^3, and the Gamma-ratio right-hand sides.

All torus integrands depend only on ratios of the variables, so the third
angle is fixed and the quadrature runs in two dimensions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, List, Sequence, Tuple

import numpy as np
from scipy import special

from tripleverify.errors import NoConvergence, PoleEncountered, RouteMismatch
from tripleverify.qseries import QContext, pochhammer_numeric, q_gamma


# --------------------------------------------------------------------------
# Gamma


def gamma_complex(z) -> complex:
    """Gamma function for complex arguments (scipy's complex ``gamma``)."""
    z = complex(z)
    if z.imag == 0 and z.real <= 0 and float(z.real).is_integer():
        raise PoleEncountered(f"Gamma has a pole at {z.real:g}")
    return complex(special.gamma(z))


def _gamma_ratio(num: Sequence, den: Sequence) -> complex:
    """``prod Gamma(num) / prod Gamma(den)`` through log-Gamma to dodge overflow."""
    for z in list(num) + list(den):
        z = complex(z)
        if z.imag == 0 and z.real <= 0 and float(z.real).is_integer():
            raise PoleEncountered(f"Gamma has a pole at {z.real:g}")
    log = sum(special.loggamma(complex(z)) for z in num) - sum(
        special.loggamma(complex(z)) for z in den
    )
    return complex(np.exp(log))


# --------------------------------------------------------------------------
# parameters


@dataclass(frozen=True)
class ParameterSet:
    """The ``sigma`` / ``nu`` / ``a`` coordinates shared by all integral families.

    ``nu1 = s1 - s2 - s3`` (cyclically); the real torus integral uses
    ``a_i = (nu_i - 1) / 4`` and the complex one ``a_i = -1 - nu_i``.
    """

    sigma: Tuple[complex, complex, complex]

    @classmethod
    def from_sigma(cls, sigma) -> "ParameterSet":
        return cls(tuple(complex(s) for s in sigma))

    @classmethod
    def from_nu(cls, nu) -> "ParameterSet":
        n1, n2, n3 = (complex(x) for x in nu)
        # nu_j + nu_k = -2 sigma_i
        return cls(((-(n2 + n3)) / 2, (-(n1 + n3)) / 2, (-(n1 + n2)) / 2))

    @classmethod
    def from_real_a(cls, a) -> "ParameterSet":
        return cls.from_nu(tuple(4 * complex(x) + 1 for x in a))

    @classmethod
    def from_complex_a(cls, a) -> "ParameterSet":
        return cls.from_nu(tuple(-1 - complex(x) for x in a))

    @property
    def nu(self) -> Tuple[complex, complex, complex]:
        s1, s2, s3 = self.sigma
        return (s1 - s2 - s3, s2 - s3 - s1, s3 - s1 - s2)

    @property
    def real_a(self) -> Tuple[complex, complex, complex]:
        return tuple((n - 1) / 4 for n in self.nu)

    @property
    def complex_a(self) -> Tuple[complex, complex, complex]:
        return tuple(-1 - n for n in self.nu)


@dataclass(frozen=True)
class QuadratureConfig:
    """Grid size per dimension, number of doublings, and relative tolerance."""

    m: int = 32
    refinement_limit: int = 6
    tolerance: float = 1e-10
    angular_points: int = 256
    strict: bool = False

    def __post_init__(self):
        if self.m < 8:
            raise ValueError("QuadratureConfig.m must be at least 8")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")


@dataclass
class QuadratureResult:
    value: complex
    error: float
    converged: bool
    history: List[complex] = field(default_factory=list)

    def __float__(self):
        return float(np.real(self.value))

    def __complex__(self):
        return complex(self.value)


def _refine(
    rule: Callable[[int], complex],
    start: int,
    cfg: QuadratureConfig,
    what: str,
    extrapolate: Callable[[complex, complex], complex] = None,
) -> QuadratureResult:
    """Run ``rule(n)`` for ``n = start, 2 start, ...`` until two successive
    estimates agree to ``cfg.tolerance`` (relative)."""
    history: List[complex] = []
    raw: List[complex] = []
    n = start
    err = math.inf
    for _ in range(cfg.refinement_limit + 1):
        val = complex(rule(n))
        if extrapolate is not None and raw:
            est = extrapolate(raw[-1], val)
        else:
            est = val
        raw.append(val)
        history.append(est)
        if len(history) >= 2:
            err = abs(history[-1] - history[-2])
            if err <= cfg.tolerance * max(abs(history[-1]), 1e-300):
                return QuadratureResult(history[-1], err, True, history)
        n *= 2
    result = QuadratureResult(history[-1], err, False, history)
    if cfg.strict:
        raise NoConvergence(f"{what} did not reach tolerance {cfg.tolerance}", result)
    return result


def _richardson(order: float):
    factor = 2.0**order

    def step(coarse, fine):
        return (factor * fine - coarse) / (factor - 1.0)

    return step


# --------------------------------------------------------------------------
# real torus integral


def real_triple_rhs(a) -> complex:
    """Gamma-ratio value of the normalised real torus integral.

    Both printed forms (with ``Gamma(a_i + 1/2)`` and with ``4^{sum a}``) are
    evaluated and must agree, which exercises the duplication formula.
    """
    a1, a2, a3 = (complex(x) for x in a)
    s = a1 + a2 + a3
    half = _gamma_ratio(
        [a1 + 0.5, a2 + 0.5, a3 + 0.5, s + 1],
        [0.5, 0.5, 0.5, a1 + a2 + 1, a2 + a3 + 1, a3 + a1 + 1],
    )
    quarter = _gamma_ratio(
        [2 * a1 + 1, 2 * a2 + 1, 2 * a3 + 1, s + 1],
        [a1 + 1, a2 + 1, a3 + 1, a1 + a2 + 1, a1 + a3 + 1, a2 + a3 + 1],
    ) / 4**s
    if abs(half - quarter) > 1e-12 * max(abs(half), 1e-300):
        raise RouteMismatch(f"duplication forms disagree: {half} vs {quarter}")
    return half


def real_triple_rhs_natural(a) -> Fraction:
    """Exact value at natural ``a``, using ``Gamma(n + 1/2) / Gamma(1/2) = (2n)! / (4^n n!)``."""
    a1, a2, a3 = (int(x) for x in a)
    if min(a1, a2, a3) < 0:
        raise ValueError("real_triple_rhs_natural needs natural exponents")
    f = math.factorial
    half = Fraction(1)
    for x in (a1, a2, a3):
        half *= Fraction(f(2 * x), 4**x * f(x))
    return half * Fraction(f(a1 + a2 + a3), f(a1 + a2) * f(a2 + a3) * f(a1 + a3))


def real_triple_rhs_sigma(sigma) -> complex:
    """Same value written in ``sigma`` / ``nu`` coordinates."""
    ps = ParameterSet.from_sigma(sigma)
    n1, n2, n3 = ps.nu
    s1, s2, s3 = ps.sigma
    return _gamma_ratio(
        [(n1 + 1) / 4, (n2 + 1) / 4, (n3 + 1) / 4, (n1 + n2 + n3 + 1) / 4],
        [0.5, 0.5, 0.5, (1 - s1) / 2, (1 - s2) / 2, (1 - s3) / 2],
    )


def _sinc_ratio(t: np.ndarray) -> np.ndarray:
    """``sin(t) / t`` with the removable point handled."""
    return np.sinc(t / np.pi)


def _sin_convolution(s: np.ndarray, alpha: float, beta: float, n: int) -> np.ndarray:
    """``int_0^s sin(t)^alpha sin(s - t)^beta dt`` for each ``s`` in ``(0, pi)``.

    The endpoint zeros are absorbed into a Gauss-Jacobi weight
    ``(1-x)^beta (1+x)^alpha`` after mapping ``t = s (1 + x) / 2``.
    """
    x, w = special.roots_jacobi(n, beta, alpha)
    s = np.asarray(s, dtype=float)[:, None]
    t = s * (1 + x) / 2
    r = s * (1 - x) / 2
    smooth = _sinc_ratio(t) ** alpha * _sinc_ratio(r) ** beta
    return (s[:, 0] / 2) ** (alpha + beta + 1) * (smooth * w).sum(axis=1)


def _real_triple_jacobi(a, n: int) -> float:
    a1, a2, a3 = a
    x, w = special.roots_jacobi(n, 2 * a3, 2 * a3)
    u = np.pi * (1 + x) / 2
    # sin(u) = u (pi - u) * smooth
    smooth = (np.sin(u) / (u * (np.pi - u))) ** (2 * a3)
    h = _sin_convolution(np.pi - u, 2 * a1, 2 * a2, n) + _sin_convolution(u, 2 * a2, 2 * a1, n)
    # u^(2a3) (pi-u)^(2a3) = (pi/2)^(4 a3) (1+x)^(2a3) (1-x)^(2a3)
    scale = (np.pi / 2) ** (4 * a3 + 1)
    return float(scale * np.sum(w * smooth * h) / np.pi**2)


def _real_triple_midpoint(a, m: int) -> float:
    a1, a2, a3 = a
    h = np.pi / m
    # shifted nodes keep u, v and u + v off multiples of pi
    u = (np.arange(m) + 1.0 / 3.0) * h
    su = np.abs(np.sin(u)) ** (2 * a3)
    sv = np.abs(np.sin(u)) ** (2 * a1)
    total = 0.0
    for j in range(m):
        total += su[j] * np.sum(sv * np.abs(np.sin(u[j] + u)) ** (2 * a2))
    return float(total / (m * m))


def _singular_order(a) -> float:
    orders = [2 * x + 1 for x in a if not float(x).is_integer()]
    return min(orders) if orders else math.inf


def real_triple_lhs(a, cfg: QuadratureConfig = None, method: str = "midpoint") -> QuadratureResult:
    """Normalised torus integral of ``prod |sin(t_i - t_{i+1})|^{2 a_{i+2}}``.

    ``method="midpoint"`` (default) uses a shifted product midpoint rule in
    ``u = t1 - t2, v = t2 - t3`` with one Richardson step on the leading
    singular order. ``method="jacobi"`` nests Gauss-Jacobi rules split at the
    zero lines and serves as an independent cross-check.
    """
    cfg = cfg or QuadratureConfig()
    a = tuple(float(x) for x in a)
    if min(a) <= -0.5:
        raise ValueError("the real torus integral needs a_i > -1/2")
    if method == "jacobi":
        return _refine(lambda n: _real_triple_jacobi(a, n), cfg.m, cfg, "real_triple_lhs")
    if method == "midpoint":
        order = _singular_order(a)
        extrapolate = None if order == math.inf else _richardson(order)
        return _refine(
            lambda m: _real_triple_midpoint(a, m), cfg.m, cfg, "real_triple_lhs", extrapolate
        )
    raise ValueError(f"unknown method {method!r}")


# --------------------------------------------------------------------------
# q-deformed torus integral


def qtorus_rhs(a, qctx: QContext) -> complex:
    a1, a2, a3 = (complex(x) for x in a)
    G = lambda z: q_gamma(z, qctx)  # noqa: E731
    num = G(a1 + a2 + a3 + 1) * G(2 * a1 + 1) * G(2 * a2 + 1) * G(2 * a3 + 1)
    den = G(a1 + 1) * G(a2 + 1) * G(a3 + 1) * G(a1 + a2 + 1) * G(a1 + a3 + 1) * G(a2 + a3 + 1)
    return num / den


def _pair_factor(theta: np.ndarray, a, qctx: QContext) -> np.ndarray:
    """``(x; q)_a (q / x; q)_a`` at ``x = exp(i theta)``."""
    x = np.exp(1j * theta)
    return pochhammer_numeric(x, a, qctx) * pochhammer_numeric(qctx.q / x, a, qctx)


def _qtorus_trapezoid(a, qctx: QContext, m: int) -> complex:
    a1, a2, a3 = a
    theta = 2 * np.pi * np.arange(m) / m
    g1 = _pair_factor(theta, a1, qctx)  # y2 / y3
    g2 = _pair_factor(theta, a2, qctx)  # y1 / y3
    g3 = _pair_factor(theta, a3, qctx)  # y1 / y2
    idx = np.subtract.outer(np.arange(m), np.arange(m)) % m  # theta1 - theta2
    return complex(np.sum(g2[:, None] * g3[idx] * g1[None, :]) / (m * m))


def qtorus_lhs(a, qctx: QContext, cfg: QuadratureConfig = None) -> QuadratureResult:
    """Normalised torus integral of the q-deformed product, by the periodic
    trapezoidal rule (spectrally accurate for this analytic integrand)."""
    cfg = cfg or QuadratureConfig()
    a = tuple(complex(x) for x in a)
    if min(x.real for x in a) <= 0:
        raise ValueError("the q-torus integral needs Re(a_i) > 0")
    return _refine(lambda m: _qtorus_trapezoid(a, qctx, m), cfg.m, cfg, "qtorus_lhs")


# --------------------------------------------------------------------------
# complex-plane integral


def complex_pair_rhs(a) -> complex:
    """``I_C2(a) = pi^2 Gamma(sum a + 2) prod Gamma(a_i + 1) / prod_{i<j} Gamma(a_i + a_j + 2)``."""
    a1, a2, a3 = (complex(x) for x in a)
    return math.pi**2 * _gamma_ratio(
        [a1 + a2 + a3 + 2, a1 + 1, a2 + 1, a3 + 1],
        [a1 + a2 + 2, a1 + a3 + 2, a2 + a3 + 2],
    )


def complex_two_point_sigma(sigma) -> complex:
    """``I_tilde_C(sigma) = I_C(sigma) / pi`` from the ``sigma``-form ratio."""
    ps = ParameterSet.from_sigma(sigma)
    s1, s2, s3 = ps.sigma
    n1, n2, n3 = ps.nu
    return math.pi**2 * _gamma_ratio([s1 + s2 + s3 - 1, -n1, -n2, -n3], [2 * s1, 2 * s2, 2 * s3])


def complex_three_point_sigma(sigma) -> complex:
    return math.pi * complex_two_point_sigma(sigma)


def complex_pair_rhs_checked(a) -> complex:
    """:func:`complex_pair_rhs`, cross-checked through the ``sigma`` dictionary."""
    direct = complex_pair_rhs(a)
    via_sigma = complex_two_point_sigma(ParameterSet.from_complex_a(a).sigma)
    if abs(direct - via_sigma) > 1e-12 * abs(direct):
        raise RouteMismatch(f"a-form {direct} and sigma-form {via_sigma} disagree")
    return direct


def _complex_pair_grid(a, n: int, n_angle: int) -> float:
    a1, a2, a3 = a
    x, w = np.polynomial.legendre.leggauss(n)
    delta = 2 * np.pi * (np.arange(n_angle) + 0.5) / n_angle
    cos_d = np.cos(delta)
    v1 = (1 + x) / 2
    w1 = w / 2
    total = 0.0
    for i in range(n):
        # split v2 at the diagonal v2 = v1 where the angular factor is least smooth
        parts = []
        for lo, hi in ((0.0, v1[i]), (v1[i], 1.0)):
            parts.append((lo + (hi - lo) * (1 + x) / 2, w * (hi - lo) / 2))
        v2 = np.concatenate([p[0] for p in parts])
        w2 = np.concatenate([p[1] for p in parts])
        r1sq = v1[i] / (1 - v1[i])
        r2sq = v2 / (1 - v2)
        r1r2 = np.sqrt(r1sq * r2sq)
        base = r1sq + r2sq[:, None] - 2 * r1r2[:, None] * cos_d[None, :]
        angular = np.sum(np.maximum(base, 0.0) ** a3, axis=1) * (2 * np.pi / n_angle)
        radial = (1 - v1[i]) ** (a2 + a3) * (1 - v2) ** (a1 + a3)
        total += w1[i] * np.sum(w2 * radial * angular)
    # 2 pi from the mean angle, 1/2 from each radial substitution
    return float(2 * np.pi * total / 4)


def complex_pair_lhs(a, cfg: QuadratureConfig = None) -> QuadratureResult:
    """``int_{C^2} (1+|z1|^2)^{-2-a2-a3} (1+|z2|^2)^{-2-a1-a3} |z1-z2|^{2 a3}``.

    Polar coordinates, ``r^2 = v / (1 - v)``: Gauss-Legendre in ``v1, v2``
    and a midpoint rule in the relative angle.
    """
    cfg = cfg or QuadratureConfig(m=32, tolerance=1e-6)
    a = tuple(float(x) for x in a)
    if a[2] < 0:
        raise ValueError("numeric complex route needs a3 >= 0")
    if min(a[1] + a[2], a[0] + a[2]) <= -1 or a[0] <= -1 or a[1] <= -1:
        raise ValueError("exponents outside the convergence region")

    def rule(n):
        return _complex_pair_grid(a, n, max(cfg.angular_points, 4 * n))

    return _refine(rule, cfg.m, cfg, "complex_pair_lhs")


# --------------------------------------------------------------------------
# rational form over R^3


def _rational_form_grid(a, m: int) -> float:
    a1, a2, a3 = a  # (a, b, c) of the rational form
    h = np.pi / m
    nodes = []
    for shift in (1 / 6, 1 / 2, 5 / 6):
        alpha = -np.pi / 2 + (np.arange(m) + shift) * h
        x = np.tan(alpha)
        nodes.append((x, h / np.cos(alpha) ** 2))
    (x, wx), (y, wy), (z, wz) = nodes
    fy = wy * (1 + y**2) ** (-(a1 + a3 + 1))
    fz = wz * (1 + z**2) ** (-(a1 + a2 + 1))
    yz = np.abs(y[:, None] - z[None, :]) ** (2 * a1) * fy[:, None] * fz[None, :]
    total = 0.0
    for i in range(m):
        fx = wx[i] * (1 + x[i] ** 2) ** (-(a2 + a3 + 1))
        xy = np.abs(x[i] - y) ** (2 * a3)
        xz = np.abs(x[i] - z) ** (2 * a2)
        total += fx * np.sum(xy[:, None] * xz[None, :] * yz)
    return float(8 * total)


def rational_form_real(a, cfg: QuadratureConfig = None) -> QuadratureResult:
    """``8 int_{R^3} (1+x^2)^{-(b+c+1)} (1+y^2)^{-(a+c+1)} (1+z^2)^{-(a+b+1)}
    |x-y|^{2c} |x-z|^{2b} |y-z|^{2a}`` with ``(a, b, c) = (a1, a2, a3)``.

    The grid is a shifted midpoint grid in ``alpha`` pushed through
    ``x = tan(alpha)``. Equals ``(2 pi)^3`` times the real torus integral.
    """
    cfg = cfg or QuadratureConfig(m=32, tolerance=1e-3, refinement_limit=3)
    a = tuple(float(x) for x in a)
    if min(a) <= -0.5:
        raise ValueError("the rational form needs a_i > -1/2")
    order = _singular_order(a)
    extrapolate = None if order == math.inf else _richardson(order)
    return _refine(lambda m: _rational_form_grid(a, m), cfg.m, cfg, "rational_form_real", extrapolate)
