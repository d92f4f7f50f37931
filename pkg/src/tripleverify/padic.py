"""p-adic layer: valuations, the local Gamma factor, the one- and two-point
integrals over Q_p, and brute-force oracles for them.

Every p-adic number here is a rational number viewed in Q_p. When all
exponents are integers the closed forms and the coset-enumeration oracle
are evaluated in exact rational arithmetic; complex exponents fall back to
double precision and the oracle widens its bound by a rounding allowance.
"""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from numbers import Integral
from typing import Tuple, Union

import numpy as np

from tripleverify.errors import (
    ConvergenceViolation,
    DepthTooSmall,
    DivisionByZero,
    PoleEncountered,
)

Number = Union[int, Fraction, float, complex]
INF = math.inf
_ORACLE_CHUNK = 1 << 22
_MAX_CELLS = 1 << 26


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % d for d in range(2, math.isqrt(p) + 1))


# --------------------------------------------------------------------------
# scalars


def valuation(x, p: int) -> Union[int, float]:
    """``v_p(x)`` for a rational ``x``; ``inf`` at zero."""
    x = Fraction(x)
    if x == 0:
        return INF
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def norm(x, p: int) -> Fraction:
    v = valuation(x, p)
    if v == INF:
        return Fraction(0)
    return Fraction(p) ** (-v)


def psi(x, p: int) -> Fraction:
    """``max(|x|_p, 1)``."""
    return max(norm(x, p), Fraction(1))


@dataclass(frozen=True)
class PAdicScalar:
    value: Fraction
    p: int

    def __post_init__(self):
        object.__setattr__(self, "value", Fraction(self.value))
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    @property
    def valuation(self):
        return valuation(self.value, self.p)

    @property
    def norm(self) -> Fraction:
        return norm(self.value, self.p)

    @property
    def in_zp(self) -> bool:
        return self.valuation >= 0

    def _other(self, other) -> Fraction:
        if isinstance(other, PAdicScalar):
            if other.p != self.p:
                raise ValueError("p-adic scalars over different primes")
            return other.value
        return Fraction(other)

    def __add__(self, other):
        return PAdicScalar(self.value + self._other(other), self.p)

    def __sub__(self, other):
        return PAdicScalar(self.value - self._other(other), self.p)

    def __mul__(self, other):
        return PAdicScalar(self.value * self._other(other), self.p)

    def __truediv__(self, other):
        o = self._other(other)
        if o == 0:
            raise DivisionByZero("p-adic division by zero")
        return PAdicScalar(self.value / o, self.p)

    def __neg__(self):
        return PAdicScalar(-self.value, self.p)


def psi_p(x: Union[PAdicScalar, Fraction, int], p: int = None) -> Fraction:
    if isinstance(x, PAdicScalar):
        return psi(x.value, x.p)
    if p is None:
        raise ValueError("psi_p of a bare rational needs the prime")
    return psi(x, p)


@dataclass(frozen=True)
class PAdicContext:
    """Prime plus the oracle window ``p^{-M} Z_p`` cut into cosets of ``p^N Z_p``."""

    p: int
    outer_depth: int
    inner_depth: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.outer_depth < 1 or self.inner_depth < 1:
            raise ValueError("oracle depths must be at least 1")

    @classmethod
    def default(cls, p: int) -> "PAdicContext":
        if p <= 3:
            return cls(p, 5, 8)
        return cls(p, 4, 6)

    @property
    def cells(self) -> int:
        return self.p ** (self.outer_depth + self.inner_depth)


# --------------------------------------------------------------------------
# exact-or-complex helpers


def _exact(*xs) -> bool:
    return all(isinstance(x, Integral) or (isinstance(x, Fraction) and x.denominator == 1) for x in xs)


def _as_int(x) -> int:
    return int(Fraction(x))


def ppow(p: int, e, exact: bool):
    """``p**e``: a Fraction for integer ``e`` in exact mode, complex otherwise."""
    if exact:
        return Fraction(p) ** _as_int(e)
    return cmath.exp(complex(e) * math.log(p))


def gamma_qp(s, p: int):
    """Local Gamma factor ``(1 - 1/p) / (1 - p^{-s})``; ``s = inf`` gives ``1 - 1/p``."""
    if s == INF:
        return 1 - Fraction(1, p)
    exact = _exact(s)
    den = 1 - ppow(p, -s if exact else -complex(s), exact)
    if den == 0 or abs(den) < 1e-300:
        raise PoleEncountered(f"Gamma_Qp has a pole at s = {s}")
    if not exact and abs(den) < 1e-13:
        raise PoleEncountered(f"Gamma_Qp is numerically singular at s = {s}")
    return (1 - Fraction(1, p)) / den if exact else (1 - 1 / p) / den


def gamma_inf_over(s, p: int, exact: bool):
    """``Gamma_Qp(inf) / Gamma_Qp(s) = 1 - p^{-s}``; finite everywhere."""
    return 1 - ppow(p, -s, exact)


def _gamma_times_geometric(s, k: int, p: int, exact: bool):
    """``Gamma_Qp(s) * (1 - p^{-k s})`` for ``k >= 0``, finite at ``s = 0``."""
    if k == 0:
        return Fraction(0) if exact else 0j
    try:
        return gamma_qp(s, p) * (1 - ppow(p, -k * s if exact else -k * complex(s), exact))
    except PoleEncountered:
        # limit at the pole: (1 - 1/p) * sum_{j<k} p^{-j s}
        scale = 1 - Fraction(1, p) if exact else 1 - 1 / p
        return scale * sum(ppow(p, -j * s if exact else -j * complex(s), exact) for j in range(k))


# --------------------------------------------------------------------------
# F(a, c; y) = int psi(x)^a |x - y|^c dx


def check_f_convergence(a, c) -> None:
    if not complex(c).real > -1:
        raise ConvergenceViolation(f"need Re(c) > -1, got c = {c}")
    if not complex(a + c).real < -1:
        raise ConvergenceViolation(f"need Re(a + c) < -1, got a + c = {a + c}")


def _y_valuation(y, p: int):
    if isinstance(y, PAdicScalar):
        if y.p != p:
            raise ValueError("prime mismatch")
        y = y.value
    return valuation(y, p)


def f_closed(a, c, y, p: int):
    """Closed form of ``F(a, c; y)``; depends on ``y`` only through ``v_p(y)``.

    For ``v_p(y) = n < 0`` the last term carries ``Gamma_Qp((n+1)(a+1))``
    (vanishing at ``n = -1``), which is what direct shell summation gives.
    """
    check_f_convergence(a, c)
    n = _y_valuation(y, p)
    return f_closed_shell(a, c, n, p)


def f_closed_shell(a, c, n, p: int):
    """:func:`f_closed` for a ``y`` of valuation ``n`` (``n = inf`` allowed)."""
    exact = _exact(a, c)
    if not exact:
        a, c = complex(a), complex(c)
    head = gamma_qp(c + 1, p) - gamma_qp(a + c + 1, p)
    if n >= 0:
        return head
    n = int(n)
    out = ppow(p, -n * (a + c + 1), exact) * head
    out += ppow(p, -n * c, exact) * gamma_inf_over(n * (a + 1) + 1, p, exact)
    out -= ppow(p, -n * c, exact) * _gamma_a1_term(a, n, p, exact)
    return out


def _gamma_a1_term(a, n: int, p: int, exact: bool):
    """``Gamma_Qp(a+1) (1 - p^{-(n+1)(a+1)})``, zero at ``n = -1``.

    With ``k = -(n+1)`` this is ``-p^{k s} Gamma(s) (1 - p^{-k s})``,
    ``s = a + 1``, which stays finite at the pole ``s = 0``.
    """
    k = -(n + 1)
    s = a + 1
    return -ppow(p, k * s, exact) * _gamma_times_geometric(s, k, p, exact)


def f_closed_printed(a, c, n: int, p: int):
    """The ``v_p(y) = n < 0`` formula with ``Gamma_Qp(n(a+1))`` in the last
    denominator, kept to document that it disagrees with the oracle."""
    exact = _exact(a, c)
    head = gamma_qp(c + 1, p) - gamma_qp(a + c + 1, p)
    out = ppow(p, -n * (a + c + 1), exact) * head
    out += ppow(p, -n * c, exact) * gamma_inf_over(n * (a + 1) + 1, p, exact)
    out -= ppow(p, -n * c, exact) * gamma_qp(a + 1, p) * gamma_inf_over(n * (a + 1), p, exact)
    return out


def _residue(y: Fraction, p: int, M: int, modulus: int) -> int:
    """Integer congruent to ``y * p^M`` modulo ``modulus`` (a power of ``p``)."""
    t = y * Fraction(p) ** M
    if t.denominator % p == 0:
        raise DepthTooSmall("y lies outside the oracle window")
    return (t.numerator * pow(t.denominator, -1, modulus)) % modulus


def _int_valuations(arr: np.ndarray, p: int, cap: int) -> np.ndarray:
    v = np.zeros(arr.shape, dtype=np.int64)
    pk = 1
    for _ in range(cap):
        pk *= p
        v += (arr % pk == 0)
    return v


@lru_cache(maxsize=64)
def _cell_histogram(p: int, M: int, N: int, Y: int) -> dict:
    """Count cells ``k p^{-M} + p^N Z_p`` by ``(v(k), v(k - Y))`` capped at ``M+N``.

    Cached: a sweep over exponent pairs reuses the histogram of each ``y``.
    The returned dict must not be mutated."""
    L = M + N
    P = p**L
    if P > _MAX_CELLS:
        raise ValueError(f"oracle grid of {P} cells exceeds the {_MAX_CELLS} limit")
    counts = np.zeros((L + 1) * (L + 1), dtype=np.int64)
    for start in range(0, P, _ORACLE_CHUNK):
        k = np.arange(start, min(P, start + _ORACLE_CHUNK), dtype=np.int64)
        vk = _int_valuations(k, p, L)
        vd = _int_valuations((k - Y) % P, p, L)
        counts += np.bincount(vk * (L + 1) + vd, minlength=(L + 1) ** 2)
    return {
        (code // (L + 1), code % (L + 1)): int(cnt)
        for code, cnt in enumerate(counts)
        if cnt
    }


def f_oracle(a, c, y, ctx: PAdicContext):
    """Brute-force ``F(a, c; y)`` by enumerating all ``p^{M+N}`` cosets of
    ``p^N Z_p`` inside ``p^{-M} Z_p``.

    The cell containing ``y`` and the region ``|x| > p^M`` are left out of
    the sum and bounded by geometric series. Returns ``(value, tail_bound)``.
    """
    check_f_convergence(a, c)
    p, M, N = ctx.p, ctx.outer_depth, ctx.inner_depth
    y = y.value if isinstance(y, PAdicScalar) else Fraction(y)
    vy = valuation(y, p)
    if vy < -M:
        raise DepthTooSmall(f"v_p(y) = {vy} lies outside the window p^-{M} Z_p")
    L = M + N
    Y = _residue(y, p, M, p**L)
    hist = _cell_histogram(p, M, N, Y)

    exact = _exact(a, c)
    if not exact:
        a, c = complex(a), complex(c)
    cell = ppow(p, -N, True)
    total = Fraction(0) if exact else 0j
    magnitude = 0.0
    for (vk, vd), count in sorted(hist.items()):
        if vd == L:
            continue  # the cell of y
        psi_exp = max(M - vk, 0)  # psi(x0) = p^psi_exp
        weight = count * cell if exact else count * float(cell)
        term = weight * ppow(p, psi_exp * a, exact) * ppow(p, (M - vd) * c, exact)
        total += term
        if not exact:
            magnitude += abs(term)

    A, C = (Fraction(a), Fraction(c)) if exact else (a.real, c.real)
    geo_exact = exact

    def g(e):
        return ppow(p, e, geo_exact) if geo_exact else float(p) ** e

    # cell of y: psi is constant there, |x - y| runs over p^N Z_p
    vy_cell = Y and _int_valuations(np.array([Y]), p, L)[0]
    psi_cell_exp = max(M - int(vy_cell), 0) if Y else 0
    unit = (1 - Fraction(1, p)) if geo_exact else (1 - 1 / p)
    bound_cell = g(psi_cell_exp * A) * unit * g(-N * (C + 1)) / (1 - g(-(C + 1)))
    # |x| > p^M: |x - y| = |x|
    r = g(1 + A + C)
    bound_outer = unit * g((M + 1) * (1 + A + C)) / (1 - r)
    tail = bound_cell + bound_outer
    if not exact:
        tail = float(tail) + 64 * np.finfo(float).eps * (magnitude + abs(total))
    return total, tail


# --------------------------------------------------------------------------
# psi-power integrals


def psi_power_integral(a, p: int):
    """``int_{Q_p} psi(x)^a dx`` by summing the shells ``v(x) = m``.

    ``Z_p`` contributes 1; the shells ``m < 0`` form a geometric series
    summed in closed form (exactly for integer ``a``).
    """
    if not complex(a).real < -1:
        raise ConvergenceViolation("int psi^a converges only for Re(a) < -1")
    exact = _exact(a)
    r = ppow(p, 1 + a, exact)
    unit = 1 - Fraction(1, p) if exact else 1 - 1 / p
    return 1 + unit * r / (1 - r)


def psi_power_partial(a: int, p: int, depth: int) -> Fraction:
    """Term-by-term partial shell sum down to ``v(x) = -depth`` (exact)."""
    total = Fraction(1)
    unit = 1 - Fraction(1, p)
    for m in range(1, depth + 1):
        total += unit * Fraction(p) ** (m * (1 + a))
    return total


# --------------------------------------------------------------------------
# J(a, b, c) and the triple integral


def check_j_convergence(a, b, c) -> None:
    check_f_convergence(a, c)
    if not complex(b + c).real < -1:
        raise ConvergenceViolation(f"need Re(b + c) < -1, got {b + c}")
    if not complex(a + b + c).real < -2:
        raise ConvergenceViolation(f"need Re(a + b + c) < -2, got {a + b + c}")


def j_closed(a, b, c, p: int):
    check_j_convergence(a, b, c)
    exact = _exact(a, b, c)
    if not exact:
        a, b, c = complex(a), complex(b), complex(c)
    G = lambda s: gamma_qp(s, p)  # noqa: E731
    num = G(c + 1) * G(-a - c - 1) * G(-b - c - 1) * G(-a - b - c - 2)
    den = G(-a) * G(-b) * G(-a - b - 2 * c - 2)
    return num / den


def _f_shell_coefficients(A: float, C: float, p: int):
    """Real ``(A, alpha, beta)`` with
    ``F(A, C; v=n) = alpha p^{-n(A+C+1)} + beta p^{-nC}`` for ``n < 0``."""
    if abs(A + 1) < 1e-9:
        A = -1 + 1e-6  # psi >= 1, so raising A only enlarges the bound
    g = lambda s: complex(gamma_qp(s, p)).real  # noqa: E731
    alpha = g(C + 1) - g(A + C + 1) - 1.0 / p + g(A + 1) * p ** (-(A + 1))
    beta = 1.0 - g(A + 1)
    return A, alpha, beta


def j_oracle(a, b, c, ctx: PAdicContext):
    """``J = int psi(y)^b F(a, c; y) dy`` as a shell sum over ``v_p(y)`` in
    ``[-M, N]`` using :func:`f_closed` per shell. Returns ``(value, tail_bound)``."""
    check_j_convergence(a, b, c)
    p, M, N = ctx.p, ctx.outer_depth, ctx.inner_depth
    exact = _exact(a, b, c)
    if not exact:
        a, b, c = complex(a), complex(b), complex(c)
    unit = 1 - Fraction(1, p) if exact else 1 - 1 / p
    total = Fraction(0) if exact else 0j
    magnitude = 0.0
    for n in range(-M, N + 1):
        shell = unit * ppow(p, -n, exact) * ppow(p, -n * b if n < 0 else 0, exact) * f_closed_shell(a, c, n, p)
        total += shell
        magnitude += abs(shell)

    # v(y) > N: F is constant there and the region has measure p^{-N-1}
    f0 = f_closed_shell(a, c, 0, p)
    tail_inner = abs(f0) * (ppow(p, -N - 1, True) if exact else p ** (-N - 1.0))
    # v(y) < -M: bound with real parts; the integrand is then positive
    A = float(complex(a).real)
    B = float(complex(b).real)
    C = float(complex(c).real)
    A, alpha, beta = _f_shell_coefficients(A, C, p)

    def geo(s):
        # sum_{k > M} p^{k s}, s < 0
        return p ** ((M + 1) * s) / (1 - p**s)

    tail_outer = (1 - 1 / p) * (abs(alpha) * geo(A + B + C + 2) + abs(beta) * geo(B + C + 1))
    if exact:
        tail = float(tail_inner) + tail_outer
    else:
        tail = float(tail_inner) + tail_outer + 64 * np.finfo(float).eps * magnitude
    return total, tail


def sigma_to_j_params(sigma) -> Tuple:
    """``(a, b, c) = (-2 s1, -2 s2, -1 - nu3)`` with ``nu3 = s3 - s1 - s2``."""
    s1, s2, s3 = sigma
    nu3 = s3 - s1 - s2
    return -2 * s1, -2 * s2, -1 - nu3


def triple_closed(sigma, p: int):
    """``(I_tilde, I)`` for the p-adic triple integral.

    ``I_tilde`` is the Gamma_Qp ratio in the ``sigma`` coordinates and
    ``I = I_tilde / Gamma_Qp(2) = (1 + 1/p) I_tilde``.
    """
    s1, s2, s3 = sigma
    check_j_convergence(*sigma_to_j_params(sigma))
    exact = _exact(s1, s2, s3)
    if not exact:
        s1, s2, s3 = complex(s1), complex(s2), complex(s3)
    nu1, nu2, nu3 = s1 - s2 - s3, s2 - s3 - s1, s3 - s1 - s2
    G = lambda s: gamma_qp(s, p)  # noqa: E731
    tilde = G(s1 + s2 + s3 - 1) * G(-nu1) * G(-nu2) * G(-nu3) / (G(2 * s1) * G(2 * s2) * G(2 * s3))
    full = tilde / G(2)
    return tilde, full


def triple_oracle(sigma, ctx: PAdicContext):
    return j_oracle(*sigma_to_j_params(sigma), ctx)


# --------------------------------------------------------------------------
# Moebius action


Matrix = Tuple[Tuple[Fraction, Fraction], Tuple[Fraction, Fraction]]


def _matrix(g) -> Matrix:
    (a, b), (c, d) = g
    return (Fraction(a), Fraction(b)), (Fraction(c), Fraction(d))


def det(g) -> Fraction:
    (a, b), (c, d) = _matrix(g)
    return a * d - b * c


def moebius_act(g, z):
    """``(a z + b) / (c z + d)`` exactly; accepts PAdicScalar or rationals."""
    p = z.p if isinstance(z, PAdicScalar) else None
    zv = z.value if isinstance(z, PAdicScalar) else Fraction(z)
    (a, b), (c, d) = _matrix(g)
    if det(g) != 1:
        raise ValueError("Moebius action expects a determinant-one matrix")
    den = c * zv + d
    if den == 0:
        raise DivisionByZero("c z + d = 0")
    out = (a * zv + b) / den
    return PAdicScalar(out, p) if p is not None else out


def k_matrix(y, p: int) -> Matrix:
    """The element of ``SL_2(Z_p)`` sending ``y`` to 0."""
    y = Fraction(y)
    if valuation(y, p) >= 0:
        return (Fraction(1), -y), (Fraction(0), Fraction(1))
    return (1 / y, Fraction(-1)), (Fraction(1), Fraction(0))


def random_rational(rng: random.Random, p: int, vmin: int = -4, vmax: int = 4) -> Fraction:
    """Nonzero rational ``p^v * u / w`` with ``u, w`` prime to ``p``."""
    def unit():
        while True:
            x = rng.randint(1, 10 * p * p)
            if x % p:
                return x
    v = rng.randint(vmin, vmax)
    return Fraction(p) ** v * Fraction(rng.choice((-1, 1)) * unit(), unit())


def random_zp(rng: random.Random, p: int) -> Fraction:
    x = random_rational(rng, p, 0, 4)
    return x if rng.random() > 0.1 else Fraction(0)


def random_sl2_zp(rng: random.Random, p: int) -> Matrix:
    """Random element of ``SL_2(Z_p)`` with rational entries."""
    while True:
        a = random_rational(rng, p, 0, 0)  # unit
        b, c = random_zp(rng, p), random_zp(rng, p)
        d = (1 + b * c) / a
        g = (a, b), (c, d)
        if rng.random() < 0.5:
            # swap rows/columns through the Weyl element to vary the shape
            (a, b), (c, d) = g
            g = (b, -a), (d, -c)
        if det(g) == 1:
            return g


def random_sl2_qp(rng: random.Random, p: int) -> Matrix:
    while True:
        a = random_rational(rng, p)
        b, c = random_rational(rng, p), random_rational(rng, p)
        d = (1 + b * c) / a
        g = (a, b), (c, d)
        if det(g) == 1:
            return g


def psi_identity_sides(g, x, p: int) -> Tuple[Fraction, Fraction]:
    """``psi(g.x)`` and ``psi(x) / |c x + d|_p`` (equal for ``g`` in SL_2(Z_p))."""
    (_, _), (c, d) = _matrix(g)
    x = Fraction(x)
    return psi(moebius_act(g, x), p), psi(x, p) / norm(c * x + d, p)


def difference_identity_sides(g, x, y) -> Tuple[Fraction, Fraction]:
    """``g.x - g.y`` and ``(x - y) / ((c x + d)(c y + d))``."""
    (_, _), (c, d) = _matrix(g)
    x, y = Fraction(x), Fraction(y)
    return moebius_act(g, x) - moebius_act(g, y), (x - y) / ((c * x + d) * (c * y + d))
