"""Exact arithmetic kernel.

Rationals are :class:`fractions.Fraction`. On top of them sit univariate
polynomials in ``q`` with integer coefficients (:class:`QPolynomial`) and
sparse Laurent polynomials in up to three variables whose coefficients are
``QPolynomial`` (:class:`LaurentPolynomial`). Everything is immutable.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Integral
from typing import Dict, Iterable, Mapping, Sequence, Tuple, Union

from tripleverify.errors import DivisionByZero, NonDivisible

ExactRational = Fraction

# Exponents are plain Python ints, but anything this large means a runaway
# expansion rather than a real workload.
EXPONENT_LIMIT = 2**31 - 1
MAX_VARIABLES = 3


# --------------------------------------------------------------------------
# rationals


def factorial(n: int) -> int:
    if not isinstance(n, Integral) or n < 0:
        raise ValueError(f"factorial needs a natural number, got {n!r}")
    return math.factorial(n)


def binomial(n: int, k: int) -> int:
    """Binomial coefficient with the convention ``binomial(n, k) = 0`` for
    ``k < 0`` or ``k > n``."""
    if not isinstance(n, Integral) or not isinstance(k, Integral):
        raise ValueError("binomial needs integer arguments")
    if k < 0 or n < 0 or k > n:
        return 0
    return math.comb(n, k)


def rational_div(x, y) -> Fraction:
    if y == 0:
        raise DivisionByZero("division of an exact rational by zero")
    return Fraction(x) / Fraction(y)


def as_integer(x: Fraction) -> int:
    """Return ``x`` as ``int``, raising ``NonDivisible`` if it is not integral."""
    x = Fraction(x)
    if x.denominator != 1:
        raise NonDivisible(f"{x} is not an integer")
    return x.numerator


# --------------------------------------------------------------------------
# univariate polynomials in q


def _trim(coeffs: Iterable[int]) -> Tuple[int, ...]:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _conv(a: Sequence[int], b: Sequence[int]) -> list:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _add_into(acc: list, c: Sequence[int], shift: int = 0) -> None:
    need = len(c) + shift
    if len(acc) < need:
        acc.extend([0] * (need - len(acc)))
    for i, x in enumerate(c):
        acc[i + shift] += x


class QPolynomial:
    """Polynomial in ``q`` with arbitrary-precision integer coefficients.

    ``coeffs[k]`` is the coefficient of ``q**k``; the highest stored
    coefficient is nonzero (the zero polynomial has no coefficients).
    """

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs: Union[Iterable[int], int] = ()):
        if isinstance(coeffs, Integral):
            coeffs = (int(coeffs),)
        c = _trim(int(x) for x in coeffs)
        self._c = c
        self._hash = None

    @classmethod
    def _raw(cls, c: Tuple[int, ...]) -> "QPolynomial":
        obj = cls.__new__(cls)
        obj._c = c
        obj._hash = None
        return obj

    @classmethod
    def monomial(cls, k: int, coeff: int = 1) -> "QPolynomial":
        if k < 0:
            raise ValueError("QPolynomial exponents are nonnegative")
        return cls([0] * k + [coeff])

    @property
    def coeffs(self) -> Tuple[int, ...]:
        return self._c

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self._c) - 1

    def is_zero(self) -> bool:
        return not self._c

    def __bool__(self):
        return bool(self._c)

    def __len__(self):
        return len(self._c)

    def __getitem__(self, k: int) -> int:
        return self._c[k] if 0 <= k < len(self._c) else 0

    @staticmethod
    def _coerce(other) -> "QPolynomial":
        if isinstance(other, QPolynomial):
            return other
        if isinstance(other, Integral):
            return QPolynomial(int(other))
        return NotImplemented

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(("QPolynomial", self._c))
        return self._hash

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        acc = list(self._c)
        _add_into(acc, other._c)
        return QPolynomial(acc)

    __radd__ = __add__

    def __neg__(self):
        return QPolynomial._raw(tuple(-x for x in self._c))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return QPolynomial._raw(tuple(_conv(self._c, other._c)))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a QPolynomial")
        result = QPolynomial(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def shift(self, k: int) -> "QPolynomial":
        """Multiply by ``q**k``. Negative ``k`` must divide exactly."""
        if self.is_zero() or k == 0:
            return self
        if k > 0:
            return QPolynomial._raw((0,) * k + self._c)
        if any(self._c[:-k]):
            raise NonDivisible(f"{self} is not divisible by q^{-k}")
        return QPolynomial._raw(self._c[-k:])

    def divmod(self, den: "QPolynomial") -> Tuple["QPolynomial", "QPolynomial"]:
        """Integer long division; requires the leading coefficient of ``den``
        to divide every intermediate leading coefficient."""
        den = self._coerce(den)
        if den.is_zero():
            raise DivisionByZero("division by the zero polynomial")
        rem = list(self._c)
        dd = den.degree
        lead = den._c[-1]
        quot = [0] * max(len(rem) - dd, 0)
        for k in range(len(rem) - 1, dd - 1, -1):
            top = rem[k]
            if top == 0:
                continue
            qk, r = divmod(top, lead)
            if r:
                raise NonDivisible(
                    f"leading coefficient {top} not divisible by {lead}"
                )
            quot[k - dd] = qk
            for j, x in enumerate(den._c):
                rem[k - dd + j] -= qk * x
        return QPolynomial(quot), QPolynomial(rem)

    def __call__(self, q):
        """Evaluate at ``q`` (int, Fraction, float, complex or ndarray) by Horner."""
        acc = 0
        for x in reversed(self._c):
            acc = acc * q + x
        return acc

    def evaluate(self, q):
        return self(q)

    def __repr__(self):
        return f"QPolynomial({list(self._c)})"

    def __str__(self):
        return render_qpoly(self)


def render_qpoly(p: QPolynomial) -> str:
    """Canonical text form ``c0 + c1*q + c2*q^2 + ...`` (zero terms omitted)."""
    parts = []
    for k, c in enumerate(p.coeffs):
        if c == 0:
            continue
        if k == 0:
            parts.append(f"{c}")
        elif k == 1:
            parts.append(f"{c}*q")
        else:
            parts.append(f"{c}*q^{k}")
    return " + ".join(parts) if parts else "0"


QONE = QPolynomial(1)
QZERO = QPolynomial()


def qpoly_exact_div(num: QPolynomial, den: QPolynomial) -> QPolynomial:
    quot, rem = QPolynomial._coerce(num).divmod(den)
    if not rem.is_zero():
        raise NonDivisible(f"({num}) / ({den}) leaves remainder {rem}")
    return quot


# --------------------------------------------------------------------------
# sparse Laurent polynomials

Exponent = Tuple[int, ...]
Coefficient = Union[QPolynomial, int]


def _check_exponent(e: Exponent) -> None:
    for x in e:
        if x > EXPONENT_LIMIT or x < -EXPONENT_LIMIT:
            raise OverflowError(f"Laurent exponent {x} exceeds the supported range")


class LaurentPolynomial:
    """Sparse Laurent polynomial in ``nvars`` variables over ``Z[q]``.

    Terms map exponent tuples to nonzero :class:`QPolynomial` coefficients.
    """

    __slots__ = ("_terms", "_nvars")

    def __init__(self, terms: Mapping[Exponent, Coefficient] = None, nvars: int = 3):
        if not 1 <= nvars <= MAX_VARIABLES:
            raise ValueError(f"between 1 and {MAX_VARIABLES} variables supported")
        self._nvars = nvars
        clean: Dict[Exponent, QPolynomial] = {}
        for e, c in (terms or {}).items():
            e = tuple(int(x) for x in e)
            if len(e) != nvars:
                raise ValueError(f"exponent {e} does not have {nvars} components")
            _check_exponent(e)
            c = QPolynomial._coerce(c)
            if c is NotImplemented:
                raise TypeError("Laurent coefficients must be QPolynomial or int")
            if c:
                clean[e] = c if e not in clean else clean[e] + c
                if not clean[e]:
                    del clean[e]
        self._terms = clean

    @classmethod
    def _raw(cls, terms: Dict[Exponent, QPolynomial], nvars: int):
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._nvars = nvars
        return obj

    @classmethod
    def constant(cls, c: Coefficient = 1, nvars: int = 3) -> "LaurentPolynomial":
        return cls({(0,) * nvars: c}, nvars)

    @classmethod
    def monomial(cls, exps: Exponent, c: Coefficient = 1) -> "LaurentPolynomial":
        return cls({tuple(exps): c}, len(exps))

    @classmethod
    def ratio(cls, i: int, j: int, nvars: int = 3) -> "LaurentPolynomial":
        """The monomial ``y_i / y_j`` (0-based indices)."""
        e = [0] * nvars
        e[i] += 1
        e[j] -= 1
        return cls.monomial(tuple(e))

    @property
    def nvars(self) -> int:
        return self._nvars

    @property
    def terms(self) -> Mapping[Exponent, QPolynomial]:
        return dict(self._terms)

    def __len__(self):
        return len(self._terms)

    def __iter__(self):
        return iter(sorted(self._terms.items()))

    def coefficient(self, e: Exponent) -> QPolynomial:
        return self._terms.get(tuple(e), QZERO)

    def is_zero(self) -> bool:
        return not self._terms

    def _coerce(self, other) -> "LaurentPolynomial":
        if isinstance(other, LaurentPolynomial):
            if other._nvars != self._nvars:
                raise ValueError("Laurent polynomials in different variable counts")
            return other
        if isinstance(other, (QPolynomial, Integral)):
            return LaurentPolynomial.constant(other, self._nvars)
        return NotImplemented

    def __eq__(self, other):
        other = self._coerce(other) if not isinstance(other, LaurentPolynomial) else other
        if other is NotImplemented:
            return NotImplemented
        return self._nvars == other._nvars and self._terms == other._terms

    def __hash__(self):
        return hash((self._nvars, frozenset(self._terms.items())))

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        acc = dict(self._terms)
        for e, c in other._terms.items():
            s = acc[e] + c if e in acc else c
            if s:
                acc[e] = s
            else:
                acc.pop(e, None)
        return LaurentPolynomial._raw(acc, self._nvars)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPolynomial._raw({e: -c for e, c in self._terms.items()}, self._nvars)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return laurent_mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a LaurentPolynomial")
        result = LaurentPolynomial.constant(1, self._nvars)
        for _ in range(n):
            result = result * self
        return result

    def degree_sums(self) -> set:
        return {sum(e) for e in self._terms}

    def is_homogeneous_degree_zero(self) -> bool:
        return all(sum(e) == 0 for e in self._terms)

    def dehomogenize(self) -> "LaurentPolynomial":
        """Substitute ``y_last = 1``; only lossless on degree-0 homogeneous input."""
        if not self.is_homogeneous_degree_zero():
            raise ValueError("dehomogenize needs a degree-0 homogeneous polynomial")
        return LaurentPolynomial._raw(
            {e[:-1]: c for e, c in self._terms.items()}, self._nvars - 1
        )

    def homogenize(self) -> "LaurentPolynomial":
        """Inverse of :meth:`dehomogenize`: restore the last exponent as ``-sum``."""
        if self._nvars >= MAX_VARIABLES:
            raise ValueError("already at the maximum variable count")
        return LaurentPolynomial._raw(
            {e + (-sum(e),): c for e, c in self._terms.items()}, self._nvars + 1
        )

    def scale(self, c: Coefficient) -> "LaurentPolynomial":
        c = QPolynomial._coerce(c)
        if not c:
            return LaurentPolynomial._raw({}, self._nvars)
        return LaurentPolynomial._raw(
            {e: v * c for e, v in self._terms.items()}, self._nvars
        )

    def at_q(self, q) -> Dict[Exponent, object]:
        """Specialise every coefficient at a numeric ``q``."""
        return {e: c(q) for e, c in self._terms.items()}

    def __repr__(self):
        body = ", ".join(f"{e}: {c.coeffs!r}" for e, c in self)
        return f"LaurentPolynomial({{{body}}}, nvars={self._nvars})"


def laurent_mul(f: LaurentPolynomial, g: LaurentPolynomial) -> LaurentPolynomial:
    """Exact product. Coefficients are accumulated as integer lists so the
    inner loop stays allocation-light."""
    if f.nvars != g.nvars:
        raise ValueError("Laurent polynomials in different variable counts")
    acc: Dict[Exponent, list] = {}
    n = f.nvars
    # Iterate in sorted order so the accumulation is scheduling-independent.
    gt = sorted(g._terms.items())
    for ef, cf in sorted(f._terms.items()):
        a = cf.coeffs
        for eg, cg in gt:
            if n == 1:
                e = (ef[0] + eg[0],)
            elif n == 2:
                e = (ef[0] + eg[0], ef[1] + eg[1])
            else:
                e = (ef[0] + eg[0], ef[1] + eg[1], ef[2] + eg[2])
            prod = _conv(a, cg.coeffs)
            slot = acc.get(e)
            if slot is None:
                acc[e] = prod
            else:
                _add_into(slot, prod)
    terms = {}
    for e, c in acc.items():
        _check_exponent(e)
        t = _trim(c)
        if t:
            terms[e] = QPolynomial._raw(t)
    return LaurentPolynomial._raw(terms, n)


def laurent_ct(f: LaurentPolynomial) -> QPolynomial:
    """Constant term: the coefficient at the zero exponent vector."""
    return f.coefficient((0,) * f.nvars)


def laurent_product(factors: Iterable[LaurentPolynomial]) -> LaurentPolynomial:
    """Product of degree-0 homogeneous 3-variable factors.

    Each factor is dehomogenised (``y3 = 1``) before multiplying, which
    loses nothing because every factor has total degree zero; the result is
    re-homogenised so callers keep the 3-variable picture.
    """
    factors = list(factors)
    if not factors:
        return LaurentPolynomial.constant(1)
    reduced = []
    for f in factors:
        if f.nvars < 2 or not f.is_homogeneous_degree_zero():
            reduced = None
            break
        reduced.append(f.dehomogenize())
    if reduced is None:
        out = factors[0]
        for f in factors[1:]:
            out = laurent_mul(out, f)
        return out
    out = reduced[0]
    for f in reduced[1:]:
        out = laurent_mul(out, f)
    return out.homogenize()
