"""Normalized associated Legendre functions.

Two independent routes to the same function:

* :func:`legendre_eval` -- finite binomial closed form in powers of
  ``sin(theta)`` and ``cos(theta)`` with exact coefficients;
* :func:`legendre_oracle` -- the usual stable three-term recurrence in ``l``.

Normalization is ``int_{-1}^{1} P_lm(x)**2 dx = 1`` and there is no
Condon-Shortley phase, so ``P_11(x) = +sqrt(3/4) * sqrt(1 - x**2)``.
Only ``m >= 0`` is supported.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .combinatorics import binomial, e_floor
from .errors import DomainError

__all__ = [
    "SqrtRationalCoeff",
    "LegendreClosedForm",
    "legendre_coeff",
    "legendre_closed_form",
    "legendre_eval",
    "legendre_oracle",
]


def _split_square(q: int) -> tuple[int, int]:
    r = math.isqrt(q)
    if r * r == q:
        return r, 1
    return 1, q


@dataclass(frozen=True, eq=False)
class SqrtRationalCoeff:
    """Exact number ``rat * sqrt(radicand)``.

    ``radicand`` numerator and denominator are each folded into ``rat`` when
    they are perfect squares; no further square-free reduction is done, so
    two equal values may be stored differently.  Equality and hashing go
    through ``(sign, rat**2 * radicand)`` which is canonical.
    """

    rat: Fraction
    radicand: Fraction = Fraction(1)

    def __post_init__(self):
        rat = Fraction(self.rat)
        rad = Fraction(self.radicand)
        if rad < 0:
            raise DomainError(f"negative radicand {rad}")
        if rad == 0 or rat == 0:
            rat, rad = Fraction(0), Fraction(1)
        else:
            rn, qn = _split_square(rad.numerator)
            rd, qd = _split_square(rad.denominator)
            rat = rat * Fraction(rn, rd)
            rad = Fraction(qn, qd)
        object.__setattr__(self, "rat", rat)
        object.__setattr__(self, "radicand", rad)

    @property
    def square(self) -> Fraction:
        return self.rat * self.rat * self.radicand

    @property
    def sign(self) -> int:
        return (self.rat > 0) - (self.rat < 0)

    def __float__(self) -> float:
        rad = self.radicand
        if rad.denominator == 1:
            root = math.sqrt(rad.numerator)
        else:
            root = math.sqrt(float(rad))
        return float(self.rat) * root

    def __mul__(self, other):
        if isinstance(other, SqrtRationalCoeff):
            return SqrtRationalCoeff(self.rat * other.rat, self.radicand * other.radicand)
        if isinstance(other, (int, Fraction)):
            return SqrtRationalCoeff(self.rat * other, self.radicand)
        return NotImplemented

    __rmul__ = __mul__

    def __neg__(self):
        return SqrtRationalCoeff(-self.rat, self.radicand)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = SqrtRationalCoeff(Fraction(other))
        if not isinstance(other, SqrtRationalCoeff):
            return NotImplemented
        return self.sign == other.sign and self.square == other.square

    def __hash__(self):
        return hash((self.sign, self.square))

    def __repr__(self):
        if self.radicand == 1:
            return f"SqrtRationalCoeff({self.rat})"
        return f"SqrtRationalCoeff({self.rat} * sqrt({self.radicand}))"


def _check_lm(l: int, m: int) -> None:
    if l < 0:
        raise DomainError(f"l must be >= 0, got {l}")
    if m < 0:
        raise DomainError(f"negative m is not supported, got {m}")
    if m > l:
        raise DomainError(f"m exceeds l (l={l}, m={m})")


@lru_cache(maxsize=None)
def legendre_coeff(l: int, m: int, k: int) -> SqrtRationalCoeff:
    """Coefficient of ``sin**(2k+m) * cos**(l-2k-m)`` in P_lm(cos theta).

    ``(-1)**k / 2**(2k+m) * sqrt((2l+1)/2 * C(l+m, l-k) C(l-k, k+m) C(l-m, 2k) C(2k, k))``
    """
    _check_lm(l, m)
    if k < 0 or k > e_floor(l - m):
        raise DomainError(f"k={k} outside [0, {e_floor(l - m)}] for l={l}, m={m}")
    radicand = (
        Fraction(2 * l + 1, 2)
        * binomial(l + m, l - k)
        * binomial(l - k, k + m)
        * binomial(l - m, 2 * k)
        * binomial(2 * k, k)
    )
    rat = Fraction(-1 if k & 1 else 1, 2 ** (2 * k + m))
    return SqrtRationalCoeff(rat, radicand)


@dataclass(frozen=True)
class LegendreClosedForm:
    l: int
    m: int
    terms: tuple[tuple[int, SqrtRationalCoeff], ...]

    def __post_init__(self):
        _check_lm(self.l, self.m)

    @property
    def float_terms(self) -> tuple[tuple[int, float], ...]:
        return _float_terms(self.l, self.m)


@lru_cache(maxsize=None)
def legendre_closed_form(l: int, m: int) -> LegendreClosedForm:
    _check_lm(l, m)
    terms = tuple((k, legendre_coeff(l, m, k)) for k in range(e_floor(l - m) + 1))
    return LegendreClosedForm(l, m, terms)


@lru_cache(maxsize=None)
def _float_terms(l, m):
    return tuple((k, float(c)) for k, c in legendre_closed_form(l, m).terms)


def _closed_form_cs(l: int, m: int, c: float, s: float) -> float:
    parts = [coef * s ** (2 * k + m) * c ** (l - 2 * k - m) for k, coef in _float_terms(l, m)]
    return math.fsum(parts)


def legendre_eval(l: int, m: int, x: float, sin: float | None = None) -> float:
    """Evaluate P_lm(x) from the binomial closed form.

    Parameters
    ----------
    l, m : int
        Degree and order, ``0 <= m <= l``.
    x : float
        ``cos(theta)`` in [-1, 1].
    sin : float, optional
        ``sin(theta)`` when the caller has a more accurate value than
        ``sqrt(1 - x**2)``; must be non-negative.
    """
    _check_lm(l, m)
    if not -1.0 <= x <= 1.0:
        raise DomainError(f"|x| > 1: {x}")
    if sin is None:
        sin = math.sqrt((1.0 - x) * (1.0 + x))
    return _closed_form_cs(l, m, x, sin)


def legendre_oracle(l: int, m: int, x, sin=None):
    """P_lm(x) by the normalized three-term recurrence; accepts arrays.

    Starts from ``P_mm = sqrt((2m+1)/(2m)) * s * P_{m-1,m-1}`` with
    ``P_00 = sqrt(1/2)`` and steps upward in ``l``.
    """
    _check_lm(l, m)
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > 1.0):
        raise DomainError("|x| > 1")
    s = np.sqrt((1.0 - x) * (1.0 + x)) if sin is None else np.asarray(sin, dtype=float)

    pmm = np.full_like(x, math.sqrt(0.5))
    for j in range(1, m + 1):
        pmm = math.sqrt((2 * j + 1) / (2 * j)) * s * pmm
    if l == m:
        return pmm if pmm.ndim else float(pmm)
    p_prev, p_cur = pmm, math.sqrt(2 * m + 3) * x * pmm
    for j in range(m + 2, l + 1):
        a = math.sqrt((4 * j * j - 1) / (j * j - m * m))
        b = math.sqrt(((j - 1) ** 2 - m * m) / (4 * (j - 1) ** 2 - 1))
        p_prev, p_cur = p_cur, a * (x * p_cur - b * p_prev)
    return p_cur if p_cur.ndim else float(p_cur)
