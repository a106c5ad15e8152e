"""Two-center product of normalized Legendre functions in ellipsoidal coordinates.

With ``cos(theta_a) = (1 + mu nu)/(mu + nu)`` and ``cos(theta_b) = (1 - mu nu)/(mu - nu)``
the product ``P_{l lam}(cos theta_a) * P_{l' lam}(cos theta_b)`` is a finite sum

    sum_{k, k', u, s} a * (mu nu)**s / ((mu + nu)**(l - 2(k+k'+lam) + 2u) * (mu - nu)**l')

with ``a = C^k_{l lam} C^{k'}_{l' lam} (-1)**u C(k+k'+lam, u) F_s(l-2k-lam+2u, l'-2k'-lam)``.
Coefficients are kept exact (:class:`SqrtRationalCoeff`).
"""

from __future__ import annotations

import math
import random
from operator import mul
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .combinatorics import binomial, e_floor, gen_binomial
from .errors import DomainError
from .legendre import SqrtRationalCoeff, legendre_coeff, legendre_eval

__all__ = [
    "EllipsoidalPoint",
    "ProductTerm",
    "ProductExpansionTable",
    "build_expansion",
    "eval_expansion",
    "eval_direct",
    "verify_identity_7",
    "verify_identity_9",
    "term_count",
    "float_coefficient",
]


@dataclass(frozen=True)
class EllipsoidalPoint:
    mu: float
    nu: float

    def __post_init__(self):
        if not self.mu > 1.0:
            raise DomainError(f"mu must be > 1, got {self.mu}")
        if not -1.0 < self.nu < 1.0:
            raise DomainError(f"nu must lie in (-1, 1), got {self.nu}")


@dataclass(frozen=True)
class ProductTerm:
    k: int
    kp: int
    u: int
    s: int
    coeff: SqrtRationalCoeff
    pow_plus: int
    pow_minus: int


@dataclass(frozen=True)
class ProductExpansionTable:
    l: int
    lam: int
    lp: int
    terms: tuple[ProductTerm, ...]
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __len__(self):
        return len(self.terms)

    @property
    def float_coeffs(self) -> list[float]:
        if "float" not in self._cache:
            self._cache["float"] = [float(t.coeff) for t in self.terms]
        return self._cache["float"]

    @property
    def integer_groups(self):
        """Terms regrouped for exact evaluation.

        Returns ``(scale, pp_min, pp_max, s_max, groups)`` where ``groups``
        maps each radicand to ``{pow_plus: [c_0, c_1, ...]}``, ``c_s`` being
        the summed integer coefficients of ``(mu nu)**s`` with
        ``rat = c_s / scale``.
        """
        if "int" not in self._cache:
            scale = 1
            for t in self.terms:
                scale = math.lcm(scale, t.coeff.rat.denominator)
            groups: dict = defaultdict(lambda: defaultdict(lambda: defaultdict(int)))
            for t in self.terms:
                c = t.coeff.rat * scale
                groups[t.coeff.radicand][t.pow_plus][t.s] += c.numerator
            pps = [t.pow_plus for t in self.terms]
            s_max = max(t.s for t in self.terms)
            dense = {
                rad: {
                    pp: [by_s.get(s, 0) for s in range(max(by_s) + 1)]
                    for pp, by_s in by_pp.items()
                }
                for rad, by_pp in groups.items()
            }
            self._cache["int"] = (scale, min(pps), max(pps), s_max, dense)
        return self._cache["int"]


def term_count(l: int, lam: int, lp: int) -> int:
    """Number of (k, k', u, s) index tuples in the expansion."""
    total = 0
    for k in range(e_floor(l - lam) + 1):
        for kp in range(e_floor(lp - lam) + 1):
            K = k + kp + lam
            for u in range(K + 1):
                total += (l + lp) - 2 * K + 2 * u + 1
    return total


@lru_cache(maxsize=None)
def build_expansion(l: int, lam: int, lp: int) -> ProductExpansionTable:
    """Enumerate every expansion term, ordered lexicographically in (k, k', u, s)."""
    if min(l, lam, lp) < 0:
        raise DomainError("quantum numbers must be non-negative")
    if lam > min(l, lp):
        raise DomainError(f"lambda={lam} exceeds min(l, l')={min(l, lp)}")
    terms = []
    for k in range(e_floor(l - lam) + 1):
        ca = legendre_coeff(l, lam, k)
        for kp in range(e_floor(lp - lam) + 1):
            cab = ca * legendre_coeff(lp, lam, kp)
            K = k + kp + lam
            for u in range(K + 1):
                cu = cab * (binomial(K, u) * (-1) ** u)
                N = l - 2 * k - lam + 2 * u
                Np = lp - 2 * kp - lam
                pow_plus = l - 2 * K + 2 * u
                for s in range(N + Np + 1):
                    terms.append(
                        ProductTerm(k, kp, u, s, cu * gen_binomial(s, N, Np), pow_plus, lp)
                    )
    return ProductExpansionTable(l, lam, lp, tuple(terms))


def _eval_exact(table: ProductExpansionTable, mu: float, nu: float) -> float:
    # mu = M/D, nu = V/D exactly, D a power of two.
    mf, nf = Fraction(mu), Fraction(nu)
    D = max(mf.denominator, nf.denominator)
    M = mf.numerator * (D // mf.denominator)
    V = nf.numerator * (D // nf.denominator)
    P, Q = M + V, M - V
    scale, pp_min, pp_max, s_max, groups = table.integer_groups
    pm = table.lp

    # term = (MV)^s D^(2(smax-s)) * P^(ppmax-pp) D^(pp-ppmin)  /  common
    MV = M * V
    D2 = D * D
    w = [1] * (s_max + 1)
    for s in range(1, s_max + 1):
        w[s] = w[s - 1] * MV
    dpow = 1
    for s in range(s_max, -1, -1):
        w[s] *= dpow
        dpow *= D2
    span = pp_max - pp_min
    p_pow = [1] * (span + 1)
    d_pow = [1] * (span + 1)
    for j in range(1, span + 1):
        p_pow[j] = p_pow[j - 1] * P
        d_pow[j] = d_pow[j - 1] * D
    # common = scale * P^ppmax * Q^pm * D^(2 smax - ppmin - pm)
    exp_d = 2 * s_max - pp_min - pm
    den = scale * Q ** pm
    if pp_max >= 0:
        den *= P ** pp_max
    num_fix = 1
    if pp_max < 0:
        num_fix *= P ** (-pp_max)
    if exp_d >= 0:
        den *= D ** exp_d
    else:
        num_fix *= D ** (-exp_d)

    parts = []
    for rad, by_pp in groups.items():
        acc = 0
        for pp, cs in by_pp.items():
            inner = sum(map(mul, cs, w))
            acc += inner * p_pow[pp_max - pp] * d_pow[pp - pp_min]
        if acc:
            root = math.sqrt(rad.numerator) if rad.denominator == 1 else math.sqrt(float(rad))
            parts.append(float(Fraction(acc * num_fix, den)) * root)
    return math.fsum(parts)


def _eval_float(table: ProductExpansionTable, mu: float, nu: float) -> float:
    mv, plus, minus = mu * nu, mu + nu, mu - nu
    parts = [
        c * mv ** t.s / (plus ** t.pow_plus * minus ** t.pow_minus)
        for t, c in zip(table.terms, table.float_coeffs)
    ]
    return math.fsum(parts)


def eval_expansion(table: ProductExpansionTable, pt: EllipsoidalPoint, exact: bool = True) -> float:
    """Sum the expansion at ``pt``.

    With ``exact=True`` (default) the sum over terms sharing a radicand is
    accumulated exactly in integers, since ``mu`` and ``nu`` are dyadic
    rationals; only the final per-radicand totals are rounded.  The terms
    themselves grow like ``(mu - nu)**-l'`` while the sum stays O(1), so a
    plain floating-point sum loses digits near ``mu = nu``.  ``exact=False``
    gives that plain compensated float sum.
    """
    if exact:
        return _eval_exact(table, pt.mu, pt.nu)
    return _eval_float(table, pt.mu, pt.nu)


def _cos_sin(mu: float, nu: float) -> tuple[float, float, float, float]:
    m, v = Fraction(mu), Fraction(nu)
    plus, minus = m + v, m - v
    root = math.sqrt(float((m * m - 1) * (1 - v * v)))
    return (
        float((1 + m * v) / plus),
        root / float(plus),
        float((1 - m * v) / minus),
        root / float(minus),
    )


def eval_direct(l: int, lam: int, lp: int, pt: EllipsoidalPoint) -> float:
    """Plain product of the two closed-form Legendre functions at ``pt``."""
    if lam > min(l, lp):
        raise DomainError(f"lambda={lam} exceeds min(l, l')={min(l, lp)}")
    ca, sa, cb, sb = _cos_sin(pt.mu, pt.nu)
    ca = min(1.0, max(-1.0, ca))
    cb = min(1.0, max(-1.0, cb))
    return legendre_eval(l, lam, ca, sin=sa) * legendre_eval(lp, lam, cb, sin=sb)


# --- derivation identities, checked exactly -------------------------------

def _poly_mul(a: dict, b: dict) -> dict:
    out: dict = defaultdict(int)
    for ea, ca in a.items():
        for eb, cb in b.items():
            out[(ea[0] + eb[0], ea[1] + eb[1])] += ca * cb
    return {e: c for e, c in out.items() if c}


def _poly_pow(a: dict, n: int) -> dict:
    out = {(0, 0): 1}
    for _ in range(n):
        out = _poly_mul(out, a)
    return out


def _poly_add(a: dict, b: dict, sign: int = 1) -> dict:
    out = dict(a)
    for e, c in b.items():
        out[e] = out.get(e, 0) + sign * c
    return {e: c for e, c in out.items() if c}


# polynomials in (mu, nu) as {(deg_mu, deg_nu): coeff}
_MU_PLUS_NU = {(1, 0): 1, (0, 1): 1}
_ONE_PLUS_MUNU = {(0, 0): 1, (1, 1): 1}


def verify_identity_7(samples: int = 32, seed: int = 0) -> bool:
    """Check ``(mu^2-1)(1-nu^2) == (mu+nu)^2 - (1+mu nu)^2`` exactly.

    Compares polynomial coefficients and evaluates both sides at ``samples``
    random rational points.
    """
    lhs = _poly_mul({(2, 0): 1, (0, 0): -1}, {(0, 0): 1, (0, 2): -1})
    rhs = _poly_add(_poly_pow(_MU_PLUS_NU, 2), _poly_pow(_ONE_PLUS_MUNU, 2), -1)
    if lhs != rhs:
        return False
    rng = random.Random(seed)
    for _ in range(samples):
        mu = Fraction(rng.randint(-10**6, 10**6), rng.randint(1, 10**6))
        nu = Fraction(rng.randint(-10**6, 10**6), rng.randint(1, 10**6))
        if (mu * mu - 1) * (1 - nu * nu) != (mu + nu) ** 2 - (1 + mu * nu) ** 2:
            return False
    return True


def verify_identity_9(power: int) -> bool:
    """Binomial expansion of ``[(mu+nu)^2 - (1+mu nu)^2]**power`` term by term.

    ``sum_u (-1)^u C(power, u) (mu+nu)^(2 power - 2u) (1+mu nu)^(2u)`` must equal
    the directly expanded power of ``(mu^2-1)(1-nu^2)``.
    """
    base = _poly_mul({(2, 0): 1, (0, 0): -1}, {(0, 0): 1, (0, 2): -1})
    direct = _poly_pow(base, power)
    summed: dict = {}
    for u in range(power + 1):
        term = _poly_mul(_poly_pow(_MU_PLUS_NU, 2 * power - 2 * u), _poly_pow(_ONE_PLUS_MUNU, 2 * u))
        c = (-1) ** u * binomial(power, u)
        summed = _poly_add(summed, {e: c * v for e, v in term.items()})
    return summed == direct


# --- binary64 reference path for the stability report ---------------------

@lru_cache(maxsize=None)
def _float_binomial_row(n: int) -> tuple[float, ...]:
    if n == 0:
        return (1.0,)
    prev = _float_binomial_row(n - 1)
    return (1.0,) + tuple(prev[j - 1] + prev[j] for j in range(1, n)) + (1.0,)


def _fbin(n: int, k: int) -> float:
    if k < 0 or k > n:
        return 0.0
    return _float_binomial_row(n)[k]


def _fgen(m: int, N: int, Np: int) -> float:
    total = 0.0
    for j in range(max(0, m - N), min(m, Np) + 1):
        total += (-1.0) ** j * _fbin(N, m - j) * _fbin(Np, j)
    return total


@lru_cache(maxsize=None)
def _float_legendre_coeff(l: int, m: int, k: int) -> float:
    rad = (2 * l + 1) / 2.0
    rad *= _fbin(l + m, l - k) * _fbin(l - k, k + m) * _fbin(l - m, 2 * k) * _fbin(2 * k, k)
    return (-1.0) ** k / 2.0 ** (2 * k + m) * math.sqrt(rad)


def float_coefficient(l: int, lam: int, lp: int, k: int, kp: int, u: int, s: int) -> float:
    """Expansion coefficient computed entirely in binary64 arithmetic."""
    K = k + kp + lam
    c = _float_legendre_coeff(l, lam, k) * _float_legendre_coeff(lp, lam, kp)
    c *= (-1.0) ** u * _fbin(K, u)
    return c * _fgen(s, l - 2 * k - lam + 2 * u, lp - 2 * kp - lam)
