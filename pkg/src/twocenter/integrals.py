"""Lined-up two-center overlap and nuclear-attraction integrals over STOs.

Orbitals are ``chi = N_n(zeta) r**(n-1) exp(-zeta r) P_{l lam}(cos theta) e^{i lam phi}/sqrt(2 pi)``.
Both local z axes lie on the bond and point at the partner atom, so that
``cos(theta_a) = (1 + mu nu)/(mu + nu)`` and ``cos(theta_b) = (1 - mu nu)/(mu - nu)``.
In ellipsoidal coordinates ``dV = (R/2)**3 (mu+nu)(mu-nu) dmu dnu dphi``; the
Legendre product expansion turns every integral into a finite double sum of
``A_i(p) B_j(q)`` with ``p = R(zeta_a + zeta_b)/2`` and ``q = R(zeta_a - zeta_b)/2``.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .auxiliary import aux_a, aux_b
from .combinatorics import gen_binomial
from .errors import DomainError
from .product_expansion import build_expansion

__all__ = [
    "OVERLAP",
    "NA_CENTER_A",
    "NA_CENTER_B",
    "KINDS",
    "StoParams",
    "IntegralSpec",
    "IntegralResult",
    "UnsupportedOnAnalyticPath",
    "sto_norm",
    "kernel_matrix",
    "assemble_kernel",
    "overlap",
    "nuclear_attraction",
    "compute",
]

OVERLAP = "overlap"
NA_CENTER_A = "nuclear_attraction_center_a"
NA_CENTER_B = "nuclear_attraction_center_b"
KINDS = (OVERLAP, NA_CENTER_A, NA_CENTER_B)


class UnsupportedOnAnalyticPath(DomainError):
    pass


def _is_integer(x) -> bool:
    return float(x).is_integer()


@dataclass(frozen=True)
class StoParams:
    n: float
    l: int
    lam: int
    zeta: float

    def __post_init__(self):
        if not self.zeta > 0:
            raise DomainError(f"zeta must be > 0, got {self.zeta}")
        if self.l < 0 or self.lam < 0:
            raise DomainError("l and lambda must be non-negative")
        if self.lam > self.l:
            raise DomainError(f"lambda={self.lam} exceeds l={self.l}")
        if not self.n > 0.5:
            raise DomainError(f"n must be > 1/2, got {self.n}")
        if _is_integer(self.n) and self.l > self.n - 1:
            raise DomainError(f"l={self.l} exceeds n-1 for n={self.n}")

    @property
    def integer_n(self) -> bool:
        return _is_integer(self.n)


@dataclass(frozen=True)
class IntegralSpec:
    a: StoParams
    b: StoParams
    R: float
    kind: str = OVERLAP

    def __post_init__(self):
        if not self.R > 0:
            raise DomainError(f"R must be > 0, got {self.R}")
        if self.a.lam != self.b.lam:
            raise DomainError(
                f"lined-up integrals vanish unless lambda_a == lambda_b ({self.a.lam} != {self.b.lam})"
            )
        if self.kind not in KINDS:
            raise DomainError(f"unknown integral kind {self.kind!r}")


@dataclass(frozen=True)
class IntegralResult:
    value: float
    method: str
    est_error: float = 0.0


def sto_norm(n: float, zeta: float) -> float:
    """Radial normalization ``(2 zeta)**(n + 1/2) / sqrt(Gamma(2n + 1))``."""
    if not n > 0.5 or not zeta > 0:
        raise DomainError(f"sto_norm needs n > 1/2 and zeta > 0 (n={n}, zeta={zeta})")
    if _is_integer(n):
        g = math.factorial(2 * int(n))
    else:
        g = math.gamma(2 * n + 1)
    if math.isfinite(g) and g < 1e300:
        return (2 * zeta) ** (n + 0.5) / math.sqrt(g)
    return math.exp((n + 0.5) * math.log(2 * zeta) - 0.5 * math.lgamma(2 * n + 1))


@lru_cache(maxsize=None)
def kernel_matrix(n_a: int, l_a: int, n_b: int, l_b: int, lam: int, delta_a: int = 0, delta_b: int = 0):
    """Coefficients ``M[i, j]`` with ``Q = sum_ij M[i, j] A_i(p) B_j(q)``.

    Every product-expansion term contributes
    ``a * F_m(N_a, N_b)`` to ``M[N_a + N_b - m + s, m + s]`` where
    ``N_a = n_a - l_a + 2(k+k'+lam) - 2u - delta_a`` and ``N_b = n_b - l_b - delta_b``.
    Contributions are merged exactly per radicand and rounded once.
    """
    if delta_a + delta_b > 1 or min(delta_a, delta_b) < 0:
        raise DomainError("at most one of delta_a, delta_b may be 1")
    if n_a < l_a + 1 or n_b < l_b + 1:
        raise DomainError("integer path needs n > l")
    table = build_expansion(l_a, lam, l_b)
    Nb = n_b - l_b - delta_b
    acc: dict = defaultdict(lambda: defaultdict(Fraction))
    size = 0
    for t in table.terms:
        Na = n_a - l_a + 2 * (t.k + t.kp + lam) - 2 * t.u - delta_a
        assert Na >= 0 and Nb >= 0, "negative radial power"
        assert Na == n_a - delta_a - t.pow_plus
        rad = t.coeff.radicand
        for m in range(Na + Nb + 1):
            f = gen_binomial(m, Na, Nb)
            if f:
                acc[rad][(Na + Nb - m + t.s, m + t.s)] += t.coeff.rat * f
        size = max(size, Na + Nb + t.s + 1)
    mat = np.zeros((size, size))
    cells: dict = defaultdict(list)
    for rad, entries in acc.items():
        root = math.sqrt(float(rad))
        for ij, c in entries.items():
            if c:
                cells[ij].append(float(c) * root)
    for (i, j), parts in cells.items():
        mat[i, j] = math.fsum(parts)
    mat.setflags(write=False)
    return mat


def _contract(mat: np.ndarray, a: np.ndarray, b: np.ndarray) -> float:
    rows, cols = np.nonzero(mat)
    return math.fsum(mat[rows, cols] * a[rows] * b[cols])


def assemble_kernel(n_a, l_a, n_b, l_b, lam, p, q, delta_a=0, delta_b=0) -> float:
    """Reduced integral ``Q``; the caller supplies norms and powers of R/2."""
    mat = kernel_matrix(int(n_a), l_a, int(n_b), l_b, lam, delta_a, delta_b)
    size = mat.shape[0]
    return _contract(mat, aux_a(size - 1, p), aux_b(size - 1, q))


def _check_analytic(spec: IntegralSpec) -> None:
    for orb in (spec.a, spec.b):
        if not orb.integer_n:
            raise UnsupportedOnAnalyticPath(
                f"noninteger n={orb.n} has no analytic expansion; use the quadrature oracle"
            )


def _evaluate(spec: IntegralSpec, delta_a: int, delta_b: int) -> float:
    a, b = spec.a, spec.b
    na, nb = int(a.n), int(b.n)
    p = spec.R * (a.zeta + b.zeta) / 2
    q = spec.R * (a.zeta - b.zeta) / 2
    kern = assemble_kernel(na, a.l, nb, b.l, a.lam, p, q, delta_a, delta_b)
    power = na + nb + 1 - delta_a - delta_b
    return sto_norm(na, a.zeta) * sto_norm(nb, b.zeta) * (spec.R / 2) ** power * kern


def overlap(spec: IntegralSpec) -> IntegralResult:
    _check_analytic(spec)
    return IntegralResult(_evaluate(spec, 0, 0), "analytic", 0.0)


def nuclear_attraction(spec: IntegralSpec, center: str) -> IntegralResult:
    """``<chi_a | 1/r_c | chi_b>`` with ``c`` in ``{"a", "b"}``."""
    _check_analytic(spec)
    if center == "a":
        return IntegralResult(_evaluate(spec, 1, 0), "analytic", 0.0)
    if center == "b":
        return IntegralResult(_evaluate(spec, 0, 1), "analytic", 0.0)
    raise DomainError(f"center must be 'a' or 'b', got {center!r}")


def compute(spec: IntegralSpec) -> IntegralResult:
    if spec.kind == OVERLAP:
        return overlap(spec)
    return nuclear_attraction(spec, "a" if spec.kind == NA_CENTER_A else "b")
