"""Digit loss of expansion coefficients computed in plain binary64.

The float route (:func:`~twocenter.product_expansion.float_coefficient`)
forms ``((C_f * C'_f) * G1) * G2`` with ``G1 = (-1)**u C(K, u)`` and
``G2 = F_s(N, N')``.  For the orders handled here both integer factors are
exactly representable, so the only errors are the rounding in ``C_f C'_f``
(measured against a 40-digit reference) and the two final products, which
are recovered exactly with Dekker's two-product.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import mpmath
import numpy as np

from .combinatorics import e_floor
from .legendre import legendre_coeff
from .product_expansion import _fbin, _fgen, _float_legendre_coeff

__all__ = ["UNIT_ROUNDOFF", "PairError", "coefficient_errors", "digit_loss_report"]

UNIT_ROUNDOFF = 2.0 ** -53
_SPLIT = 134217729.0  # 2**27 + 1


def _two_product(a: np.ndarray, b: np.ndarray):
    """``p = fl(a*b)`` and the exact remainder ``e = a*b - p``."""
    p = a * b
    t = _SPLIT * a
    ah = t - (t - a)
    al = a - ah
    t = _SPLIT * b
    bh = t - (t - b)
    bl = b - bh
    e = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    return p, e


@lru_cache(maxsize=None)
def _fgen_row(N: int, Np: int) -> np.ndarray:
    return np.array([_fgen(s, N, Np) for s in range(N + Np + 1)])


@lru_cache(maxsize=None)
def _exact_c(l: int, m: int, k: int):
    c = legendre_coeff(l, m, k)
    with mpmath.workdps(40):
        return mpmath.mpf(c.rat.numerator) / c.rat.denominator * mpmath.sqrt(
            mpmath.mpf(c.radicand.numerator) / c.radicand.denominator
        )


@dataclass(frozen=True)
class PairError:
    l: int
    lam: int
    lp: int
    terms: int
    max_rel_err: float


def coefficient_errors(l: int, lam: int, lp: int) -> PairError:
    """Largest relative error of the binary64 coefficients of one table."""
    worst = 0.0
    count = 0
    for k in range(e_floor(l - lam) + 1):
        ca = _float_legendre_coeff(l, lam, k)
        for kp in range(e_floor(lp - lam) + 1):
            cb = _float_legendre_coeff(lp, lam, kp)
            pf = ca * cb
            with mpmath.workdps(40):
                ref = _exact_c(l, lam, k) * _exact_c(lp, lam, kp)
                e_pair = float((mpmath.mpf(pf) - ref) / ref)
            K = k + kp + lam
            Np = lp - 2 * kp - lam
            g1_parts, g2_parts = [], []
            for u in range(K + 1):
                row = _fgen_row(l - 2 * k - lam + 2 * u, Np)
                g1_parts.append(np.full(row.size, (-1.0) ** u * _fbin(K, u)))
                g2_parts.append(row)
            g1 = np.concatenate(g1_parts)
            g2 = np.concatenate(g2_parts)
            count += g1.size
            nz = g2 != 0.0
            if not nz.any():
                continue
            g1, g2 = g1[nz], g2[nz]
            y1, e1 = _two_product(np.full(g1.size, pf), g1)
            _, e2 = _two_product(y1, g2)
            rel = e_pair - (e1 * g2 + e2) / (pf * g1 * g2)
            worst = max(worst, float(np.max(np.abs(rel))))
    return PairError(l, lam, lp, count, worst)


def digit_loss_report(lmax: int = 15) -> list[dict]:
    """One row per ``L = max(l, l')``: worst relative error and lost decimal digits."""
    rows = []
    for L in range(lmax + 1):
        worst, terms = 0.0, 0
        for l in range(L + 1):
            for lp in range(L + 1):
                if max(l, lp) != L:
                    continue
                for lam in range(min(l, lp) + 1):
                    err = coefficient_errors(l, lam, lp)
                    worst = max(worst, err.max_rel_err)
                    terms += err.terms
        lost = math.log10(worst / UNIT_ROUNDOFF) if worst > UNIT_ROUNDOFF else 0.0
        rows.append({"L": L, "terms": terms, "max_rel_err": worst, "digits_lost": round(lost, 3)})
    return rows
