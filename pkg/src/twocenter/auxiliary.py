"""Auxiliary integrals A_n(p) and B_n(q).

    A_n(p) = int_1^inf mu**n exp(-p mu) dmu
    B_n(q) = int_-1^1 nu**n exp(-q nu) dnu

Both are returned as arrays ``[X_0, ..., X_N]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

__all__ = ["AuxiliaryValues", "aux_a", "aux_b", "aux_b_series", "aux_b_recurrence", "auxiliary_values"]

_SERIES_RTOL = 1e-17


def aux_a(N: int, p: float) -> np.ndarray:
    """A_0..A_N by upward recurrence ``A_n = (exp(-p) + n A_{n-1}) / p``.

    Every term is positive, so the recurrence is stable for any ``p > 0``.
    """
    if not p > 0.0:
        raise DomainError(f"A_n(p) diverges for p <= 0 (p={p})")
    ep = math.exp(-p)
    out = np.empty(N + 1)
    a = ep / p
    out[0] = a
    for n in range(1, N + 1):
        a = (ep + n * a) / p
        out[n] = a
    return out


def aux_b_recurrence(N: int, q: float) -> np.ndarray:
    """Upward recurrence from ``B_0 = 2 sinh(q)/q``; unstable for small ``|q|``."""
    if q == 0.0:
        raise DomainError("B_n recurrence is undefined at q = 0")
    eq, emq = math.exp(q), math.exp(-q)
    out = np.empty(N + 1)
    b = 2.0 * math.sinh(q) / q
    out[0] = b
    for n in range(1, N + 1):
        b = ((eq if n % 2 == 0 else -eq) - emq + n * b) / q
        out[n] = b
    return out


def aux_b_series(N: int, q: float) -> np.ndarray:
    """Maclaurin series ``B_n = sum_j (-q)**j / j! * (1 + (-1)**(n+j)) / (n+j+1)``.

    Only ``j`` with the parity of ``n`` contribute, so all retained terms share
    one sign and nothing cancels.
    """
    out = np.empty(N + 1)
    for n in range(N + 1):
        total = 0.0
        term = 1.0  # (-q)**j / j!
        j = 0
        while True:
            if (n + j) % 2 == 0:
                contrib = term * 2.0 / (n + j + 1)
                total += contrib
                if j > abs(q) and abs(contrib) <= _SERIES_RTOL * abs(total):
                    break
                if total == 0.0 and term == 0.0:
                    break
            j += 1
            term *= -q / j
        out[n] = total
    return out


def aux_b(N: int, q: float) -> np.ndarray:
    """B_0..B_N, by recurrence when ``|q| >= N + 10`` and by series otherwise."""
    if abs(q) >= N + 10:
        return aux_b_recurrence(N, q)
    return aux_b_series(N, q)


@dataclass(frozen=True)
class AuxiliaryValues:
    p: float
    q: float
    a: np.ndarray
    b: np.ndarray


def auxiliary_values(N: int, p: float, q: float) -> AuxiliaryValues:
    return AuxiliaryValues(p, q, aux_a(N, p), aux_b(N, q))
