"""Exact integer binomials and the generalized binomial coefficients.

Everything here is integer arithmetic; no floating point.  Pascal rows are
grown lazily and shared through a module-level table.
"""

from __future__ import annotations

import threading
from functools import lru_cache

__all__ = ["BinomialTable", "e_floor", "binomial", "gen_binomial", "TABLE"]


class BinomialTable:
    """Triangular table of C(n, k) built with the Pascal recurrence.

    Rows already built are never modified, so readers can index ``rows``
    without locking; only growth is serialized.
    """

    def __init__(self, max_n: int = 0):
        self._lock = threading.Lock()
        self.rows: list[tuple[int, ...]] = [(1,)]
        self.grow(max_n)

    @property
    def max_n(self) -> int:
        return len(self.rows) - 1

    def grow(self, n: int) -> None:
        if n <= self.max_n:
            return
        with self._lock:
            rows = self.rows
            while len(rows) <= n:
                prev = rows[-1]
                row = [1]
                row.extend(prev[j - 1] + prev[j] for j in range(1, len(prev)))
                row.append(1)
                rows.append(tuple(row))

    def __call__(self, n: int, k: int) -> int:
        if n < 0 or k < 0 or k > n:
            return 0
        if n > self.max_n:
            self.grow(n)
        return self.rows[n][k]


TABLE = BinomialTable(64)


def e_floor(n: int) -> int:
    """Return E(n/2) = n/2 - (1 - (-1)**n)/4, i.e. floor(n/2) for n >= 0."""
    if n < 0:
        raise ValueError(f"e_floor needs n >= 0, got {n}")
    return (2 * n - (1 - (-1) ** n)) // 4


def binomial(n: int, k: int) -> int:
    """C(n, k) for 0 <= k <= n, zero otherwise."""
    return TABLE(n, k)


@lru_cache(maxsize=None)
def gen_binomial(m: int, N: int, Np: int) -> int:
    """Coefficient F_m(N, N') of mu**(N+N'-m) * nu**m in (mu+nu)**N (mu-nu)**N'.

    ``gen_binomial(m, N, 0) == binomial(N, m)``.
    """
    if m < 0 or m > N + Np:
        return 0
    lo = max(0, m - N)
    hi = min(m, Np)
    total = 0
    for j in range(lo, hi + 1):
        term = TABLE(N, m - j) * TABLE(Np, j)
        total += -term if j & 1 else term
    return total
