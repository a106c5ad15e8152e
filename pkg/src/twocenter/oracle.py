"""Reference values by direct numerical quadrature.

Two-center integrals use a tensor Gauss-Legendre rule in ellipsoidal
coordinates: ``mu`` on ``[1, mu_max]`` split into panels that shrink
geometrically toward ``mu = 1``, ``nu`` on ``[-1, 1]`` split into panels that
shrink toward both endpoints.  The angular factors come from the recurrence
evaluator, not the closed form used on the analytic path.  Nodes are carried
as ``t = mu - 1``, ``1 + nu`` and ``1 - nu`` so that ``mu -/+ nu`` and
``1 -/+ mu nu`` keep full relative accuracy near the foci.

Noninteger principal quantum numbers are accepted everywhere here.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import mpmath
import numpy as np

from .errors import ConvergenceError, DomainError
from .integrals import NA_CENTER_A, NA_CENTER_B, IntegralResult, IntegralSpec, StoParams, sto_norm
from .legendre import legendre_oracle

__all__ = [
    "QuadratureConfig",
    "quad_integral",
    "quad_batch",
    "quad_norm",
    "mu_cutoff",
    "aux_a_quad",
    "aux_b_quad",
]


_EPS = 2.0 ** -52


@dataclass(frozen=True)
class QuadratureConfig:
    panels: int = 8
    nodes_per_panel: int = 24
    mu_max: float | None = None
    target_rel_err: float = 1e-11
    max_refinements: int = 3

    def __post_init__(self):
        if self.panels < 1 or self.nodes_per_panel < 1:
            raise DomainError("panels and nodes_per_panel must be positive")
        if self.mu_max is not None and not self.mu_max > 1:
            raise DomainError("mu_max must exceed 1")
        if not self.target_rel_err > 0:
            raise DomainError("target_rel_err must be positive")


@lru_cache(maxsize=None)
def _gauss(n: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


def _panel_nodes(edges: Sequence[float], n: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = _gauss(n)
    edges = np.asarray(edges, dtype=float)
    lo, hi = edges[:-1, None], edges[1:, None]
    half = 0.5 * (hi - lo)
    return (lo + half * (1.0 + x)).ravel(), (half * w).ravel()


def mu_cutoff(p: float, power: float, tol: float) -> float:
    """Smallest ``mu_max`` with ``exp(-p (mu_max - 1)) * mu_max**power < tol``."""
    if not p > 0:
        raise DomainError("p must be positive")

    def log_tail(mu):
        return -p * (mu - 1.0) + power * math.log(mu)

    log_tol = math.log(tol)
    hi = 2.0
    while log_tail(hi) >= log_tol or hi < power / p:
        hi = 1.0 + 2.0 * (hi - 1.0)
    lo = max(1.0, power / p) if power / p < hi else 1.0
    if log_tail(lo) < log_tol:
        return lo
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if log_tail(mid) < log_tol:
            hi = mid
        else:
            lo = mid
    return hi


def _nu_edges(q: float, singular: bool) -> np.ndarray:
    """Distances from an endpoint, doubling out to the midpoint."""
    h = min(0.5, 1.0 / (4.0 * abs(q))) if q else 0.5
    if singular:
        h /= 64.0
    d = [0.0]
    while d[-1] * 2 < 1.0 and d[-1] < 1.0:
        d.append(h if d[-1] == 0.0 else d[-1] * 2)
    if d[-1] >= 1.0:
        d[-1] = 1.0
    else:
        d.append(1.0)
    return np.asarray(d)


@dataclass
class _Grid:
    t: np.ndarray  # mu - 1
    wp: np.ndarray  # 1 + nu
    wm: np.ndarray  # 1 - nu
    weight: np.ndarray

    @property
    def plus(self):  # mu + nu
        return self.t + self.wp

    @property
    def minus(self):  # mu - nu
        return self.t + self.wm


def _build_grid(mu_max: float, q: float, cfg: QuadratureConfig, nodes: int, singular: bool) -> _Grid:
    length = mu_max - 1.0
    t_edges = [0.0] + [length * 2.0 ** (j - cfg.panels + 1) for j in range(cfg.panels)]
    t, wt = _panel_nodes(t_edges, nodes)

    d_edges = _nu_edges(q, singular)
    d, wd = _panel_nodes(d_edges, nodes)
    # panels near nu = -1 (d = 1 + nu) and mirrored ones near nu = +1 (d = 1 - nu)
    wp = np.concatenate([d, 2.0 - d])
    wm = np.concatenate([2.0 - d, d])
    wnu = np.concatenate([wd, wd])

    T, WP = np.meshgrid(t, wp, indexing="ij")
    _, WM = np.meshgrid(t, wm, indexing="ij")
    W = np.outer(wt, wnu)
    return _Grid(T.ravel(), WP.ravel(), WM.ravel(), W.ravel())


class _CenterFactors:
    """Grid quantities for one center, with per-orbital pieces memoized."""

    def __init__(self, grid: _Grid, R: float, center: str):
        t, wp, wm = grid.t, grid.wp, grid.wm
        if center == "a":
            dist = grid.plus
            cos_num = wp - t + t * wp  # 1 + mu nu
        else:
            dist = grid.minus
            cos_num = wm - t + t * wm  # 1 - mu nu
        self.cos = np.clip(cos_num / dist, -1.0, 1.0)
        self.sin = np.sqrt(t * (2.0 + t) * wp * wm) / dist
        self.r = 0.5 * R * dist
        self._exp: dict = {}
        self._ang: dict = {}

    def orbital(self, orb: StoParams) -> np.ndarray:
        if orb.zeta not in self._exp:
            self._exp[orb.zeta] = np.exp(-orb.zeta * self.r)
        key = (orb.l, orb.lam)
        if key not in self._ang:
            self._ang[key] = legendre_oracle(orb.l, orb.lam, self.cos, sin=self.sin)
        radial = sto_norm(orb.n, orb.zeta) * self.r ** (orb.n - 1) * self._exp[orb.zeta]
        return radial * self._ang[key]


def _group_key(spec: IntegralSpec):
    return (spec.a.zeta, spec.b.zeta, spec.R)


def _evaluate_group(specs: Sequence[IntegralSpec], cfg: QuadratureConfig, nodes: int):
    first = specs[0]
    R = first.R
    p = R * (first.a.zeta + first.b.zeta) / 2
    q = R * (first.a.zeta - first.b.zeta) / 2
    power = max(s.a.n + s.b.n + 1 for s in specs)
    singular = any(not (s.a.integer_n and s.b.integer_n) for s in specs)
    mu_max = cfg.mu_max or mu_cutoff(p, power, cfg.target_rel_err * 1e-2)
    grid = _build_grid(mu_max, q, cfg, nodes, singular)

    # volume (R/2)^3 (mu+nu)(mu-nu); the phi integral of |e^{i lam phi}|^2 / (2 pi) is 1
    base = (0.5 * R) ** 3 * grid.plus * grid.minus * grid.weight
    weights = {
        "overlap": base,
        NA_CENTER_A: base / (0.5 * R * grid.plus),
        NA_CENTER_B: base / (0.5 * R * grid.minus),
    }
    centers = {"a": _CenterFactors(grid, R, "a"), "b": _CenterFactors(grid, R, "b")}
    blocks: dict = {}

    def block(lam: int):
        # orbitals couple only within one lambda, so build one small matrix per lambda
        if lam not in blocks:
            a_orbs = sorted({s.a for s in specs if s.a.lam == lam}, key=repr)
            b_orbs = sorted({s.b for s in specs if s.b.lam == lam}, key=repr)
            fa = np.stack([centers["a"].orbital(o) for o in a_orbs])
            fb = np.stack([centers["b"].orbital(o) for o in b_orbs])
            blocks[lam] = (
                {o: i for i, o in enumerate(a_orbs)},
                {o: i for i, o in enumerate(b_orbs)},
                fa, fb, {},
            )
        return blocks[lam]

    def products(lam: int, kind: str, absolute: bool):
        ia, ib, fa, fb, done = block(lam)
        key = (kind, absolute)
        if key not in done:
            w = weights[kind]
            if absolute:
                done[key] = (np.abs(fa) * np.abs(w)) @ np.abs(fb).T
            else:
                done[key] = (fa * w) @ fb.T
        return ia, ib, done[key]

    def value(s: IntegralSpec, absolute: bool = False) -> float:
        ia, ib, mat = products(s.a.lam, s.kind, absolute)
        return float(mat[ia[s.a], ib[s.b]])

    return [value(s) for s in specs], lambda s: value(s, absolute=True), grid.weight.size


def quad_batch(specs: Iterable[IntegralSpec], cfg: QuadratureConfig | None = None) -> list[IntegralResult]:
    """Quadrature for many specs; specs sharing ``(zeta_a, zeta_b, R)`` share a grid.

    Each value is computed with ``N`` and ``2N`` nodes per panel; the node
    count keeps doubling (up to ``cfg.max_refinements`` times) until
    ``|I_2N - I_N| <= target_rel_err * |I_2N|``, or until the difference is
    below the rounding noise ``eps * sqrt(points) * int |f|``.  ``est_error``
    is the larger of the difference and that noise level.

    Raises
    ------
    ConvergenceError
        If a value has not converged after the last refinement.
    """
    cfg = cfg or QuadratureConfig()
    specs = list(specs)
    groups: dict = defaultdict(list)
    for i, s in enumerate(specs):
        groups[_group_key(s)].append(i)

    out: list = [None] * len(specs)
    for idx in groups.values():
        pending = idx
        nodes = cfg.nodes_per_panel
        coarse, _, _ = _evaluate_group([specs[i] for i in pending], cfg, nodes)
        coarse = dict(zip(pending, coarse))
        previous: dict = {}
        for level in range(cfg.max_refinements + 1):
            nodes *= 2
            fine, scale, npoints = _evaluate_group([specs[i] for i in pending], cfg, nodes)
            still = []
            for i, v in zip(pending, fine):
                err = abs(v - coarse[i])
                noise = _EPS * math.sqrt(npoints) * scale(specs[i])
                if err <= cfg.target_rel_err * abs(v) or err <= noise:
                    out[i] = IntegralResult(v, "quadrature", max(err, noise))
                else:
                    still.append(i)
                    previous[i], coarse[i] = coarse[i], v
            pending = still
            if not pending:
                break
        if pending:
            i = pending[0]
            raise ConvergenceError(
                f"quadrature did not reach rel. error {cfg.target_rel_err} for {specs[i]}",
                previous[i], coarse[i],
            )
    return out


def quad_integral(spec: IntegralSpec, cfg: QuadratureConfig | None = None) -> IntegralResult:
    return quad_batch([spec], cfg)[0]


def quad_norm(orb: StoParams, cfg: QuadratureConfig | None = None) -> IntegralResult:
    """``<chi|chi>`` on a single center: radial and polar integrals by Gauss-Legendre."""
    cfg = cfg or QuadratureConfig()
    p = 2.0 * orb.zeta
    # r = x / p, integrand ~ x^(2n) e^{-x}; truncate where the tail is negligible
    x_max = mu_cutoff(1.0, 2.0 * orb.n, cfg.target_rel_err * 1e-2)

    def evaluate(nodes):
        edges = [0.0] + [x_max * 2.0 ** (j - cfg.panels + 1) for j in range(cfg.panels)]
        x, w = _panel_nodes(edges, nodes)
        r = x / p
        radial = np.sum(w / p * (sto_norm(orb.n, orb.zeta) * r ** (orb.n - 1) * np.exp(-orb.zeta * r)) ** 2 * r * r)
        xs, ws = _gauss(max(nodes, orb.l + 2))
        polar = np.sum(ws * legendre_oracle(orb.l, orb.lam, xs) ** 2)
        return float(radial * polar)

    nodes = cfg.nodes_per_panel
    coarse = evaluate(nodes)
    for _ in range(cfg.max_refinements + 1):
        nodes *= 2
        fine = evaluate(nodes)
        err = abs(fine - coarse)
        if err <= cfg.target_rel_err * abs(fine):
            return IntegralResult(fine, "quadrature", err)
        coarse = fine
    raise ConvergenceError("norm quadrature did not converge", coarse, fine)


def aux_a_quad(n: int, p: float, dps: int = 30) -> float:
    """A_n(p) by adaptive tanh-sinh quadrature in extended precision."""
    with mpmath.workdps(dps):
        p = mpmath.mpf(p)
        peak = 1 + max(n / p, 1)
        val = mpmath.quad(lambda x: x**n * mpmath.exp(-p * x), [1, peak, mpmath.inf])
        return float(val)


def aux_b_quad(n: int, q: float, dps: int = 30) -> float:
    """B_n(q) by adaptive tanh-sinh quadrature in extended precision."""
    with mpmath.workdps(dps):
        q = mpmath.mpf(q)
        val = mpmath.quad(lambda x: x**n * mpmath.exp(-q * x), [-1, 0, 1])
        return float(val)
