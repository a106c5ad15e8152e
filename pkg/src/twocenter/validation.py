"""Property suites behind ``twocenter validate``."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .auxiliary import aux_a, aux_b, aux_b_recurrence, aux_b_series
from .combinatorics import gen_binomial
from .integrals import KINDS, IntegralSpec, StoParams, compute
from .legendre import legendre_eval, legendre_oracle
from .oracle import aux_a_quad, aux_b_quad, quad_batch
from .product_expansion import (
    EllipsoidalPoint,
    build_expansion,
    eval_direct,
    eval_expansion,
    verify_identity_7,
    verify_identity_9,
)
from .stability import coefficient_errors, digit_loss_report

__all__ = [
    "SuiteResult",
    "ValidationReport",
    "SWEEP_ZETAS",
    "SWEEP_ZETA_R",
    "AUX_P",
    "AUX_Q",
    "sweep_orbitals",
    "sweep_specs",
    "run_validation",
]

SWEEP_ZETAS = (0.5, 1.0, 2.5, 5.0)
SWEEP_ZETA_R = (0.5, 2.0, 8.0, 20.0)
AUX_P = (0.5, 1.0, 5.0, 20.0)
AUX_Q = (-15.0, -1.0, -1e-6, 0.0, 1e-6, 1.0, 15.0)


@dataclass
class SuiteResult:
    name: str
    cases: int = 0
    max_rel_err: float = 0.0
    failures: list = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    def check(self, inputs, got, want, tol, scale=None):
        """Record one comparison ``|got - want| <= tol * scale``."""
        self.cases += 1
        if scale is None:
            scale = max(1.0, abs(want))
        err = abs(got - want) / scale if scale else abs(got - want)
        self.max_rel_err = max(self.max_rel_err, err)
        if not err <= tol:
            self.failures.append({"inputs": inputs, "got": got, "want": want, "tol": tol})

    def flag(self, inputs, ok: bool):
        self.cases += 1
        if not ok:
            self.failures.append({"inputs": inputs, "got": False, "want": True, "tol": 0})

    def to_dict(self) -> dict:
        out = {
            "name": self.name,
            "cases": self.cases,
            "max_rel_err": self.max_rel_err,
            "failures": self.failures,
        }
        out.update(self.extra)
        return out


@dataclass
class ValidationReport:
    suites: list
    seed: int
    wall_time_ms: float

    @property
    def ok(self) -> bool:
        return all(not s.failures for s in self.suites)

    def to_dict(self) -> dict:
        return {
            "suites": [s.to_dict() for s in self.suites],
            "seed": self.seed,
            "wall_time_ms": self.wall_time_ms,
        }


def legendre_suite(lmax: int, tol: float) -> SuiteResult:
    res = SuiteResult("legendre_closed_vs_recurrence")
    xs = np.linspace(-1.0, 1.0, 41)
    for l in range(lmax + 1):
        for m in range(l + 1):
            ref = legendre_oracle(l, m, xs)
            for x, want in zip(xs, ref):
                res.check({"l": l, "m": m, "x": float(x)}, legendre_eval(l, m, float(x)), float(want), tol)
    # orthonormality with an exact-degree Gauss rule
    lo = min(lmax, 10)
    x, w = np.polynomial.legendre.leggauss(lo + 2)
    for m in range(lo + 1):
        vals = {l: np.array([legendre_eval(l, m, float(t)) for t in x]) for l in range(m, lo + 1)}
        for l in vals:
            for lp in vals:
                got = float(np.sum(w * vals[l] * vals[lp]))
                res.check({"l": l, "lp": lp, "m": m, "check": "orthonormality"}, got, float(l == lp), tol)
    return res


def expansion_suite(lmax: int, samples: int, tol: float, rng: random.Random) -> SuiteResult:
    res = SuiteResult("expansion_vs_direct")
    for l in range(lmax + 1):
        for lp in range(lmax + 1):
            for lam in range(min(l, lp) + 1):
                table = build_expansion(l, lam, lp)
                for _ in range(samples):
                    pt = EllipsoidalPoint(rng.uniform(1.01, 10.0), rng.uniform(-0.99, 0.99))
                    want = eval_direct(l, lam, lp, pt)
                    res.check(
                        {"l": l, "lam": lam, "lp": lp, "mu": pt.mu, "nu": pt.nu},
                        eval_expansion(table, pt), want, tol,
                    )
    return res


def generating_identity(N: int, Np: int, x: Fraction) -> bool:
    lhs = sum(gen_binomial(m, N, Np) * x**m for m in range(N + Np + 1))
    return lhs == (1 + x) ** N * (1 - x) ** Np


def identity_suite(lmax: int, rng: random.Random) -> SuiteResult:
    res = SuiteResult("derivation_identities")
    res.flag({"identity": "sin-product"}, verify_identity_7(32, seed=rng.randrange(2**31)))
    for power in range(min(lmax, 8) + 1):
        res.flag({"identity": "binomial-power", "power": power}, verify_identity_9(power))
    top = min(max(lmax, 1), 12)
    for N in range(top + 1):
        for Np in range(top + 1):
            x = Fraction(rng.randint(-1000, 1000), rng.randint(1, 1000))
            res.flag({"identity": "F-generating", "N": N, "Np": Np, "x": str(x)}, generating_identity(N, Np, x))
    return res


def auxiliary_suite(nmax: int = 20, tol: float = 1e-12) -> SuiteResult:
    res = SuiteResult("auxiliary_vs_quadrature")
    for p in AUX_P:
        a = aux_a(nmax, p)
        for n in range(nmax + 1):
            want = aux_a_quad(n, p)
            res.check({"fn": "A", "n": n, "p": p}, float(a[n]), want, tol, scale=abs(want) if abs(want) >= 1e-10 else 1.0)
    for q in AUX_Q:
        b = aux_b(nmax, q)
        for n in range(nmax + 1):
            want = aux_b_quad(n, q)
            res.check({"fn": "B", "n": n, "q": q}, float(b[n]), want, tol, scale=abs(want) if abs(want) >= 1e-10 else 1.0)
    # series and recurrence overlap for |q| in [N+8, N+12]
    for N in (0, 5, 10, 20):
        for dq in (8.0, 9.0, 10.0, 11.0, 12.0):
            for q in (N + dq, -(N + dq)):
                s, r = aux_b_series(N, q), aux_b_recurrence(N, q)
                for n in range(N + 1):
                    res.check({"fn": "B-crossover", "N": N, "n": n, "q": q}, float(r[n]), float(s[n]), 1e-11, scale=abs(s[n]))
    return res


def sweep_orbitals(nmax: int = 4, lmax: int = 3) -> list:
    """All ``(n, l, lam)`` with ``l < n``, as unit-exponent orbitals."""
    return [
        (n, l, lam)
        for n in range(1, nmax + 1)
        for l in range(min(n - 1, lmax) + 1)
        for lam in range(l + 1)
    ]


def sweep_specs(nmax: int = 4, lmax: int = 3, zetas=SWEEP_ZETAS, zeta_r=SWEEP_ZETA_R) -> list:
    """Every lined-up pair, both exponents drawn from ``zetas``.

    ``R`` is set from the mean exponent, ``R = t / ((zeta_a + zeta_b)/2)``,
    so ``p = t`` for every entry of ``zeta_r``.
    """
    orbs = sweep_orbitals(nmax, lmax)
    specs = []
    for za in zetas:
        for zb in zetas:
            for t in zeta_r:
                R = t / ((za + zb) / 2)
                for na, la, lam in orbs:
                    for nb, lb, lamb in orbs:
                        if lam != lamb:
                            continue
                        for kind in KINDS:
                            specs.append(
                                IntegralSpec(StoParams(na, la, lam, za), StoParams(nb, lb, lam, zb), R, kind)
                            )
    return specs


def integral_suite(lmax: int, tol: float = 1e-8) -> SuiteResult:
    res = SuiteResult("integrals_vs_quadrature")
    specs = sweep_specs(4, min(lmax, 3))
    oracle = quad_batch(specs)
    for spec, ref in zip(specs, oracle):
        got = compute(spec).value
        inputs = {
            "kind": spec.kind, "R": spec.R,
            "a": [spec.a.n, spec.a.l, spec.a.lam, spec.a.zeta],
            "b": [spec.b.n, spec.b.l, spec.b.lam, spec.b.zeta],
        }
        res.check(inputs, got, ref.value, tol, scale=max(1e-12, abs(ref.value)))
        if spec.kind == "overlap" and abs(got) > 1.0 + 1e-12:
            res.failures.append({"inputs": inputs, "got": got, "want": "|S| <= 1", "tol": 0})
    return res


def coefficient_suite(lmax: int, digits_lmax: int, tol: float = 1e-6) -> SuiteResult:
    res = SuiteResult("coefficients_float_vs_exact")
    top = min(lmax, 8)
    for l in range(top + 1):
        for lp in range(top + 1):
            for lam in range(min(l, lp) + 1):
                err = coefficient_errors(l, lam, lp)
                res.check({"l": l, "lam": lam, "lp": lp}, err.max_rel_err, 0.0, tol, scale=1.0)
    res.extra["digit_loss"] = digit_loss_report(digits_lmax)
    return res


def run_validation(lmax: int = 8, samples: int = 100, tol: float = 1e-10, seed: int = 42,
                   digits_lmax: int = 15, integrals: bool = True) -> ValidationReport:
    """Run every suite; deterministic for a fixed ``seed``."""
    start = time.perf_counter()
    rng = random.Random(seed)
    suites = [
        legendre_suite(min(lmax, 12), tol),
        expansion_suite(lmax, samples, tol, rng),
        identity_suite(lmax, rng),
        auxiliary_suite(),
    ]
    if integrals:
        suites.append(integral_suite(lmax))
    suites.append(coefficient_suite(lmax, digits_lmax))
    wall = (time.perf_counter() - start) * 1e3
    return ValidationReport(suites, seed, round(wall, 3))
