import math

import pytest

from twocenter.auxiliary import aux_a, aux_b
from twocenter.errors import DomainError
from twocenter.integrals import (
    NA_CENTER_A,
    NA_CENTER_B,
    OVERLAP,
    IntegralSpec,
    StoParams,
    UnsupportedOnAnalyticPath,
    assemble_kernel,
    compute,
    kernel_matrix,
    nuclear_attraction,
    overlap,
    sto_norm,
)
from twocenter.oracle import quad_batch


def sto(n, l=0, lam=0, zeta=1.0):
    return StoParams(n, l, lam, zeta)


def test_sto_norm():
    assert sto_norm(1, 1.0) == pytest.approx(2.0, rel=1e-15)
    assert sto_norm(2, 1.0) == pytest.approx(1.1547005383792515, rel=1e-15)
    assert sto_norm(1.5, 1.0) == pytest.approx(1.6329931618554521, rel=1e-15)
    assert sto_norm(40, 3.0) == pytest.approx(
        math.exp(40.5 * math.log(6.0) - 0.5 * math.lgamma(81)), rel=1e-12
    )
    for bad in [(0.5, 1.0), (1, 0.0), (2, -1.0)]:
        with pytest.raises(DomainError):
            sto_norm(*bad)


@pytest.mark.parametrize("p", [0.3, 2.0, 9.0])
def test_kernel_hand_reductions(p):
    a = aux_a(3, p)
    # (mu+nu)^1 (mu-nu)^0 with q = 0 leaves A_1
    assert assemble_kernel(1, 0, 1, 0, 0, p, 0.0, 0, 1) == pytest.approx(a[1], rel=1e-14)
    q = 0.7
    b = aux_b(3, q)
    want = 0.5 * (a[2] * b[0] - a[0] * b[2])
    assert assemble_kernel(1, 0, 1, 0, 0, p, q) == pytest.approx(want, rel=1e-13)


def test_kernel_preconditions():
    with pytest.raises(DomainError):
        kernel_matrix(1, 0, 1, 0, 0, 1, 1)
    with pytest.raises(DomainError):
        kernel_matrix(1, 1, 2, 1, 1)


def test_spot_values():
    s = sto(1)
    t = 2.0
    assert overlap(IntegralSpec(s, s, 2.0)).value == pytest.approx(math.exp(-t) * (1 + t + t * t / 3), abs=1e-14)
    na = nuclear_attraction(IntegralSpec(s, s, 2.0), "a").value
    assert na == pytest.approx(3 * math.exp(-2), abs=1e-14)
    # hand reduction: zeta^3 R^2 A_1(zeta R)
    assert na == pytest.approx(1.0 * 4.0 * aux_a(1, 2.0)[1], rel=1e-14)


def test_na_small_r_limit():
    s = sto(1, zeta=1.0)
    v = compute(IntegralSpec(s, s, 1e-2, NA_CENTER_A)).value
    assert v == pytest.approx(1.0, rel=1e-2)
    assert v > 0


def test_overlap_decays():
    s = sto(2, zeta=1.3)
    vals = [overlap(IntegralSpec(s, s, R)).value for R in (5.0, 10.0, 20.0)]
    assert vals[0] > vals[1] > vals[2] > 0
    ref = quad_batch([IntegralSpec(s, s, R) for R in (5.0, 10.0, 20.0)])
    for v, r in zip(vals, ref):
        assert v == pytest.approx(r.value, rel=1e-9)


@pytest.mark.parametrize("kind", [OVERLAP, NA_CENTER_A, NA_CENTER_B])
def test_swap_symmetry(kind):
    swapped = {OVERLAP: OVERLAP, NA_CENTER_A: NA_CENTER_B, NA_CENTER_B: NA_CENTER_A}[kind]
    cases = [
        (StoParams(2, 1, 0, 1.2), StoParams(3, 2, 0, 0.7), 2.5),
        (StoParams(3, 1, 1, 2.0), StoParams(4, 3, 1, 1.1), 1.7),
        (StoParams(1, 0, 0, 0.5), StoParams(4, 2, 0, 3.0), 4.0),
    ]
    for a, b, R in cases:
        x = compute(IntegralSpec(a, b, R, kind)).value
        y = compute(IntegralSpec(b, a, R, swapped)).value
        assert x == pytest.approx(y, rel=1e-12)


@pytest.mark.parametrize("c", [0.1, 3.0])
def test_scaling(c):
    a, b, R = StoParams(3, 2, 1, 1.4), StoParams(2, 1, 1, 0.6), 2.2
    sa, sb = StoParams(3, 2, 1, c * 1.4), StoParams(2, 1, 1, c * 0.6)
    s0 = compute(IntegralSpec(a, b, R)).value
    assert compute(IntegralSpec(sa, sb, R / c)).value == pytest.approx(s0, rel=1e-12)
    na0 = compute(IntegralSpec(a, b, R, NA_CENTER_A)).value
    assert compute(IntegralSpec(sa, sb, R / c, NA_CENTER_A)).value == pytest.approx(c * na0, rel=1e-12)


def test_spec_validation():
    with pytest.raises(DomainError):
        IntegralSpec(sto(2, 1, 1), sto(2, 1, 0), 1.0)
    with pytest.raises(DomainError):
        IntegralSpec(sto(1), sto(1), 0.0)
    with pytest.raises(DomainError):
        IntegralSpec(sto(1), sto(1), 1.0, "kinetic")
    with pytest.raises(DomainError):
        StoParams(2, 2, 0, 1.0)
    with pytest.raises(DomainError):
        StoParams(3, 1, 2, 1.0)
    with pytest.raises(DomainError):
        StoParams(1, 0, 0, 0.0)


def test_noninteger_rejected_on_analytic_path():
    spec = IntegralSpec(StoParams(1.5, 0, 0, 1.0), sto(1), 2.0)
    with pytest.raises(UnsupportedOnAnalyticPath, match="oracle"):
        compute(spec)


def test_small_sweep_against_oracle():
    specs = []
    for na, la in [(1, 0), (2, 1), (3, 2)]:
        for nb, lb in [(2, 0), (3, 1)]:
            for za, zb, R in [(1.0, 1.0, 1.5), (0.8, 2.1, 3.0)]:
                for kind in (OVERLAP, NA_CENTER_A, NA_CENTER_B):
                    specs.append(IntegralSpec(StoParams(na, la, 0, za), StoParams(nb, lb, 0, zb), R, kind))
    for spec, ref in zip(specs, quad_batch(specs)):
        got = compute(spec).value
        assert abs(got - ref.value) <= 1e-8 * max(1e-12, abs(ref.value))
