from __future__ import annotations

import random
from fractions import Fraction as F

import pytest

from delsarte.functionals import MeasureFunctional, in_joint_dual
from delsarte.groups import Region, make_group
from delsarte.lp_duality import (DualCertificate, WeakDualityError, build_dual, build_primal, certify_no_gap,
                                 delsarte_constant, make_instance, solve, solve_instance,
                                 verify_dual_certificate)
from delsarte.sampling import random_instance
from delsarte.spectral import GroupFunction

Z4 = make_group([4])


def golden():
    return make_instance(Z4, [0, 1, 3], mode="exact")


def test_primal_shape_for_golden_instance():
    lp = build_primal(golden())
    assert len(lp.variables) == 3
    names = [c.name for c in lp.constraints]
    assert names.count("norm") == 1 and len(names) == 2


def test_full_omega_has_no_sign_constraints():
    lp = build_primal(make_instance(Z4, Z4.elements(), mode="exact"))
    assert [c.name for c in lp.constraints] == ["norm"]


def test_sigma_must_be_strictly_pd():
    with pytest.raises(ValueError, match="strictly positive definite"):
        build_primal(make_instance(Z4, [0, 1, 3], sigma=MeasureFunctional.haar(Z4)))


def test_golden_primal_and_dual():
    inst = golden()
    p, d = solve(build_primal(inst)), solve(build_dual(inst))
    assert p.value == -2 and d.value == -2
    gap = certify_no_gap(p, d)
    assert gap.gap == 0 and gap.no_gap
    assert gap.primal_witness == GroupFunction.from_values(Z4, [1, F(1, 2), 0, F(1, 2)])
    cert = gap.certificate
    assert cert.s == -2
    assert cert.kappa == MeasureFunctional.delta(Z4, 2, 2)
    assert cert.nu == MeasureFunctional.from_values(Z4, [1, -1, 1, -1])
    assert verify_dual_certificate(inst, cert).ok


@pytest.mark.parametrize("n", [2, 3, 4, 6])
def test_boundary_values(n):
    g = make_group([n])
    assert delsarte_constant(g, [0]).value == 1
    assert delsarte_constant(g, g.elements()).value == n


def test_dual_boundary_certificates():
    g = make_group([6])
    res = delsarte_constant(g, g.elements())
    assert res.alpha == res.omega == -6
    res = delsarte_constant(g, [0])
    assert res.certificate.s == -1


def test_weak_duality_violation_is_an_error():
    inst = golden()
    p, d = solve(build_primal(inst)), solve(build_dual(inst))
    d.value = d.value + 1
    with pytest.raises(WeakDualityError, match="weak duality violated"):
        certify_no_gap(p, d)


def test_mismatched_problems_rejected():
    a = solve(build_primal(golden()))
    b = solve(build_dual(make_instance(Z4, [0], mode="exact")))
    with pytest.raises(ValueError, match="different problems"):
        certify_no_gap(a, b)


def test_verify_rejects_bad_certificates():
    inst = golden()
    good = solve_instance(inst).certificate
    bad_kappa = DualCertificate(good.s, MeasureFunctional.delta(Z4, 2, -1), good.nu)
    v = verify_dual_certificate(inst, bad_kappa)
    assert not v.ok and "kappa >= 0" in v.reason
    bad_nu = DualCertificate(good.s, good.kappa, MeasureFunctional.delta(Z4, None, -1))
    v = verify_dual_certificate(inst, bad_nu)
    assert not v.ok and "positive type" in v.reason


def test_missing_zero_is_infeasible():
    inst = make_instance(Z4, [1, 3], mode="exact")
    with pytest.warns(UserWarning):
        build_primal(inst)
    res = solve_instance(inst)
    assert res.primal.status == "infeasible" and res.alpha == float("inf")
    with pytest.raises(ValueError):
        delsarte_constant(Z4, [1, 3])


def test_strong_duality_small_random_sweep():
    rng = random.Random(77)
    for _ in range(25):
        inst = random_instance(rng)
        res = solve_instance(inst)
        assert res.gap.gap == 0
        assert verify_dual_certificate(inst, res.certificate).ok


def test_joint_dual_accepts_optimum_and_rejects_above():
    rng = random.Random(5)
    for _ in range(10):
        inst = random_instance(rng)
        s = solve_instance(inst).omega
        assert in_joint_dual(inst.rho - inst.sigma * s, inst.omega).ok
        assert not in_joint_dual(inst.rho - inst.sigma * (s + 1), inst.omega).ok


def test_float_mode_on_z5():
    res = delsarte_constant(make_group([5]), [0, 1, 4])
    assert abs(res.value - 5 ** 0.5) < 1e-9 and res.gap.no_gap
