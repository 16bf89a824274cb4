from __future__ import annotations

import random
from fractions import Fraction as F

import pytest

from delsarte.functionals import (MeasureFunctional, in_joint_dual, in_P_dual, in_QA_dual, is_positive_type,
                                  jordan, measure_norm_M, mixed_norm_X, pair)
from delsarte.groups import GroupSpec, LatticeTiling, Region, make_group
from delsarte.spectral import GroupFunction, convolve, is_positive_definite

Z4 = make_group([4])
Z = GroupSpec("free", rank=1)


def test_pair_examples():
    sigma = MeasureFunctional(Z4, {(0,): 3, (1,): 5})
    assert pair(GroupFunction.delta(Z4), sigma) == 3
    f = GroupFunction.from_values(Z4, [1, 2, 3, 4])
    assert pair(f, MeasureFunctional.haar(Z4)) == 10
    even = GroupFunction.from_values(Z4, [1, 2, 7, 2])
    odd = MeasureFunctional.from_values(Z4, [0, 3, 0, -3])
    assert pair(even, odd) == 0


def test_pair_on_z_with_constant_part():
    f = GroupFunction(Z, {(0,): 1, (3,): 2})
    assert pair(f, MeasureFunctional.haar(Z, -1)) == -3
    with pytest.raises(ValueError, match="divergent"):
        pair(MeasureFunctional.haar(Z), MeasureFunctional.haar(Z))


def test_mixed_norm_examples():
    f = GroupFunction(Z, {(0,): 3, (1,): -4, (5,): 2})
    assert mixed_norm_X(LatticeTiling(1, 1), f) == 9
    assert mixed_norm_X(LatticeTiling(1, 2), GroupFunction(Z, {(0,): 3, (1,): -4})) == 4
    assert mixed_norm_X(LatticeTiling(1, 2), GroupFunction(Z, {(0,): 3, (1,): -4, (2,): 5})) == 9


def test_measure_norm_examples():
    psi = MeasureFunctional(Z, {(0,): 3, (1,): -4})
    assert measure_norm_M(LatticeTiling(1, 1), psi) == 4
    assert measure_norm_M(LatticeTiling(1, 2), psi) == 7
    assert measure_norm_M(LatticeTiling(1, 3), MeasureFunctional.haar(Z)) == 3


def test_qa_dual_examples():
    A = Region.of(Z4, [2])
    assert in_QA_dual(MeasureFunctional.delta(Z4, 2, -1), A).ok
    assert not in_QA_dual(MeasureFunctional.delta(Z4, 2, 1), A).ok
    assert not in_QA_dual(MeasureFunctional.delta(Z4, 1, -1), A).ok


def test_p_dual_and_positive_type_examples():
    alt = MeasureFunctional.from_values(Z4, [1, -1, 1, -1])
    assert in_P_dual(alt).ok and is_positive_type(alt).ok
    odd = MeasureFunctional.from_values(Z4, [0, 2, 0, -2])
    v = in_P_dual(odd)
    assert v.ok and v.witness[0] == MeasureFunctional(Z4)
    assert not in_P_dual(MeasureFunctional.delta(Z4, None, -1)).ok
    assert is_positive_type(MeasureFunctional.delta(Z4)).ok
    assert not is_positive_type(MeasureFunctional.delta(Z4, 1)).ok


def test_joint_dual_examples():
    omega = Region.of(Z4, [0, 1, 3])
    psi = MeasureFunctional.haar(Z4, -1) + MeasureFunctional.delta(Z4, None, 2)
    v = in_joint_dual(psi, omega)
    assert v.ok
    assert v.witness["kappa"] == MeasureFunctional.delta(Z4, 2, 2)
    assert v.witness["nu"] == MeasureFunctional.from_values(Z4, [1, -1, 1, -1])
    assert in_joint_dual(MeasureFunctional.delta(Z4), omega).ok
    assert not in_joint_dual(MeasureFunctional.delta(Z4, None, -1), Region.everything()).ok


def test_jordan_parts():
    psi = MeasureFunctional.from_values(make_group([6]), [1, -2, 0, 3, -1, 0])
    plus, minus = jordan(psi)
    assert plus - minus == psi
    assert not set(plus.support_points()) & set(minus.support_points())
    assert all(plus(x) >= 0 and minus(x) >= 0 for x in psi.group.elements())


def _feasible_f(rng, g, omega):
    """Positive definite and <= 0 off omega: delta_0 plus small bumps inside omega."""
    pts = [x for x in omega.points(g) if x != g.zero]
    f = GroupFunction.delta(g)
    budget = F(1)
    for x in pts:
        if rng.random() < 0.5 and budget > 0:
            c = F(rng.randint(-4, 4), 16)
            if 2 * abs(c) <= budget:
                budget -= 2 * abs(c)
                f = f + GroupFunction(g, {x: c, g.neg(x): c}) * (F(1, 2) if x == g.neg(x) else 1)
    return f


def test_weak_duality_consistency_and_p_dual_pairings():
    rng = random.Random(8)
    g = make_group([2, 6])
    for _ in range(15):
        omega = Region.of(g, [g.zero] + [x for x in g.elements() if rng.random() < 0.4 and g.neg(x) != x])
        omega = Region.of(g, set(omega.members) | {g.neg(x) for x in omega.members})
        nu_u = GroupFunction(g, {x: F(rng.randint(-3, 3)) for x in g.elements()})
        nu = convolve(nu_u, nu_u.reflect())
        kappa = {x: F(rng.randint(0, 3)) for x in g.elements() if x not in omega}
        psi = MeasureFunctional(g, nu.values) - MeasureFunctional(g, kappa)
        assert in_joint_dual(psi, omega).ok
        for _ in range(5):
            f = _feasible_f(rng, g, omega)
            assert is_positive_definite(f).ok
            assert pair(f, psi) >= 0
        assert in_P_dual(MeasureFunctional(g, nu.values)).ok
        u = GroupFunction(g, {x: F(rng.randint(-3, 3)) for x in g.elements()})
        assert pair(convolve(u, u.reflect()), MeasureFunctional(g, nu.values)) >= 0


def test_pairing_bounded_by_measure_norm():
    rng = random.Random(9)
    t = LatticeTiling(1, 3)
    for _ in range(50):
        f = GroupFunction(Z, {(rng.randint(-20, 20),): F(rng.randint(-9, 9)) for _ in range(6)})
        psi = MeasureFunctional(Z, {(rng.randint(-20, 20),): F(rng.randint(-9, 9)) for _ in range(6)})
        assert abs(pair(f, psi)) <= measure_norm_M(t, psi) * mixed_norm_X(t, f)
