from __future__ import annotations

import math
from fractions import Fraction as F

import pytest

from delsarte.groups import GroupSpec
from delsarte.spectral import GroupFunction, is_positive_definite
from delsarte.zd_bounds import (ZdCertificate, dual_upper_bound, primal_lower_bound, sandwich,
                                verify_zd_certificate)

Z = GroupSpec("free", rank=1)


def test_lower_examples():
    lo = primal_lower_bound(1, [-1, 0, 1], 1)
    assert lo.value == 2
    assert lo.witness == GroupFunction(Z, {(-1,): F(1, 2), (0,): 1, (1,): F(1, 2)})
    assert primal_lower_bound(1, [0], 0).value == 1


def test_lower_witnesses_are_admissible():
    omega = [0, 1, -1, 3, -3]
    for m in (3, 4):
        lo = primal_lower_bound(1, omega, m)
        f = lo.witness
        assert f((0,)) == 1 and lo.value == f.total()
        assert is_positive_definite(f).ok
        assert all(v <= 0 for x, v in f.items() if x[0] not in omega)


def test_upper_examples():
    up = dual_upper_bound(1, [-1, 0, 1], 2)
    assert up.value == 2 and up.verdict.ok
    assert up.certificate.s == -2
    assert dual_upper_bound(1, [0], 1).value == 1
    assert dual_upper_bound(1, [-3, 0, 3], 2).value == math.inf


def test_hand_certificate_for_three_points():
    # nu(x) = (-1)^x, kappa = 1 + (-1)^x off {-1, 0, 1}
    g = Z
    kappa = GroupFunction(g, {(x,): 1 + (-1) ** x for x in range(-2, 3) if abs(x) >= 2})
    cert = ZdCertificate(1, [(-1,), (0,), (1,)], 2, F(-2), GroupFunction(g), {(6,): F(1)}, kappa)
    assert verify_zd_certificate(cert).ok
    assert cert.upper == 2
    broken = ZdCertificate(1, [(-1,), (0,), (1,)], 2, F(-3), GroupFunction(g), {(6,): F(1)}, kappa)
    assert not verify_zd_certificate(broken).ok


def test_sandwich_closes_on_three_points():
    rows = sandwich(1, [-1, 0, 1])
    assert (rows[-1].m, rows[-1].n) == (1, 2)
    assert rows[-1].lower == rows[-1].upper == 2


def test_sandwich_singleton():
    rows = sandwich(1, [0])
    assert (rows[-1].m, rows[-1].n) == (0, 1) and rows[-1].lower == rows[-1].upper == 1


def test_sandwich_rows_are_ordered_and_monotone():
    rows = sandwich(1, [0, 2, -2, 5, -5], schedule=[(5, 6), (6, 7), (7, 8)])
    for a, b in zip(rows, rows[1:]):
        assert b.lower >= a.lower and b.upper <= a.upper
    assert all(r.lower <= r.upper for r in rows)


def test_two_dimensional_bounds():
    omega = [(0, 0), (1, 0), (-1, 0)]
    lo = primal_lower_bound(2, omega, 1)
    up = dual_upper_bound(2, omega, 2)
    assert lo.value <= up.value + 1e-9
    assert abs(float(lo.value) - 2) < 1e-6 and abs(up.value - 2) < 1e-6
    assert up.verdict.ok


def test_unsupported_dimension():
    with pytest.raises(ValueError):
        primal_lower_bound(3, [(0, 0, 0)], 1)
