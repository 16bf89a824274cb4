"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Every check that can be exact is exact.  The independent oracles are a
vertex enumeration for the golden instance, set arithmetic for the
sign-swap constants and dense spectral sampling (numpy) as a sanity check
next to the exact positive definiteness certificates.
"""
from __future__ import annotations

import itertools
import random
import time
from fractions import Fraction as F

import numpy as np
import pytest

from delsarte.constructions import check_kernel, pd_minorant_decompose, sign_swap, urysohn_pd_kernel
from delsarte.functionals import MeasureFunctional, in_joint_dual, pair
from delsarte.groups import GroupSpec, Region, inversion_orbits, make_group
from delsarte.lp_duality import delsarte_constant, make_instance, solve_instance, verify_dual_certificate
from delsarte.sampling import (random_exact_group, random_instance, random_rational, random_strict_pd,
                               random_symmetric_region)
from delsarte.spectral import GroupFunction, convolve, is_positive_definite
from delsarte.zd_bounds import sandwich, verify_zd_certificate

Z = GroupSpec("free", rank=1)
Z2 = GroupSpec("free", rank=2)


def _run(acceptance, n, title, body):
    t0 = time.perf_counter()
    try:
        detail = body()
    except Exception as exc:
        acceptance(n, False, f"{title}: {type(exc).__name__}: {exc}")
        raise
    acceptance(n, True, f"{title}: {detail} [{time.perf_counter() - t0:.1f}s]")


def _spectral_min(f: GroupFunction, n: int = 4096) -> float:
    """Dense-grid minimum of the real spectrum of a function on Z or Z^2."""
    pts = np.array(list(f.values), dtype=float)
    w = np.array([float(v) for v in f.values.values()])
    th = np.linspace(0, 2 * np.pi, n, endpoint=False)
    if pts.shape[1] == 1:
        return float((np.cos(np.outer(th, pts[:, 0])) @ w).min())
    th = th[::32]
    grid = np.array(list(itertools.product(th, th)))
    return min(float((np.cos(chunk @ pts.T) @ w).min()) for chunk in np.array_split(grid, 64))


# --------------------------------------------------------------------------
# 1

def _golden_vertex_optimum():
    # f = (1, a, b, a) on Z_4; spectrum 1 + 2a + b, 1 - b, 1 - 2a + b; b <= 0
    cons = [(0, 1, 0), (-2, -1, 1), (0, 1, 1), (2, -1, 1)]   # ca*a + cb*b <= r
    best = None
    for (a1, b1, r1), (a2, b2, r2) in itertools.combinations(cons, 2):
        det = a1 * b2 - a2 * b1
        if det == 0:
            continue
        a = F(r1 * b2 - r2 * b1, det)
        b = F(a1 * r2 - a2 * r1, det)
        if all(ca * a + cb * b <= r for ca, cb, r in cons):
            val = 1 + 2 * a + b
            if best is None or val > best[0]:
                best = (val, a, b)
    return best


def test_criterion_1_golden_instance(acceptance):
    def body():
        g = make_group([4])
        t0 = time.perf_counter()
        inst = make_instance(g, [0, 1, 3], mode="exact")
        res = solve_instance(inst)
        ver = verify_dual_certificate(inst, res.certificate)
        elapsed = time.perf_counter() - t0
        cert = res.certificate
        assert res.alpha == -2 and res.omega == -2 and res.gap.gap == 0
        assert delsarte_constant(g, [0, 1, 3], mode="exact").value == 2
        assert res.witness == GroupFunction.from_values(g, [1, F(1, 2), 0, F(1, 2)])
        assert cert.s == -2
        assert cert.kappa == MeasureFunctional.delta(g, 2, 2)
        assert cert.nu == MeasureFunctional.from_values(g, [1, -1, 1, -1])
        assert ver.ok, ver.reason
        for x in g.elements():   # rho - s sigma = nu - kappa pointwise
            assert inst.rho(x) - cert.s * inst.sigma(x) == cert.nu(x) - cert.kappa(x)
        val, a, b = _golden_vertex_optimum()
        assert (val, a, b) == (2, F(1, 2), 0)
        assert elapsed < 1.0, f"took {elapsed:.2f}s"
        return f"alpha = omega = -2, D = 2, vertex oracle agrees, solve+verify {elapsed * 1000:.0f} ms"

    _run(acceptance, 1, "golden instance on Z_4", body)


# --------------------------------------------------------------------------
# 2

def test_criterion_2_boundary_cases(acceptance):
    def body():
        worst = 0.0
        for n in range(2, 13):
            g = make_group([n])
            one = delsarte_constant(g, [0]).value
            full = delsarte_constant(g, g.elements()).value
            if g.exact_available:
                assert isinstance(one, F) and one == 1, (n, one)
                assert isinstance(full, F) and full == n, (n, full)
            else:
                err = max(abs(one - 1), abs(full - n))
                worst = max(worst, err)
                assert err <= 1e-8, (n, one, full)
        return f"Z_2..Z_12 exact where available, float error <= {worst:.1e}"

    _run(acceptance, 2, "boundary cases", body)


# --------------------------------------------------------------------------
# 3

def test_criterion_3_strong_duality_sweep(acceptance):
    def body():
        t0 = time.perf_counter()
        rng = random.Random(20240601)
        for i in range(200):
            inst = random_instance(rng)
            assert inst.mode == "exact" and inst.group.exponent in (2, 3, 4, 6) and inst.group.order <= 64
            res = solve_instance(inst)
            assert res.gap.gap == 0, (i, res.gap.gap)
            assert verify_dual_certificate(inst, res.certificate).ok, i
        worst = 0.0
        for i in range(200):
            g = make_group([rng.randint(2, 40)])
            inst = random_instance(rng, g, mode="float")
            res = solve_instance(inst)
            assert res.gap.status == "optimal", (i, res.gap.status)
            worst = max(worst, abs(res.gap.gap))
            assert abs(res.gap.gap) <= 1e-6, (i, res.gap.gap)
        elapsed = time.perf_counter() - t0
        assert elapsed < 300, f"took {elapsed:.0f}s"
        return f"200 exact gaps = 0, 200 float gaps <= {worst:.1e}"

    _run(acceptance, 3, "strong duality sweep", body)


# --------------------------------------------------------------------------
# 4

def test_criterion_4_two_sided_sweep(acceptance):
    def body():
        rng = random.Random(4444)
        for i in range(100):
            inst = random_instance(rng, two_sided=True)
            res = solve_instance(inst)
            assert res.gap.gap == 0, (i, res.gap.gap)
            assert verify_dual_certificate(inst, res.certificate).ok, i
        for i in range(30):
            one = random_instance(rng)
            g = one.group
            both = make_instance(g, one.omega, one.rho, one.sigma, Region.of(g, g.elements()), mode="exact")
            a, b = solve_instance(one), solve_instance(both)
            assert a.alpha == b.alpha and a.omega == b.omega, i
        return "100 exact gaps = 0; 30 instances with omega_minus = G match the one-sided optimum"

    _run(acceptance, 4, "two-sided sweep", body)


# --------------------------------------------------------------------------
# 5

def _random_sign_swap_case(rng):
    V = sorted(rng.sample(range(-3, 4), rng.randint(1, 4)))
    w = V[-1] - V[0]
    pos = rng.sample(range(3 * w + 1, 101 - 2 * w), rng.randint(1, 6))   # support inside [-100, 100]
    S = sorted(set(pos) | {-x for x in pos})
    return S, V


def test_criterion_5_sign_swap_suite(acceptance):
    def body():
        rng = random.Random(55)
        for i in range(100):
            S, V = _random_sign_swap_case(rng)
            rep = sign_swap(Z, S, V)
            k = rep.k
            W = {a - b for a in V for b in V}
            SW = {s + w for s in S for w in W}
            SWW = {x + w for x in SW for w in W}
            assert max(abs(x[0]) for x in k.values) <= 100, "outside the window"
            assert {x[0] for x, v in k.values.items() if v > 0} <= W, i
            assert {x[0] for x, v in k.values.items() if v < 0} <= SWW, i
            assert k.total() == 0, i
            assert all(k((s,)) == -1 for s in S), i
            assert rep.value_at_zero == F(len(SW), len(V)), i
            assert is_positive_definite(k).ok, i
            assert _spectral_min(k) >= -1e-9, i
            assert rep.ok, (i, {n: v.reason for n, v in rep.checks.items() if not v.ok})
        return "supports, zero sum, k = -1 on S, exact PD and k(0) = |S+W|/|V| on 100 cases"

    _run(acceptance, 5, "sign-swap suite", body)


# --------------------------------------------------------------------------
# 6

def test_criterion_6_kernel_suite(acceptance):
    def body():
        rng = random.Random(66)
        for i in range(100):
            eps = F(rng.randint(1, 9), 10)
            if i % 5 == 4:
                g = Z2
                K = [tuple(rng.randint(-6, 6) for _ in range(2)) for _ in range(rng.randint(1, 5))]
            else:
                g = Z
                K = rng.sample(range(-30, 31), rng.randint(1, 8))
            k = urysohn_pd_kernel(g, K, eps)
            rep = check_kernel(k, K, eps)
            assert rep.ok, (i, {n: v.reason for n, v in rep.checks.items() if not v.ok})
            zero = (0,) * g.rank
            pts = [x if isinstance(x, tuple) else (x,) for x in K]
            assert k(zero) == 1
            assert min(k(x) for x in pts) >= 1 - eps
            assert all(v >= 0 for v in k.values.values())
            assert _spectral_min(k) >= -1e-9, i
        return "k(0) = 1, k >= 0, finite support, PD and min over K >= 1 - eps on 100 cases"

    _run(acceptance, 6, "kernel suite", body)


# --------------------------------------------------------------------------
# 7

def _random_decomposition_case(rng, i):
    if i % 4 == 3:
        g = random_exact_group(rng)
        f = GroupFunction(g, {x: random_rational(rng) for x in g.elements() if rng.random() < 0.7})
        A = Region.of(g, [x for x in g.elements() if x != g.zero and rng.random() < 0.6])
        return f, A, None
    V = sorted(set([0] + rng.sample(range(-2, 3), rng.randint(0, 2))))
    w = V[-1] - V[0]
    hole = set(range(-3 * w, 3 * w + 1)) | {x for y in rng.sample(range(1, 20), 2) for x in (y, -y)}
    f = GroupFunction(Z, {(x,): random_rational(rng) for x in rng.sample(range(-25, 26), rng.randint(1, 12))})
    return f, Region.of(Z, sorted(hole), complement=True), V


def test_criterion_7_decomposition_suite(acceptance):
    rng = random.Random(77)
    literal_fail = []
    t0 = time.perf_counter()
    try:
        for i in range(100):
            f, A, V = _random_decomposition_case(rng, i)
            d = pd_minorant_decompose(f, A, V)
            assert is_positive_definite(d.p).ok, i
            assert all(d.p(x) <= f(x) for x in set(d.p.values) | set(f.values) if x in A), i
            assert d.p - d.q == f, i
            assert d.checks["norm_bound_with_center_cell"].ok, i
            if not d.checks["norm_bound"].ok:
                literal_fail.append(i)
    except Exception as exc:
        acceptance(7, False, f"decomposition suite: {type(exc).__name__}: {exc}")
        raise
    elapsed = time.perf_counter() - t0
    if literal_fail:
        acceptance(7, False, f"decomposition suite: p PD and p <= f on A in 100/100, but ||p||_X exceeds "
                             f"2N|B+W|/|V| ||f||_X in {len(literal_fail)}/100 (bound with N+1 cells holds "
                             f"100/100) [{elapsed:.1f}s]")
        pytest.xfail("the stated norm bound is false: it drops the cell at the origin")
    acceptance(7, True, f"decomposition suite: all checks on 100 cases [{elapsed:.1f}s]")


# --------------------------------------------------------------------------
# 8

def test_criterion_8_z_sandwich(acceptance):
    def body():
        rows = sandwich(1, [-1, 0, 1])
        closed = [r for r in rows if r.lower == r.upper == 2]
        assert closed and closed[0].m <= 1 and closed[0].n <= 2, [(r.m, r.n, r.lower, r.upper) for r in rows]
        rows0 = sandwich(1, [0])
        assert rows0[-1].lower == rows0[-1].upper == 1
        longer = sandwich(1, [0, 2, -2, 5, -5], schedule=[(5, 6), (6, 7)])
        for r in rows + rows0 + longer:
            assert r.lower <= r.upper, (r.m, r.n)
            assert isinstance(r.lower, F) and isinstance(r.upper, F)
            assert verify_zd_certificate(r.upper_witness.certificate).ok
        return (f"{{-1,0,1}} closes at 2 at (m,n) = ({closed[0].m},{closed[0].n}); {{0}} closes at 1; "
                f"lower <= upper on all rows")

    _run(acceptance, 8, "Z sandwich", body)


# --------------------------------------------------------------------------
# 9

def _random_member(rng, g, omega):
    A = [x for x in g.elements() if x not in omega]
    kappa = MeasureFunctional(g, {x: F(rng.randint(0, 8), 4) for x in A if rng.random() < 0.6})
    u = GroupFunction(g, {x: random_rational(rng, -3, 3, 2) for x in rng.sample(g.elements(), min(3, g.order))})
    nu = MeasureFunctional.from_function(convolve(u, u.reflect()))
    odd = {}
    for x in g.elements():
        if g.neg(x) != x and x not in odd and rng.random() < 0.3:
            c = random_rational(rng)
            odd[x], odd[g.neg(x)] = c, -c
    return -kappa + nu + MeasureFunctional(g, odd)


def _feasible_function(rng, g, omega):
    """delta_0 plus small symmetric bumps inside omega: PD and <= 0 off omega."""
    vals = {g.zero: F(1)}
    inside = [o for o in inversion_orbits(g) if o[0] != g.zero and all(x in omega for x in o)]
    budget = F(1, 2)
    for o in inside:
        c = F(rng.randint(-4, 4), 8 * len(o)) * budget
        budget -= abs(c) * len(o)
        for x in o:
            vals[x] = c
    return GroupFunction(g, vals)


def test_criterion_9_dual_cone_oracles(acceptance):
    def body():
        rng = random.Random(99)
        for i in range(100):
            g = random_exact_group(rng)
            omega = random_symmetric_region(rng, g)
            psi = _random_member(rng, g, omega)
            v = in_joint_dual(psi, omega)
            assert v.ok, (i, v.reason)
        for i in range(100):
            g = random_exact_group(rng)
            omega = random_symmetric_region(rng, g)
            f = _feasible_function(rng, g, omega)
            assert is_positive_definite(f).ok
            psi = MeasureFunctional(g, {x: random_rational(rng) for x in g.elements()})
            ff = pair(f, MeasureFunctional.from_function(f))
            psi = psi - MeasureFunctional.from_function(f) * ((pair(f, psi) + 1) / ff)
            assert pair(f, psi) == -1
            v = in_joint_dual(psi, omega)
            assert not v.ok, i
        return "100 members accepted, 100 separated non-members rejected"

    _run(acceptance, 9, "dual-cone oracles", body)


# --------------------------------------------------------------------------
# 10

def test_criterion_10_invariances(acceptance):
    def body():
        rng = random.Random(1010)
        for i in range(30):
            g = random_exact_group(rng)
            omega = random_symmetric_region(rng, g)
            sigma = random_strict_pd(rng, g)
            rho = MeasureFunctional(g, {x: random_rational(rng) for x in g.elements() if rng.random() < 0.6})
            even = (rho + rho.reflect()) * F(1, 2)
            a = solve_instance(make_instance(g, omega, rho, sigma, mode="exact"))
            b = solve_instance(make_instance(g, omega, even, sigma, mode="exact"))
            assert a.alpha == b.alpha and a.omega == b.omega, i
            c = F(rng.randint(1, 12), rng.randint(1, 5))
            s = solve_instance(make_instance(g, omega, even, sigma * c, mode="exact"))
            assert s.alpha == b.alpha / c and s.omega == b.omega / c, (i, c)
        for i in range(30):
            g = random_exact_group(rng)
            om = Region.of(g, [g.zero] + [x for x in g.elements() if x != g.zero and rng.random() < 0.5])
            sym = Region.of(g, [x for x in om.members if g.neg(x) in om])
            raw = solve_instance(make_instance(g, om, mode="exact"))
            cut = solve_instance(make_instance(g, sym, mode="exact"))
            assert raw.alpha == cut.alpha, i
            assert all(raw.witness(x) <= 0 for x in g.elements() if x not in sym), i
        return "evenizing rho, scaling sigma and symmetrizing omega act as predicted on 30 cases each"

    _run(acceptance, 10, "invariance checks", body)
