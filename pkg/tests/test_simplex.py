from __future__ import annotations

import random
from fractions import Fraction as F

import numpy as np
import pytest

from delsarte.simplex import LPProblem, solve_lp

scipy_optimize = pytest.importorskip("scipy.optimize")


def small_lp(mode="exact"):
    lp = LPProblem(mode=mode)
    lp.add_variable("x")
    lp.add_variable("y")
    lp.add_constraint({"x": 1, "y": 2}, "<=", 4)
    lp.add_constraint({"x": 3, "y": 1}, "<=", 6)
    lp.set_objective({"x": 1, "y": 1}, "max")
    return lp


def test_small_exact_optimum():
    sol = solve_lp(small_lp())
    assert sol.status == "optimal"
    assert sol.value == F(14, 5)
    assert sol.point == {"x": F(8, 5), "y": F(6, 5)}


def test_infeasible_and_unbounded():
    lp = LPProblem()
    lp.add_variable("x")
    lp.add_constraint({"x": 1}, "<=", -1)
    lp.set_objective({"x": 1})
    assert solve_lp(lp).status == "infeasible"
    lp = LPProblem()
    lp.add_variable("x", "free")
    lp.add_constraint({"x": 1}, ">=", 0)
    lp.set_objective({"x": 1}, "max")
    sol = solve_lp(lp)
    assert sol.status == "unbounded" and sol.value == float("inf")


def test_degenerate_cycling_example_terminates():
    # Beale's classic cycling instance under the textbook rule
    lp = LPProblem()
    for v in "abcd":
        lp.add_variable(v)
    lp.add_constraint({"a": F(1, 4), "b": -8, "c": -1, "d": 9}, "<=", 0)
    lp.add_constraint({"a": F(1, 2), "b": -12, "c": F(-1, 2), "d": 3}, "<=", 0)
    lp.add_constraint({"c": 1}, "<=", 1)
    lp.set_objective({"a": F(-3, 4), "b": 20, "c": F(-1, 2), "d": 6}, "min")
    sol = solve_lp(lp)
    assert sol.status == "optimal" and sol.value == F(-5, 4)


def _random_lp(rng, mode):
    m, n = rng.randint(1, 6), rng.randint(1, 6)
    lp = LPProblem(mode=mode)
    bounds = [rng.choice(["nonneg", "nonneg", "free", "nonpos"]) for _ in range(n)]
    for j, b in enumerate(bounds):
        lp.add_variable(j, b)
        lp.add_constraint({j: 1}, "<=", 10)
        lp.add_constraint({j: 1}, ">=", -10)
    rels = []
    for _ in range(m):
        coeffs = {j: rng.randint(-4, 4) for j in range(n)}
        rel = rng.choice(["<=", ">=", "=="])
        rhs = rng.randint(-5, 5)
        lp.add_constraint(coeffs, rel, rhs)
        rels.append((coeffs, rel, rhs))
    lp.set_objective({j: rng.randint(-5, 5) for j in range(n)}, "min")
    return lp, bounds


def _scipy(lp, bounds):
    n = len(bounds)
    A_ub, b_ub, A_eq, b_eq = [], [], [], []
    for c in lp.constraints:
        row = [float(c.coeffs.get(j, 0)) for j in range(n)]
        if c.rel == "<=":
            A_ub.append(row), b_ub.append(float(c.rhs))
        elif c.rel == ">=":
            A_ub.append([-v for v in row]), b_ub.append(-float(c.rhs))
        else:
            A_eq.append(row), b_eq.append(float(c.rhs))
    bnd = [(0, None) if b == "nonneg" else (None, 0) if b == "nonpos" else (None, None) for b in bounds]
    cost = [float(lp.objective.get(j, 0)) for j in range(n)]
    return scipy_optimize.linprog(cost, A_ub=A_ub or None, b_ub=b_ub or None, A_eq=A_eq or None,
                                  b_eq=b_eq or None, bounds=bnd, method="highs")


@pytest.mark.parametrize("mode", ["exact", "float"])
def test_matches_highs_on_random_lps(mode):
    rng = random.Random(11 if mode == "exact" else 12)
    for _ in range(150):
        lp, bounds = _random_lp(rng, mode)
        ours = solve_lp(lp)
        ref = _scipy(lp, bounds)
        if ref.status == 2:
            assert ours.status == "infeasible"
            continue
        assert ref.status == 0
        assert ours.status == "optimal"
        assert abs(float(ours.value) - ref.fun) <= 1e-7
        assert max(lp.residuals(ours.point)) <= (0 if mode == "exact" else 1e-7)


def test_exact_restart_from_bad_bases():
    # any guessed basis, dependent or infeasible, must still give the exact optimum
    from delsarte.simplex import _exact_from_basis, _solve_standard, _standard_form
    rng = random.Random(13)
    checked = 0
    for _ in range(150):
        lp, _ = _random_lp(rng, "exact")
        _, n_struct, rows, rhs, slack, cost = _standard_form(lp)
        status, x_ref, _, _ = _solve_standard(rows, rhs, slack, cost, n_struct, True)
        if status != "optimal":
            continue
        best = sum(c * x_ref[j] for j, c in cost.items())
        n_real = n_struct + sum(1 for s in slack if s != 0)
        for _ in range(3):
            guess = rng.sample(range(n_real), min(len(rows), n_real))
            out = _exact_from_basis(rows, rhs, slack, cost, n_struct, guess)
            if out is None:
                continue
            assert out[0] == "optimal"
            assert sum(c * out[1][j] for j, c in cost.items()) == best
            checked += 1
    assert checked > 100
