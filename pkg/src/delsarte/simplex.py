"""Two-phase tableau simplex in exact rational or float64 arithmetic.

Exact mode keeps an integer tableau together with a common positive
denominator and pivots fraction-free (every division is exact), which avoids
the cost of normalizing ``Fraction`` objects at each step.  Entering columns
follow Dantzig's rule; after ``2 * (rows + cols)`` consecutive degenerate
pivots the solver switches to Bland's rule, which cannot cycle.  Ratio ties
go to the smallest basic variable index.

Exact solves first run the float engine and, when it reports an optimal
basis, rebuild that basis exactly and continue phase two from there; a
singular or infeasible guess falls back to the full exact solve.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

import numpy as np

from ._scalars import FLOAT_TOL, fmt, to_scalar

BOUNDS = ("nonneg", "free", "nonpos")
RELATIONS = ("<=", ">=", "==")


@dataclass
class Constraint:
    coeffs: dict
    rel: str
    rhs: object
    name: str = ""


@dataclass
class LPProblem:
    """A linear program over named variables.

    ``variables`` maps names to a sign bound (``"nonneg"``, ``"free"`` or
    ``"nonpos"``).  ``meta`` carries whatever the builder needs to interpret
    a solution (orbit tables, the instance, ...).
    """

    variables: dict = field(default_factory=dict)
    constraints: list = field(default_factory=list)
    objective: dict = field(default_factory=dict)
    sense: str = "min"
    mode: str = "exact"
    kind: str = ""
    meta: dict = field(default_factory=dict)

    def add_variable(self, name, bound: str = "nonneg"):
        if bound not in BOUNDS:
            raise ValueError(f"unknown bound {bound!r}")
        if name in self.variables:
            raise ValueError(f"duplicate variable {name!r}")
        self.variables[name] = bound
        return name

    def add_constraint(self, coeffs: Mapping, rel: str, rhs, name: str = ""):
        if rel not in RELATIONS:
            raise ValueError(f"unknown relation {rel!r}")
        exact = self.mode == "exact"
        clean = {}
        for k, v in coeffs.items():
            if k not in self.variables:
                raise KeyError(f"constraint uses unknown variable {k!r}")
            v = to_scalar(v, exact)
            if v != 0:
                clean[k] = clean.get(k, 0) + v
        self.constraints.append(Constraint(clean, rel, to_scalar(rhs, exact), name))

    def set_objective(self, coeffs: Mapping, sense: str = "min"):
        if sense not in ("min", "max"):
            raise ValueError("sense must be 'min' or 'max'")
        exact = self.mode == "exact"
        self.objective = {k: to_scalar(v, exact) for k, v in coeffs.items() if v != 0}
        self.sense = sense

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.constraints), len(self.variables)

    def residuals(self, point: Mapping) -> list:
        """Signed violation of every constraint and bound (<= 0 means satisfied)."""
        out = []
        for c in self.constraints:
            lhs = sum((v * point[k] for k, v in c.coeffs.items()), 0)
            if c.rel == "<=":
                out.append(lhs - c.rhs)
            elif c.rel == ">=":
                out.append(c.rhs - lhs)
            else:
                out.append(abs(lhs - c.rhs))
        for k, b in self.variables.items():
            if b == "nonneg":
                out.append(-point[k])
            elif b == "nonpos":
                out.append(point[k])
        return out

    def evaluate(self, point: Mapping):
        return sum((v * point[k] for k, v in self.objective.items()), 0)

    def to_json(self) -> dict:
        return {
            "kind": self.kind, "mode": self.mode, "sense": self.sense,
            "variables": {str(k): b for k, b in self.variables.items()},
            "objective": {str(k): fmt(v) for k, v in self.objective.items()},
            "constraints": [{"name": c.name, "rel": c.rel, "rhs": fmt(c.rhs),
                             "coeffs": {str(k): fmt(v) for k, v in c.coeffs.items()}}
                            for c in self.constraints],
        }


@dataclass
class LPSolution:
    status: str               # optimal | infeasible | unbounded | numeric_failure
    value: object
    point: dict
    basis: tuple
    iterations: int
    mode: str
    problem: LPProblem | None = None

    @property
    def optimal(self) -> bool:
        return self.status == "optimal"

    def to_json(self) -> dict:
        return {"status": self.status, "value": fmt(self.value), "mode": self.mode,
                "point": {str(k): fmt(v) for k, v in self.point.items()},
                "basis": [str(b) for b in self.basis], "iterations": self.iterations}


class NumericFailure(RuntimeError):
    pass


# --------------------------------------------------------------------------
# standard form

def _standard_form(lp: LPProblem):
    """min c.x, A x = b, x >= 0, b >= 0; also returns how to map back."""
    cols = []          # (variable name, sign) per structural column
    for name, bound in lp.variables.items():
        if bound == "nonneg":
            cols.append((name, 1))
        elif bound == "nonpos":
            cols.append((name, -1))
        else:
            cols.append((name, 1))
            cols.append((name, -1))
    index: dict = {}
    for j, (name, sgn) in enumerate(cols):
        index.setdefault(name, []).append((j, sgn))
    n_struct = len(cols)
    rows, rhs, slack = [], [], []
    for c in lp.constraints:
        row = {}
        for k, v in c.coeffs.items():
            for j, sgn in index[k]:
                row[j] = row.get(j, 0) + sgn * v
        r = c.rhs
        s = 1 if c.rel == "<=" else (-1 if c.rel == ">=" else 0)
        if r < 0:
            row = {j: -v for j, v in row.items()}
            r, s = -r, -s
        rows.append(row)
        rhs.append(r)
        slack.append(s)
    sign = 1 if lp.sense == "min" else -1
    cost = {}
    for k, v in lp.objective.items():
        for j, sgn in index[k]:
            cost[j] = cost.get(j, 0) + sign * sgn * v
    return cols, n_struct, rows, rhs, slack, cost


def _lcm_denominator(values) -> int:
    m = 1
    for v in values:
        if isinstance(v, Fraction):
            m = math.lcm(m, v.denominator)
    return m


# --------------------------------------------------------------------------
# tableau engines

class _ExactTableau:
    """Integer tableau ``T`` with common denominator ``d`` (true tableau = T/d)."""

    def __init__(self, T: np.ndarray):
        self.T = T            # object array of Python ints, last column = rhs
        self.d = 1

    def sign(self, v) -> int:
        return (v > 0) - (v < 0)

    def pivot(self, r: int, s: int):
        T, d = self.T, self.d
        p = T[r, s]
        row = T[r].copy()
        T = (p * T - np.outer(T[:, s], row)) // d
        T[r] = row
        if p < 0:
            T, p = -T, -p
        self.T, self.d = T, p

    def ratio_less(self, a_num, a_den, b_num, b_den) -> bool:
        return a_num * b_den < b_num * a_den

    def value(self, i: int, j: int):
        return Fraction(int(self.T[i, j]), int(self.d))

    def refactor(self, basis) -> bool:
        return False  # exact arithmetic never drifts


class _FloatTableau:
    """Gauss-Jordan tableau; rebuilt from the original rows to limit drift."""

    def __init__(self, T: np.ndarray):
        self.T = T
        self.d = 1.0
        self.A0 = T[:-1].copy()   # original constraint rows, rhs last
        self.cost = np.zeros(T.shape[1])

    def refactor(self, basis) -> bool:
        m = len(basis)
        if m == 0:
            self.T[-1] = self.cost
            return True
        B = self.A0[:, basis]
        try:
            X = np.linalg.solve(B, self.A0)
        except np.linalg.LinAlgError:
            return False  # keep the running tableau; the final point is checked anyway
        X[:, basis] = np.eye(m)
        z = self.cost - self.cost[basis] @ X
        z[basis] = 0.0
        self.T = np.vstack([X, z[None, :]])
        return True

    def sign(self, v) -> int:
        return 1 if v > FLOAT_TOL else (-1 if v < -FLOAT_TOL else 0)

    def pivot(self, r: int, s: int):
        T = self.T
        T[r] /= T[r, s]
        col = T[:, s].copy()
        col[r] = 0.0
        T -= np.outer(col, T[r])
        T[:, s] = 0.0
        T[r, s] = 1.0

    def ratio_less(self, a_num, a_den, b_num, b_den) -> bool:
        return a_num / a_den < b_num / b_den - 1e-12

    def value(self, i: int, j: int):
        return float(self.T[i, j])


def _run_phase(tab, basis: list, m: int, ncols: int, allowed: list[bool], max_iter: int):
    """Optimize the objective stored in the last row.  Returns status, pivots."""
    T = tab.T
    bland = False
    degenerate = 0
    limit = 2 * (m + ncols)
    it = 0
    fresh = True
    while True:
        T = tab.T
        z = T[m]
        s = -1
        if bland:
            for j in range(ncols):
                if allowed[j] and tab.sign(z[j]) < 0:
                    s = j
                    break
        else:
            best = None
            for j in range(ncols):
                if allowed[j] and tab.sign(z[j]) < 0 and (best is None or z[j] < best):
                    best, s = z[j], j
        if s < 0:
            if not fresh and tab.refactor(basis):
                fresh = True
                continue
            return "optimal", it
        r = -1
        for i in range(m):
            a = T[i, s]
            if tab.sign(a) <= 0:
                continue
            if r < 0:
                r = i
                continue
            rn, rd = T[r, ncols], T[r, s]
            cn = T[i, ncols]
            if tab.ratio_less(cn, a, rn, rd):
                r = i
            elif not tab.ratio_less(rn, rd, cn, a) and basis[i] < basis[r]:
                r = i
        if r < 0:
            if not fresh and tab.refactor(basis):
                fresh = True
                continue
            return "unbounded", it
        if tab.sign(T[r, ncols]) == 0:
            degenerate += 1
            if degenerate >= limit:
                bland = True
        else:
            degenerate = 0
        tab.pivot(r, s)
        basis[r] = s
        it += 1
        fresh = False
        if it % 25 == 0:
            fresh = tab.refactor(basis)
        if it > max_iter:
            raise NumericFailure("iteration limit reached")


def _exact_from_basis(rows, rhs, slack, cost, n_struct: int, basis: list):
    """Exact phase two started from a proposed basis (e.g. a float optimum).

    Columns of the guess that turn out dependent are skipped and rows left
    without a basic column get an artificial one; rows with a negative value
    share one more artificial, pivoted in at the most negative row.  A short
    phase one drives the artificials to zero.  Returns None if that fails,
    and the caller then solves from scratch.
    """
    m = len(rows)
    slack_cols = {}
    ncol = n_struct
    for i, sl in enumerate(slack):
        if sl != 0:
            slack_cols[i] = ncol
            ncol += 1
    T = np.zeros((m + 1, ncol + 1), dtype=object)
    T[:] = 0
    for i, row in enumerate(rows):
        scale = _lcm_denominator(list(row.values()) + [rhs[i]])
        for j, v in row.items():
            T[i, j] = int(v * scale)
        T[i, ncol] = int(rhs[i] * scale)
        if i in slack_cols:
            T[i, slack_cols[i]] = slack[i]
    tab = _ExactTableau(T)
    row_basis = [-1] * m
    iters = 0
    for b in basis:
        r = next((i for i in range(m) if row_basis[i] < 0 and tab.T[i, b] != 0), -1)
        if r >= 0:
            tab.pivot(r, b)
            row_basis[r] = b
            iters += 1
    max_iter = 50 * (m + ncol) + 1000
    empty = [i for i in range(m) if row_basis[i] < 0]
    neg = [i for i in range(m) if row_basis[i] >= 0 and tab.T[i, ncol] < 0]
    n_art = len(empty) + (1 if neg else 0)
    if n_art:
        T = np.zeros((m + 1, ncol + n_art + 1), dtype=object)
        T[:] = 0
        T[:, :ncol] = tab.T[:, :ncol]
        T[:, -1] = tab.T[:, ncol]
        d = tab.d
        for k, i in enumerate(empty):
            T[i, ncol + k] = -d if T[i, -1] < 0 else d
        if neg:
            for i in neg:
                T[i, ncol + n_art - 1] = -d
        tab.T = T
        for k, i in enumerate(empty):
            tab.pivot(i, ncol + k)
            row_basis[i] = ncol + k
        if neg:
            r = min(neg, key=lambda i: tab.T[i, -1])
            tab.pivot(r, ncol + n_art - 1)
            row_basis[r] = ncol + n_art - 1
        z = np.zeros(ncol + n_art + 1, dtype=object)
        z[:] = 0
        z[ncol:ncol + n_art] = tab.d
        for i, b in enumerate(row_basis):
            if b >= ncol:
                z = z - tab.T[i]
        tab.T[m] = z
        status, k = _run_phase(tab, row_basis, m, ncol + n_art, [True] * (ncol + n_art), max_iter)
        iters += k
        if status != "optimal" or tab.T[m, -1] != 0:
            return None
        keep = list(range(m))
        for i in range(m):
            if row_basis[i] < ncol:
                continue
            j = next((j for j in range(ncol) if tab.T[i, j] != 0), -1)
            if j < 0:
                keep.remove(i)  # redundant row
                continue
            tab.pivot(i, j)
            row_basis[i] = j
            iters += 1
        tab.T = tab.T[np.ix_(keep + [m], list(range(ncol)) + [ncol + n_art])]
        row_basis = [row_basis[i] for i in keep]
        m = len(keep)
    return _phase_two(tab, row_basis, m, ncol, cost, n_struct, True, max_iter, iters)


def _solve_standard(rows, rhs, slack, cost, n_struct: int, exact: bool):
    m = len(rows)
    if exact and m > 0:
        # crossover: let the float solver find the basis, then redo it exactly
        try:
            status, _, fbasis, _ = _solve_standard(rows, rhs, slack, cost, n_struct, False)
        except NumericFailure:
            status = None
        if status == "optimal" and len(fbasis) == m:
            out = _exact_from_basis(rows, rhs, slack, cost, n_struct, list(fbasis))
            if out is not None:
                return out
    # columns: structural | one slack per inequality row | artificials
    slack_cols = {}
    ncol = n_struct
    for i, s in enumerate(slack):
        if s != 0:
            slack_cols[i] = ncol
            ncol += 1
    art_rows = [i for i in range(m) if slack[i] != 1]
    art_col = {}
    for i in art_rows:
        art_col[i] = ncol
        ncol += 1
    n_real = n_struct + len(slack_cols)
    if exact:
        T = np.zeros((m + 1, ncol + 1), dtype=object)
        T[:] = 0
    else:
        T = np.zeros((m + 1, ncol + 1))
    for i, row in enumerate(rows):
        vals = list(row.values()) + [rhs[i]]
        scale = _lcm_denominator(vals) if exact else 1.0
        if exact:
            for j, v in row.items():
                T[i, j] = int(v * scale)
            T[i, ncol] = int(rhs[i] * scale)
        else:
            for j, v in row.items():
                T[i, j] = float(v)
            T[i, ncol] = float(rhs[i])
        if i in slack_cols:
            T[i, slack_cols[i]] = slack[i]
        if i in art_col:
            T[i, art_col[i]] = 1
    basis = [slack_cols[i] if slack[i] == 1 else art_col[i] for i in range(m)]
    tab = _ExactTableau(T) if exact else _FloatTableau(T)
    max_iter = 50 * (m + ncol) + 1000
    iters = 0
    if art_rows:
        z = np.zeros(ncol + 1, dtype=object) if exact else np.zeros(ncol + 1)
        if exact:
            z[:] = 0
        for i in art_rows:
            z = z - T[i]
        for i in art_rows:
            z[art_col[i]] = 0
        T[m] = z
        if not exact:
            for i in art_rows:
                tab.cost[art_col[i]] = 1.0
        status, k = _run_phase(tab, basis, m, ncol, [True] * ncol, max_iter)
        iters += k
        T = tab.T
        infeas = -T[m, ncol]
        if tab.sign(infeas) > 0:
            if not exact and abs(infeas) < 1e-7:
                raise NumericFailure("phase one ended near feasibility boundary")
            return "infeasible", None, None, iters
        # drive zero-level artificials out of the basis
        keep = list(range(m))
        for i in range(m):
            if basis[i] < n_real:
                continue
            s = next((j for j in range(n_real) if tab.sign(tab.T[i, j]) != 0), -1)
            if s < 0:
                keep.remove(i)
                continue
            tab.pivot(i, s)
            basis[i] = s
            iters += 1
        T = tab.T
        rows_idx = keep + [m]
        cols_idx = list(range(n_real)) + [ncol]
        T = T[np.ix_(rows_idx, cols_idx)]
        basis = [basis[i] for i in keep]
        m = len(keep)
        tab.T = T
        if not exact:
            tab.A0 = tab.A0[np.ix_(keep, cols_idx)]
    else:
        cols_idx = list(range(n_real)) + [ncol]
        tab.T = T[:, cols_idx]
        if not exact:
            tab.A0 = tab.A0[:, cols_idx]
    return _phase_two(tab, basis, m, n_real, cost, n_struct, exact, max_iter, iters)


def _phase_two(tab, basis, m, ncol, cost, n_struct, exact, max_iter, iters):
    T = tab.T
    # phase two objective row: d*c - sum_i c_{B_i} T[i]
    if exact:
        lam = _lcm_denominator(cost.values())
        c = np.zeros(ncol + 1, dtype=object)
        c[:] = 0
        for j, v in cost.items():
            c[j] = int(v * lam)
        z = c * tab.d
        for i, b in enumerate(basis):
            if c[b] != 0:
                z = z - c[b] * T[i]
        # z holds d*lam*(reduced costs); its rhs entry is -d*lam*objective
    else:
        lam = 1.0
        c = np.zeros(ncol + 1)
        for j, v in cost.items():
            c[j] = float(v)
        z = c.copy()
        for i, b in enumerate(basis):
            if c[b] != 0:
                z -= c[b] * T[i]
    tab.T = np.vstack([T[:m], z[None, :]])
    if exact:
        tab.T = tab.T.astype(object)
    else:
        tab.cost = c
    status, k = _run_phase(tab, basis, m, ncol, [True] * ncol, max_iter)
    iters += k
    if status == "unbounded":
        return "unbounded", None, None, iters
    T = tab.T
    x = [Fraction(0) if exact else 0.0] * ncol
    for i, b in enumerate(basis):
        x[b] = tab.value(i, ncol)
    if not exact:
        x = [0.0 if abs(v) < 1e-13 else v for v in x]
    return "optimal", x[:n_struct], tuple(basis), iters


def solve_lp(lp: LPProblem) -> LPSolution:
    """Solve ``lp`` in its declared mode; the reported point is checked."""
    exact = lp.mode == "exact"
    cols, n_struct, rows, rhs, slack, cost = _standard_form(lp)
    try:
        status, x, basis, iters = _solve_standard(rows, rhs, slack, cost, n_struct, exact)
    except NumericFailure:
        return LPSolution("numeric_failure", math.nan, {}, (), 0, lp.mode, lp)
    if status != "optimal":
        value = math.inf if (status == "infeasible") == (lp.sense == "min") else -math.inf
        return LPSolution(status, value, {}, (), iters, lp.mode, lp)
    point = {name: (Fraction(0) if exact else 0.0) for name in lp.variables}
    for j, (name, sgn) in enumerate(cols):
        point[name] += sgn * x[j]
    value = lp.evaluate(point)
    if not exact:
        scale = max([1.0] + [abs(float(c.rhs)) for c in lp.constraints])
        viol = max(lp.residuals(point), default=0.0)
        if viol > 1e-7 * scale:
            return LPSolution("numeric_failure", value, point, (), iters, lp.mode, lp)
    else:
        assert max(lp.residuals(point), default=0) <= 0, "exact simplex produced an infeasible point"
    names = []
    for b in basis:
        names.append(cols[b][0] if b < n_struct else f"slack{b - n_struct}")
    return LPSolution("optimal", value, point, tuple(names), iters, lp.mode, lp)
