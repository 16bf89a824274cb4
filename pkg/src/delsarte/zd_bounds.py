"""Two-sided bounds for the Delsarte constant of a finite set in Z^d (d <= 2).

Lower bounds come from admissible functions supported in ``[-m, m]^d``;
upper bounds from dual certificates

    -lambda - s delta_0 = nu - kappa,   kappa >= 0 off omega,  nu of positive type,

which bound the constant by ``-s`` through weak duality.  Here ``nu`` is a
finitely supported positive definite part plus a nonnegative combination of
periodic characters ``x -> cos(x . theta)`` (positive type, spectrum a point
mass), so ``kappa = 1 + sum c_theta cos(x . theta)`` outside the window is
checked over one period.  On Z the search is exact; on Z^2 it runs in float
and the final certificates rest on certified torus minima.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ._scalars import Verdict, fmt
from .groups import Element, GroupSpec, element_str, iter_box
from .simplex import LPProblem, solve_lp
from .spectral import (GroupFunction, cosine_polynomial, is_positive_definite, nonnegative_on_interval,
                       trig_poly_min_certified)

PERIOD = 12          # every character used below is periodic with this period
MAX_ROUNDS = 40
SHIFT_TOL = 1e-9     # float cutting planes stop once the certified minimum is this close

# angles k/12 of a full turn whose cosines are rational at every integer
_RATIONAL_STEPS = (0, 2, 3, 4, 6)
_COS12 = {0: Fraction(1), 1: None, 2: Fraction(1, 2), 3: Fraction(0), 4: Fraction(-1, 2),
          5: None, 6: Fraction(-1), 7: None, 8: Fraction(-1, 2), 9: Fraction(0),
          10: Fraction(1, 2), 11: None}


def _free(d: int) -> GroupSpec:
    return GroupSpec("free", rank=d)


def _omega_points(d: int, omega) -> list[Element]:
    g = _free(d)
    pts = {g.elem(x) for x in omega}
    pts |= {g.neg(x) for x in pts}  # f is even, so only omega ∩ (-omega) matters
    pts = {x for x in pts if g.neg(x) in {g.elem(y) for y in omega}}
    if g.zero not in pts:
        raise ValueError("omega must contain 0")
    return sorted(pts)


def extent(omega_pts) -> int:
    return max((max(abs(c) for c in x) for x in omega_pts), default=0)


def _orbits(d: int, radius: int) -> list[tuple[Element, ...]]:
    seen, out = set(), []
    for x in iter_box(d, radius):
        if x in seen:
            continue
        nx = tuple(-c for c in x)
        orb = (x,) if nx == x else (x, nx)
        seen.update(orb)
        out.append(orb)
    return out


def _chebyshev_values(t: Fraction, n: int) -> list[Fraction]:
    vals = [Fraction(1), t]
    for _ in range(2, n + 1):
        vals.append(2 * t * vals[-1] - vals[-2])
    return vals[: n + 1]


def _initial_t(m: int) -> list[Fraction]:
    pts = {Fraction(-1), Fraction(1), Fraction(0), Fraction(1, 2), Fraction(-1, 2)}
    count = 4 * m + 4
    for j in range(count):
        pts.add(Fraction(math.cos(math.pi * (j + 0.5) / count)).limit_denominator(1000))
    return sorted(pts)


def _float_minima(coeffs: list[float], count: int = 4) -> list[float]:
    """Approximate local minimizers in [-1, 1] of a Chebyshev series, lowest first."""
    deg = len(coeffs) - 1
    grid = np.cos(np.linspace(0, np.pi, max(400, 40 * deg)))
    vals = np.polynomial.chebyshev.chebval(grid, coeffs)
    idx = [i for i in range(len(grid))
           if (i == 0 or vals[i] <= vals[i - 1]) and (i == len(grid) - 1 or vals[i] <= vals[i + 1])]
    idx.sort(key=lambda i: vals[i])
    out = []
    for i in idx[:count]:
        lo, hi = grid[min(i + 1, len(grid) - 1)], grid[max(i - 1, 0)]
        xs = np.linspace(lo, hi, 201)
        ys = np.polynomial.chebyshev.chebval(xs, coeffs)
        out.append(float(xs[int(np.argmin(ys))]))
    return out


def _to_rational_t(t: float) -> Fraction:
    return Fraction(max(-1.0, min(1.0, t))).limit_denominator(10**6)


def _grid_thetas(n: int) -> list[tuple[float, float]]:
    h = 2 * math.pi / n
    return [(i * h, j * h) for i in range(n) for j in range(n // 2 + 1)]


# --------------------------------------------------------------------------
# primal side

@dataclass
class LowerBound:
    value: object
    witness: GroupFunction
    window: int
    rounds: int
    margin: object
    shifted: bool = False

    def to_json(self) -> dict:
        return {"value": fmt(self.value), "window": self.window, "rounds": self.rounds,
                "margin": fmt(self.margin), "shifted": self.shifted,
                "witness": self.witness.to_json()["atoms"]}


def primal_lower_bound(d: int, omega, m: int) -> LowerBound:
    """Best certified ``sum f`` over admissible ``f`` supported in ``[-m, m]^d``.

    Admissible: ``f(0) = 1``, ``f <= 0`` off ``omega``, positive definite.
    Positive definiteness enters an LP through sampled spectral constraints;
    the sample set grows at the spectral minimizers until the LP optimizer
    is certified.  If the rounds run out, ``f`` is mixed with ``delta_0``
    just enough to become positive definite.
    """
    if d not in (1, 2):
        raise ValueError("only d = 1 and d = 2 are supported")
    if m < 0:
        raise ValueError("window must be >= 0")
    om = _omega_points(d, omega)
    orbits = [o for o in _orbits(d, m) if o[0] != (0,) * d]
    exact = d == 1
    lp = LPProblem(mode="exact" if exact else "float", kind="zd_primal")
    for i, o in enumerate(orbits):
        lp.add_variable(i, "free")
        lp.add_constraint({i: 1}, "<=", 1)
        lp.add_constraint({i: 1}, ">=", -1)
        if any(x not in om for x in o):
            lp.add_constraint({i: 1}, "<=", 0, name=f"sign{i}")
    lp.set_objective({i: len(o) for i, o in enumerate(orbits)}, "max")
    g = _free(d)

    def add_cut_t(t: Fraction):
        T = _chebyshev_values(t, m)
        lp.add_constraint({i: 2 * T[abs(o[0][0])] for i, o in enumerate(orbits)}, ">=", -1)

    def add_cut_theta(th):
        lp.add_constraint({i: sum(math.cos(x[0] * th[0] + x[1] * th[1]) for x in o)
                           for i, o in enumerate(orbits)}, ">=", -1)

    if exact:
        for t in _initial_t(m):
            add_cut_t(t)
    else:
        for th in _grid_thetas(max(8, 4 * m)):
            add_cut_theta(th)
    f = GroupFunction.delta(g)
    rounds = 0
    certified = False
    for rounds in range(1, MAX_ROUNDS + 1):
        sol = solve_lp(lp)
        if sol.status != "optimal":
            raise ValueError(f"window LP failed: {sol.status}")
        vals = {(0,) * d: Fraction(1) if exact else 1.0}
        for i, o in enumerate(orbits):
            for x in o:
                vals[x] = sol.point[i]
        f = GroupFunction(g, vals, exact=None if exact else False)
        if not orbits:
            certified = True
            break
        if exact:
            v = nonnegative_on_interval(cosine_polynomial(f))
            if v.ok:
                certified = True
                break
            if v.value >= -SHIFT_TOL:
                break  # cuts converge slowly onto a double zero; shift instead
            a = [float(f((0,)))] + [2 * float(f((k,))) for k in range(1, m + 1)]
            cuts = {_to_rational_t(t) for t in _float_minima(a)}
            cuts.add(v.witness)
            for t in cuts:
                add_cut_t(t)
        else:
            fr = _rationalize(f)
            if all(fr(x) <= 0 for x in fr.support() if x not in om) and is_positive_definite(fr).ok:
                f, exact, certified = fr, True, True
                break
            cb = trig_poly_min_certified(f, 1 << 10)
            if cb.bound >= 0:
                certified = True
                break
            if cb.bound >= -SHIFT_TOL:
                break  # spectra touching zero never certify; the shift below costs O(SHIFT_TOL)
            add_cut_theta(cb.argmin)
            _add_grid_cuts(f, add_cut_theta)
    value = f.total()
    shifted = False
    if certified:
        margin = Fraction(0) if exact else trig_poly_min_certified(f, 1 << 10).bound
    else:
        f, value, margin = _shift_to_pd(f, exact)
        shifted = True
    return LowerBound(value, f, m, rounds, margin, shifted)


def _rationalize(f: GroupFunction, den: int = 10**6) -> GroupFunction:
    return GroupFunction(f.group, {x: Fraction(v).limit_denominator(den) for x, v in f.items()})


def _add_grid_cuts(f: GroupFunction, add_cut_theta, n: int = 64, count: int = 4):
    pts = np.array(list(f.values), dtype=float)
    w = np.array([float(v) for v in f.values.values()])
    ths = np.array(_grid_thetas(n))
    vals = np.cos(ths @ pts.T) @ w
    for i in np.argsort(vals)[:count]:
        if vals[i] < 0:
            add_cut_theta(tuple(ths[i]))


def _shift_to_pd(f: GroupFunction, exact: bool):
    """``(f + eta delta_0) / (1 + eta)`` with the smallest convenient ``eta``."""
    g = f.group
    if exact:
        a = [float(f((0,)))] + [2 * float(f((k,))) for k in range(1, f.radius() + 1)]
        low = min(float(np.polynomial.chebyshev.chebval(t, a)) for t in np.cos(np.linspace(0, np.pi, 20001)))
        eta = max(Fraction(max(0.0, -low) * (1 + 1e-6)).limit_denominator(10**12), Fraction(1, 10**12))
        while True:
            h = (f + GroupFunction.delta(g, None, eta)) / (1 + eta)
            if nonnegative_on_interval(cosine_polynomial(h)).ok:
                return h, (f.total() + eta) / (1 + eta), Fraction(0)
            eta *= 2
    cb = trig_poly_min_certified(f, 1 << 10)
    eta = max(0.0, -cb.bound)
    h = (f + GroupFunction.delta(g, None, eta)) / (1 + eta)
    return h, (float(f.total()) + eta) / (1 + eta), trig_poly_min_certified(h, 1 << 10).bound


# --------------------------------------------------------------------------
# dual side

def _theta_orbits(d: int, exact: bool) -> list[tuple[int, ...]]:
    """Representatives (in twelfths of a turn) of the character angles used."""
    steps = _RATIONAL_STEPS if exact else range(PERIOD)
    seen, out = set(), []
    for k in itertools.product(range(PERIOD), repeat=d):
        if exact and any(c not in steps and (PERIOD - c) % PERIOD not in steps for c in k):
            continue
        if k in seen:
            continue
        nk = tuple((-c) % PERIOD for c in k)
        seen.update({k, nk})
        out.append(k)
    return out


def _char_value(k: tuple[int, ...], x: Element, exact: bool):
    phase = sum(a * b for a, b in zip(k, x)) % PERIOD
    if exact:
        v = _COS12[phase]
        if v is None:
            raise ValueError("irrational character value in exact mode")
        return v
    return math.cos(2 * math.pi * phase / PERIOD)


@dataclass
class ZdCertificate:
    """``-lambda - s delta_0 = nu - kappa`` on Z^d with ``nu = nu_fin + sum c cos(x . theta)``."""

    d: int
    omega: list
    window: int
    s: object
    nu_finite: GroupFunction
    characters: dict             # angle (twelfths of a turn) -> weight >= 0
    kappa: GroupFunction         # values inside the window
    exact: bool = True

    @property
    def upper(self):
        return -self.s

    def nu(self, x):
        return self.nu_finite(x) + sum((c * _char_value(k, x, self.exact)
                                        for k, c in self.characters.items()), 0 * self.s)

    def kappa_at(self, x):
        if all(abs(c) <= self.window for c in x):
            return self.kappa(x)
        return 1 + sum((c * _char_value(k, x, self.exact) for k, c in self.characters.items()), 0 * self.s)

    def to_json(self) -> dict:
        return {"d": self.d, "window": self.window, "s": fmt(self.s), "upper": fmt(self.upper),
                "omega": [element_str(x) for x in self.omega],
                "nu_finite": self.nu_finite.to_json()["atoms"],
                "characters": {",".join(map(str, k)) + "/12": fmt(v) for k, v in self.characters.items()},
                "kappa": self.kappa.to_json()["atoms"]}


def verify_zd_certificate(cert: ZdCertificate, omega=None, resolution: int | None = None) -> Verdict:
    """Independent recheck of a Z^d certificate (identity, signs, positivity)."""
    d, n = cert.d, cert.window
    om = _omega_points(d, cert.omega if omega is None else omega)
    tol = 0 if cert.exact else 1e-9
    if extent(om) > n:
        return Verdict(False, reason="omega does not fit in the certificate window")
    for k, c in cert.characters.items():
        if c < 0:
            return Verdict(False, reason="negative character weight", witness=k, value=c)
    zero = (0,) * d
    worst = 0
    for x in iter_box(d, n):
        lhs = -1 - (cert.s if x == zero else 0)
        rhs = cert.nu(x) - cert.kappa(x)
        if abs(lhs - rhs) > tol:
            return Verdict(False, reason="identity -lambda - s delta_0 = nu - kappa fails",
                           witness=x, value=lhs - rhs)
        worst = max(worst, abs(lhs - rhs))
        kv = cert.kappa(x)
        if kv < -tol:
            return Verdict(False, reason="kappa >= 0 violated", witness=x, value=kv)
        if x in om and abs(kv) > tol:
            return Verdict(False, reason="kappa is not supported off omega", witness=x, value=kv)
    # outside the window kappa = 1 + sum c cos(x . theta); one period covers every x
    for r in itertools.product(range(PERIOD), repeat=d):
        v = 1 + sum((c * _char_value(k, r, cert.exact) for k, c in cert.characters.items()), 0 * cert.s)
        if v < -tol:
            return Verdict(False, reason="kappa negative outside the window", witness=r, value=v)
    if cert.nu_finite.radius() > n:
        return Verdict(False, reason="finite part of nu leaves the window")
    if d == 1 and cert.exact:
        pv = nonnegative_on_interval(cosine_polynomial(cert.nu_finite))
        if not cert.nu_finite.is_even() or not pv.ok:
            return Verdict(False, reason="nu is not of positive type", value=pv.value)
        margin = pv.value
    else:
        if not cert.nu_finite.is_even(tol=1e-12):
            return Verdict(False, reason="nu is not even")
        cb = trig_poly_min_certified(cert.nu_finite, resolution or (1 << 10))
        margin = cb.bound
        if margin < -tol:
            # a nearby rational nu may be exactly positive definite; the
            # rounding distance then bounds how negative the spectrum can be
            nr = _rationalize(cert.nu_finite)
            if is_positive_definite(nr).ok:
                margin = -sum(abs(float(v) - float(nr(x))) for x, v in cert.nu_finite.items())
        if margin < -tol:
            return Verdict(False, reason="nu is not of positive type", value=cb.bound)
    return Verdict(True, reason="certificate verified", value=cert.upper, margin=margin,
                   details={"identity_residual": worst})


@dataclass
class UpperBound:
    value: object
    certificate: ZdCertificate | None
    degree: int
    rounds: int
    verdict: Verdict | None = None

    def to_json(self) -> dict:
        return {"value": fmt(self.value), "degree": self.degree, "rounds": self.rounds,
                "certificate": None if self.certificate is None else self.certificate.to_json()}


def dual_upper_bound(d: int, omega, n: int) -> UpperBound:
    """Smallest ``-s`` over certificates whose finite parts live in ``[-n, n]^d``.

    Returns ``+inf`` when ``omega`` does not fit in the window.
    """
    if d not in (1, 2):
        raise ValueError("only d = 1 and d = 2 are supported")
    om = _omega_points(d, omega)
    if extent(om) > n:
        return UpperBound(math.inf, None, n, 0)
    exact = d == 1
    g = _free(d)
    zero = (0,) * d
    orbits = _orbits(d, n)
    thetas = _theta_orbits(d, exact)
    lp = LPProblem(mode="exact" if exact else "float", kind="zd_dual")
    lp.add_variable("s", "free")
    for k in thetas:
        lp.add_variable(("c", k))
    for i, o in enumerate(orbits):
        lp.add_variable(("nu", i), "free")
        if any(x not in om for x in o):
            lp.add_variable(("kappa", i))
    i0 = next(i for i, o in enumerate(orbits) if o[0] == zero)
    for i, o in enumerate(orbits):
        x = o[0]
        coeffs = {("nu", i): 1}
        for k in thetas:
            coeffs[("c", k)] = _char_value(k, x, exact)
        if ("kappa", i) in lp.variables:
            coeffs[("kappa", i)] = -1
        if i == i0:
            coeffs["s"] = 1
        lp.add_constraint(coeffs, "==", -1, name=f"identity{i}")
        if i != i0:  # |nu(x)| <= nu(0), valid for positive definite nu
            lp.add_constraint({("nu", i): 1, ("nu", i0): -1}, "<=", 0)
            lp.add_constraint({("nu", i): 1, ("nu", i0): 1}, ">=", 0)
    for r in itertools.product(range(PERIOD), repeat=d):
        lp.add_constraint({("c", k): _char_value(k, r, exact) for k in thetas}, ">=", -1)
    lp.set_objective({"s": 1}, "max")

    def add_cut_t(t: Fraction):
        T = _chebyshev_values(t, n)
        lp.add_constraint({("nu", i): (1 if i == i0 else 2) * T[abs(o[0][0])]
                           for i, o in enumerate(orbits)}, ">=", 0)

    def add_cut_theta(th):
        lp.add_constraint({("nu", i): sum(math.cos(x[0] * th[0] + x[1] * th[1]) for x in o)
                           for i, o in enumerate(orbits)}, ">=", 0)

    if exact:
        for t in _initial_t(n):
            add_cut_t(t)
    else:
        for th in _grid_thetas(max(8, 4 * n)):
            add_cut_theta(th)
    rounds = 0
    nu_fin = None
    for rounds in range(1, MAX_ROUNDS + 1):
        sol = solve_lp(lp)
        if sol.status != "optimal":
            return UpperBound(math.inf, None, n, rounds)
        nu_fin = _nu_from(sol, orbits, g, exact)
        if exact:
            v = nonnegative_on_interval(cosine_polynomial(nu_fin))
            if v.ok or v.value >= -SHIFT_TOL:
                break
            a = [float(nu_fin((0,)))] + [2 * float(nu_fin((k,))) for k in range(1, n + 1)]
            cuts = {_to_rational_t(t) for t in _float_minima(a)}
            cuts.add(v.witness)
            for t in cuts:
                add_cut_t(t)
        else:
            cb = trig_poly_min_certified(nu_fin, 1 << 10)
            if cb.bound >= -SHIFT_TOL or is_positive_definite(_rationalize(nu_fin)).ok:
                break
            add_cut_theta(cb.argmin)
            _add_grid_cuts(nu_fin, add_cut_theta)
    s = sol.point["s"]
    # lift nu by eta delta_0 if the spectral cuts did not close
    nr = None if exact else _rationalize(nu_fin)
    if nr is not None and is_positive_definite(nr).ok:
        nu_fin, eta = GroupFunction(g, {x: float(v) for x, v in nr.items()}, exact=False), 0
    else:
        eta = _pd_shift(nu_fin, exact)
    if eta:
        nu_fin = nu_fin + GroupFunction.delta(g, None, eta)
        s = s - eta
    kappa = {}
    for i, o in enumerate(orbits):
        if ("kappa", i) in lp.variables:
            for x in o:
                kappa[x] = sol.point[("kappa", i)]
    chars = {k: sol.point[("c", k)] for k in thetas if sol.point[("c", k)] != 0}
    cert = ZdCertificate(d, om, n, s, nu_fin, chars,
                         GroupFunction(g, kappa, exact=None if exact else False), exact)
    ver = verify_zd_certificate(cert)
    if not ver.ok:
        return UpperBound(math.inf, cert, n, rounds, ver)
    return UpperBound(cert.upper, cert, n, rounds, ver)


def _nu_from(sol, orbits, g, exact) -> GroupFunction:
    vals = {}
    for i, o in enumerate(orbits):
        for x in o:
            vals[x] = sol.point[("nu", i)]
    return GroupFunction(g, vals, exact=None if exact else False)


def _pd_shift(nu: GroupFunction, exact: bool):
    """Smallest convenient ``eta >= 0`` making ``nu + eta delta_0`` positive definite."""
    g = nu.group
    if exact:
        if nonnegative_on_interval(cosine_polynomial(nu)).ok:
            return Fraction(0)
        r = max(nu.radius(), 0)
        a = [float(nu((0,)))] + [2 * float(nu((k,))) for k in range(1, r + 1)]
        low = min(float(np.polynomial.chebyshev.chebval(t, a)) for t in np.cos(np.linspace(0, np.pi, 20001)))
        eta = max(Fraction(max(0.0, -low) * (1 + 1e-6)).limit_denominator(10**12), Fraction(1, 10**12))
        while not nonnegative_on_interval(cosine_polynomial(nu + GroupFunction.delta(g, None, eta))).ok:
            eta *= 2
        return eta
    cb = trig_poly_min_certified(nu, 1 << 10)
    return max(0.0, -cb.bound)


# --------------------------------------------------------------------------
# sandwich

@dataclass
class SandwichRow:
    m: int
    n: int
    lower: object
    upper: object
    lower_witness: LowerBound
    upper_witness: UpperBound

    @property
    def gap(self):
        return self.upper - self.lower

    def csv_fields(self) -> list[str]:
        return [str(self.m), str(self.n), fmt(self.lower), fmt(self.upper), fmt(self.gap),
                fmt(self.lower_witness.margin),
                fmt(self.upper_witness.verdict.margin if self.upper_witness.verdict else "")]


CSV_HEADER = ["m", "n", "lower", "upper", "gap", "lower_margin", "upper_margin"]


def default_schedule(omega, steps: int = 6) -> list[tuple[int, int]]:
    """``(e, e + 1), (e + 1, e + 2), ...`` where ``e`` is the extent of omega."""
    e = max((max(abs(c) for c in (x if isinstance(x, (tuple, list)) else (x,))) for x in omega), default=0)
    return [(e + k, e + k + 1) for k in range(steps)]


def sandwich(d: int, omega, schedule=None, tol=0) -> list[SandwichRow]:
    """Run a schedule of ``(m, n)`` pairs; columns are running best bounds.

    Stops at the first row where the bounds meet (or are within ``tol``).
    """
    schedule = schedule or default_schedule(list(omega))
    rows = []
    best_low, best_up = None, None
    for m, n in schedule:
        lo = primal_lower_bound(d, omega, m)
        up = dual_upper_bound(d, omega, n)
        if best_low is None or lo.value > best_low.value:
            best_low = lo
        if best_up is None or up.value < best_up.value:
            best_up = up
        if best_low.value > best_up.value + (0 if d == 1 else 1e-7):
            raise RuntimeError("weak duality violated: lower bound above upper bound")
        row = SandwichRow(m, n, best_low.value, best_up.value, best_low, best_up)
        rows.append(row)
        if best_up.value - best_low.value <= tol:
            break
    return rows
