"""The Delsarte extremal problem on a finite group and its LP dual.

Primal:  alpha = inf <f, rho>  over positive definite f with <f, sigma> = 1,
         f <= 0 off Omega+ and (two-sided) f >= 0 off Omega-.
Dual:    omega = sup s  with  rho - s sigma = nu - kappa (+ kappa'),
         kappa >= 0 on Omega+^c, kappa' >= 0 on Omega-^c, nu of positive type.

Both programs live on the quotient by inversion ``x -> -x``: ``rho`` and
``sigma`` are replaced by their even parts and an even positive definite
``f`` is written as ``f = (1/|G|) sum_j g_j C_j`` with ``g_j >= 0`` the
transform on the j-th dual orbit and ``C_j(x) = sum_{y in O_j} cos 2 pi <x, y>``.
Odd components pair to zero with every even ``f`` and drop out.

The Delsarte constant is ``-alpha`` for ``rho = -lambda`` (counting measure)
and ``sigma = delta_0``.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

from ._scalars import FLOAT_TOL, Verdict, fmt
from .functionals import MeasureFunctional, in_QA_dual, is_positive_type, orbit_cosine_sums
from .groups import GroupSpec, Region
from .simplex import LPProblem, LPSolution, solve_lp
from .spectral import GroupFunction, is_strictly_pd

GAP_TOL = 1e-6


class WeakDualityError(RuntimeError):
    """Dual value above primal value: a solver bug, never a property of the data."""


@dataclass
class Instance:
    """One (generalized) Delsarte problem on a finite group."""

    group: GroupSpec
    omega: Region
    rho: MeasureFunctional
    sigma: MeasureFunctional
    omega_minus: Region | None = None
    mode: str = "exact"

    @property
    def two_sided(self) -> bool:
        return self.omega_minus is not None

    def to_json(self) -> dict:
        out = {"group": self.group.to_json(), "omega": self.omega.to_json(),
               "rho": self.rho.to_json(), "sigma": self.sigma.to_json(), "mode": self.mode}
        if self.omega_minus is not None:
            out["omega_minus"] = self.omega_minus.to_json()
        return out


def resolve_mode(group: GroupSpec, mode: str | None, *functionals) -> str:
    """Pick "exact" or "float"; explicit exact on a bad exponent is an error."""
    if not group.is_finite:
        raise ValueError("the LP formulation needs a finite group")
    if mode == "exact":
        if not group.exact_available:
            raise ValueError(f"exact mode unavailable: exponent {group.exponent}")
        if not all(f.exact for f in functionals):
            raise ValueError("exact mode requires rational data")
        return "exact"
    if mode == "float":
        return "float"
    if mode not in (None, "auto"):
        raise ValueError(f"unknown mode {mode!r}")
    ok = group.exact_available and all(f.exact for f in functionals)
    return "exact" if ok else "float"


def make_instance(group: GroupSpec, omega, rho=None, sigma=None, omega_minus=None,
                  mode: str | None = None) -> Instance:
    """Defaults: ``rho = -lambda`` and ``sigma = delta_0`` (the Delsarte setting)."""
    if not isinstance(omega, Region):
        omega = Region.of(group, omega)
    if omega_minus is not None and not isinstance(omega_minus, Region):
        omega_minus = Region.of(group, omega_minus)
    rho = MeasureFunctional.haar(group, -1) if rho is None else rho
    sigma = MeasureFunctional.delta(group) if sigma is None else sigma
    mode = resolve_mode(group, mode, rho, sigma)
    if mode == "float":
        rho, sigma = rho.as_float(), sigma.as_float()
    return Instance(group, omega, rho, sigma, omega_minus, mode)


@dataclass
class _Reduced:
    """Orbit data shared by the primal and dual programs."""

    orbits: list
    C: object            # C[i][j] = sum_{x in O_i} cos 2 pi <x, y_j>
    K: object            # K[i][j] = sum_{y in O_j} cos 2 pi <x_i, y> = C[j][i]
    rho_e: list          # even part of rho on group orbit representatives
    sigma_e: list
    rho_hat: list        # transforms on dual orbit representatives
    sigma_hat: list
    n: int


def _reduce(inst: Instance) -> _Reduced:
    g = inst.group
    exact = inst.mode == "exact"
    if inst.omega.complement is False and not inst.omega.members <= set(g.elements()):
        raise ValueError("omega contains elements outside the group")
    strict = is_strictly_pd(inst.sigma.even_odd_split()[0])
    if not strict.ok:
        raise ValueError(f"sigma is not strictly positive definite (Wiener condition fails at {strict.witness})")
    orbits, C = orbit_cosine_sums(g, exact)
    rho = inst.rho.to_function()
    sig = inst.sigma.to_function()

    def even_value(f, o):
        return sum((f(x) for x in o), f._zero()) / len(o)

    rho_e = [even_value(rho, o) for o in orbits]
    sig_e = [even_value(sig, o) for o in orbits]
    m = len(orbits)
    rho_hat = [sum((rho_e[i] * C[i][j] for i in range(m)), rho._zero()) for j in range(m)]
    sig_hat = [sum((sig_e[i] * C[i][j] for i in range(m)), sig._zero()) for j in range(m)]
    K = [[C[j][i] for j in range(m)] for i in range(m)]
    return _Reduced(orbits, C, K, rho_e, sig_e, rho_hat, sig_hat, g.order)


def _sign_orbits(inst: Instance, red: _Reduced):
    upper = [i for i, o in enumerate(red.orbits) if any(x not in inst.omega for x in o)]
    lower = []
    if inst.omega_minus is not None:
        lower = [i for i, o in enumerate(red.orbits) if any(x not in inst.omega_minus for x in o)]
    return upper, lower


def build_primal(inst: Instance) -> LPProblem:
    """Primal program in the dual-orbit variables ``g_j >= 0``."""
    red = _reduce(inst)
    if inst.group.zero not in inst.omega:
        warnings.warn("0 is outside omega: with sigma concentrated at 0 the primal is infeasible",
                      stacklevel=2)
    n, m = red.n, len(red.orbits)
    lp = LPProblem(mode=inst.mode, kind="primal", meta={"instance": inst, "reduced": red})
    for j in range(m):
        lp.add_variable(("g", j))
    upper, lower = _sign_orbits(inst, red)
    for i in upper:
        lp.add_constraint({("g", j): red.K[i][j] / n for j in range(m)}, "<=", 0, name=f"f<=0@{i}")
    for i in lower:
        lp.add_constraint({("g", j): red.K[i][j] / n for j in range(m)}, ">=", 0, name=f"f>=0@{i}")
    sizes = [len(o) for o in red.orbits]
    lp.add_constraint({("g", j): sizes[j] * red.sigma_hat[j] / n for j in range(m)}, "==", 1, name="norm")
    lp.set_objective({("g", j): sizes[j] * red.rho_hat[j] / n for j in range(m)}, "min")
    return lp


def build_dual(inst: Instance) -> LPProblem:
    """Dual program: maximize ``s`` with the orbitwise identity ``rho_e - s sigma_e = nu - kappa_e (+ kappa'_e)``."""
    red = _reduce(inst)
    n, m = red.n, len(red.orbits)
    lp = LPProblem(mode=inst.mode, kind="dual", meta={"instance": inst, "reduced": red})
    lp.add_variable("s", "free")
    for j in range(m):
        lp.add_variable(("nu", j))
    upper, lower = _sign_orbits(inst, red)
    for i in upper:
        lp.add_variable(("kappa", i))
    for i in lower:
        lp.add_variable(("kappa_minus", i))
    for i in range(m):
        coeffs = {("nu", j): red.K[i][j] / n for j in range(m)}
        coeffs["s"] = red.sigma_e[i]
        if i in upper:
            coeffs[("kappa", i)] = -1
        if i in lower:
            coeffs[("kappa_minus", i)] = 1
        lp.add_constraint(coeffs, "==", red.rho_e[i], name=f"identity@{i}")
    lp.set_objective({"s": 1}, "max")
    return lp


def solve(problem: LPProblem) -> LPSolution:
    return solve_lp(problem)


# --------------------------------------------------------------------------
# witnesses and certificates

@dataclass
class DualCertificate:
    """``rho_e - s sigma_e = nu - kappa_e + kappa_minus_e`` with the cone memberships."""

    s: object
    kappa: MeasureFunctional
    nu: MeasureFunctional
    kappa_minus: MeasureFunctional | None = None
    gap_to_primal: object = None

    def to_json(self) -> dict:
        out = {"s": fmt(self.s), "kappa": self.kappa.to_json(), "nu": self.nu.to_json()}
        if self.kappa_minus is not None:
            out["kappa_minus"] = self.kappa_minus.to_json()
        if self.gap_to_primal is not None:
            out["gap_to_primal"] = fmt(self.gap_to_primal)
        return out


def _spread(inst: Instance, red: _Reduced, values: dict, region: Region) -> GroupFunction:
    """Place orbit values on the part of each orbit outside ``region``.

    An orbit meeting the complement in a single point gets twice the value
    there, so the even part is unchanged.
    """
    out = {}
    for i, t in values.items():
        if t == 0:
            continue
        o = red.orbits[i]
        inside = [x for x in o if x not in region]
        for x in inside:
            out[x] = t * len(o) / len(inside)
    return GroupFunction(inst.group, out, exact=None if inst.mode == "exact" else False)


def primal_witness(sol: LPSolution) -> GroupFunction:
    inst, red = sol.problem.meta["instance"], sol.problem.meta["reduced"]
    m, n = len(red.orbits), red.n
    vals = {}
    for i, o in enumerate(red.orbits):
        v = sum((sol.point[("g", j)] * red.K[i][j] for j in range(m)), 0) / n
        for x in o:
            vals[x] = v
    if inst.mode == "float":
        return GroupFunction(inst.group, {x: float(v) for x, v in vals.items() if abs(v) > 1e-14}, exact=False)
    return GroupFunction(inst.group, vals)


def dual_certificate(sol: LPSolution) -> DualCertificate:
    inst, red = sol.problem.meta["instance"], sol.problem.meta["reduced"]
    m, n = len(red.orbits), red.n
    upper, lower = _sign_orbits(inst, red)
    kap = _spread(inst, red, {i: sol.point[("kappa", i)] for i in upper}, inst.omega)
    kap_m = None
    if inst.two_sided:
        kap_m = _spread(inst, red, {i: sol.point[("kappa_minus", i)] for i in lower}, inst.omega_minus)
    nu = {}
    for i, o in enumerate(red.orbits):
        v = sum((sol.point[("nu", j)] * red.K[i][j] for j in range(m)), 0) / n
        for x in o:
            nu[x] = v
    exact = None if inst.mode == "exact" else False
    return DualCertificate(
        sol.point["s"],
        MeasureFunctional.from_function(kap),
        MeasureFunctional(inst.group, nu, exact=exact),
        None if kap_m is None else MeasureFunctional.from_function(kap_m),
    )


def verify_dual_certificate(inst: Instance, cert: DualCertificate) -> Verdict:
    """Recheck a certificate from scratch; the failing condition is reported."""
    g = inst.group
    exact = inst.mode == "exact" and cert.kappa.exact and cert.nu.exact
    tol = 0 if exact else 1e-9
    for name, kap, region in (("kappa", cert.kappa, inst.omega),
                              ("kappa_minus", cert.kappa_minus, inst.omega_minus)):
        if kap is None:
            continue
        for x in g.elements():
            v = kap(x)
            if v < -tol:
                return Verdict(False, reason=f"{name} >= 0 violated", witness=x, value=v)
            if abs(v) > tol and x in region:
                return Verdict(False, reason=f"{name} support escapes the complement of omega",
                               witness=x, value=v)
    if not cert.nu.is_even:
        return Verdict(False, reason="nu is not even")
    pt = is_positive_type(cert.nu)
    if not pt.ok:
        return Verdict(False, reason="nu is not of positive type", witness=pt.witness, value=pt.value)
    rho_e = inst.rho.even_odd_split()[0]
    sig_e = inst.sigma.even_odd_split()[0]
    kap_e = cert.kappa.even_odd_split()[0]
    km_e = cert.kappa_minus.even_odd_split()[0] if cert.kappa_minus is not None else None
    worst = 0
    for x in g.elements():
        lhs = rho_e(x) - cert.s * sig_e(x)
        rhs = cert.nu(x) - kap_e(x) + (km_e(x) if km_e is not None else 0)
        err = abs(lhs - rhs)
        if err > tol * max(1.0, abs(float(lhs))):
            return Verdict(False, reason="identity rho_e - s sigma_e = nu - kappa_e fails",
                           witness=x, value=lhs - rhs)
        worst = max(worst, err)
    return Verdict(True, reason="certificate verified", value=cert.s, margin=pt.margin,
                   details={"identity_residual": worst})


@dataclass
class GapCertificate:
    alpha: object
    omega: object
    gap: object
    mode: str
    no_gap: bool
    primal_witness: GroupFunction | None
    certificate: DualCertificate | None
    status: str = "optimal"
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {"alpha": fmt(self.alpha), "omega": fmt(self.omega), "gap": fmt(self.gap),
               "mode": self.mode, "no_gap": self.no_gap, "status": self.status}
        if self.primal_witness is not None:
            out["primal_witness"] = self.primal_witness.to_json()["atoms"]
        if self.certificate is not None:
            out["dual_certificate"] = self.certificate.to_json()
        return out


def certify_no_gap(primal: LPSolution, dual: LPSolution, mode: str | None = None) -> GapCertificate:
    """Cross-check optimal primal and dual solutions of the same instance.

    Raises :class:`WeakDualityError` when the dual value exceeds the primal
    value and ``ValueError`` for solutions of different instances.
    """
    if primal.problem is None or dual.problem is None or \
            primal.problem.meta.get("instance") is not dual.problem.meta.get("instance"):
        if not _same_instance(primal, dual):
            raise ValueError("primal and dual solutions belong to different problems")
    mode = mode or primal.mode
    if primal.status != "optimal" or dual.status != "optimal":
        return GapCertificate(primal.value, dual.value, math.nan, mode, False, None, None,
                              status=f"primal {primal.status}, dual {dual.status}")
    alpha, omega = primal.value, dual.value
    slack = 0 if mode == "exact" else GAP_TOL
    if omega - alpha > slack:
        raise WeakDualityError(f"weak duality violated: omega={omega} > alpha={alpha}")
    gap = alpha - omega
    no_gap = gap == 0 if mode == "exact" else abs(gap) <= GAP_TOL
    f = primal_witness(primal)
    cert = dual_certificate(dual)
    cert.gap_to_primal = gap
    return GapCertificate(alpha, omega, gap, mode, no_gap, f, cert)


def _same_instance(a: LPSolution, b: LPSolution) -> bool:
    ia = a.problem.meta.get("instance") if a.problem else None
    ib = b.problem.meta.get("instance") if b.problem else None
    if ia is None or ib is None:
        return False
    return ia.to_json() == ib.to_json()


@dataclass
class DelsarteResult:
    value: object
    alpha: object
    omega: object
    gap: GapCertificate
    primal: LPSolution
    dual: LPSolution

    @property
    def witness(self) -> GroupFunction:
        return self.gap.primal_witness

    @property
    def certificate(self) -> DualCertificate:
        return self.gap.certificate


def solve_instance(inst: Instance) -> DelsarteResult:
    """Solve primal and dual and cross-certify; infeasibility is surfaced, not raised."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        p = solve(build_primal(inst))
    d = solve(build_dual(inst))
    gap = certify_no_gap(p, d, inst.mode)
    value = -p.value if p.status == "optimal" else (-math.inf if p.status == "infeasible" else math.nan)
    return DelsarteResult(value, p.value, d.value, gap, p, d)


def delsarte_constant(group: GroupSpec, omega, mode: str | None = None) -> DelsarteResult:
    """``D_G(omega) = -alpha`` for ``rho = -lambda``, ``sigma = delta_0``."""
    inst = make_instance(group, omega, mode=mode)
    if group.zero not in inst.omega:
        raise ValueError("0 must lie in omega (otherwise no f with f(0) = 1 is admissible)")
    return solve_instance(inst)
