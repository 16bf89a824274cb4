"""Functionals on discrete groups: pairings, norms and dual-cone oracles.

A :class:`MeasureFunctional` is ``c * lambda + (finitely supported part)``
where ``lambda`` is counting measure.  On a discrete group a translation
bounded measure is just a bounded function, so values are stored pointwise;
the constant term keeps ``lambda`` and its combinations representable on
``Z^d`` without truncation.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Mapping

import numpy as np

from ._scalars import FLOAT_TOL, Verdict, all_exact, fmt, to_scalar
from .groups import GroupSpec, LatticeTiling, Region, coset_decompose, element_str, inversion_orbits
from .spectral import GroupFunction, char_table, even_odd_split, is_positive_definite


class MeasureFunctional:
    """``x -> constant + atoms(x)`` on a finite group or on Z^d."""

    __slots__ = ("group", "constant", "atoms")

    def __init__(self, group: GroupSpec, atoms: Mapping | GroupFunction | None = None,
                 constant=0, exact: bool | None = None):
        if isinstance(atoms, GroupFunction):
            atoms = atoms.values
        f = GroupFunction(group, atoms or {}, exact=exact)
        c = to_scalar(constant, exact)
        if not f.exact or isinstance(c, float):
            f = f.as_float()
            c = float(c)
        self.group = f.group
        self.constant = c
        self.atoms = f

    # constructors -------------------------------------------------------
    @classmethod
    def haar(cls, group: GroupSpec, c=1) -> "MeasureFunctional":
        """``c`` times counting measure."""
        return cls(group, constant=c)

    @classmethod
    def delta(cls, group: GroupSpec, x=None, c=1) -> "MeasureFunctional":
        return cls(group, GroupFunction.delta(group, x, c))

    @classmethod
    def from_function(cls, f: GroupFunction) -> "MeasureFunctional":
        return cls(f.group, f)

    @classmethod
    def from_values(cls, group: GroupSpec, seq) -> "MeasureFunctional":
        return cls(group, GroupFunction.from_values(group, seq))

    # access -------------------------------------------------------------
    @property
    def exact(self) -> bool:
        return isinstance(self.constant, Fraction) and self.atoms.exact

    def __call__(self, x):
        return self.constant + self.atoms(x)

    def finite_part(self) -> GroupFunction:
        return self.atoms

    def to_function(self) -> GroupFunction:
        """Pointwise values as a finitely supported function.

        On Z^d this is only possible when the constant part vanishes.
        """
        if self.group.is_finite:
            return GroupFunction(self.group, {x: self(x) for x in self.group.elements()},
                                 exact=None if self.exact else False)
        if self.constant != 0:
            raise ValueError("a functional with a constant part is not finitely supported on Z^d")
        return self.atoms

    def support_points(self) -> list:
        """Points where the functional is nonzero (finite groups or c = 0)."""
        if self.group.is_finite:
            return [x for x in self.group.elements() if self(x) != 0]
        if self.constant != 0:
            raise ValueError("support is infinite")
        return self.atoms.support()

    # algebra ------------------------------------------------------------
    def __add__(self, other: "MeasureFunctional") -> "MeasureFunctional":
        if isinstance(other, GroupFunction):
            other = MeasureFunctional.from_function(other)
        return MeasureFunctional(self.group, self.atoms + other.atoms, self.constant + other.constant,
                                 exact=None if self.exact and other.exact else False)

    def __neg__(self) -> "MeasureFunctional":
        return MeasureFunctional(self.group, -self.atoms, -self.constant)

    def __sub__(self, other) -> "MeasureFunctional":
        if isinstance(other, GroupFunction):
            other = MeasureFunctional.from_function(other)
        return self + (-other)

    def __mul__(self, c) -> "MeasureFunctional":
        c = to_scalar(c)
        return MeasureFunctional(self.group, self.atoms * c, self.constant * c,
                                 exact=None if isinstance(c, Fraction) and self.exact else False)

    __rmul__ = __mul__

    def reflect(self) -> "MeasureFunctional":
        return MeasureFunctional(self.group, self.atoms.reflect(), self.constant)

    def even_odd_split(self) -> tuple["MeasureFunctional", "MeasureFunctional"]:
        e, o = even_odd_split(self.atoms)
        zero = Fraction(0) if self.exact else 0.0
        return (MeasureFunctional(self.group, e, self.constant),
                MeasureFunctional(self.group, o, zero))

    @property
    def is_even(self) -> bool:
        return self._canonical().is_even(tol=0 if self.exact else FLOAT_TOL)

    @property
    def is_odd(self) -> bool:
        if self.constant != 0 and not self.group.is_finite:
            return False
        return self._canonical().is_odd(tol=0 if self.exact else FLOAT_TOL)

    def _canonical(self) -> GroupFunction:
        return self.to_function() if self.group.is_finite else self.atoms

    def as_float(self) -> "MeasureFunctional":
        return MeasureFunctional(self.group, self.atoms.as_float(), float(self.constant), exact=False)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MeasureFunctional):
            return NotImplemented
        if self.group.is_finite:
            return self.to_function() == other.to_function()
        return self.constant == other.constant and self.atoms == other.atoms

    def __repr__(self) -> str:
        body = ", ".join(f"{element_str(k)}: {v}" for k, v in self.atoms.items())
        return f"MeasureFunctional({self.group.describe()}, constant={self.constant}, {{{body}}})"

    def to_json(self) -> dict:
        return {"constant": fmt(self.constant),
                "atoms": {element_str(k): fmt(v) for k, v in self.atoms.items()}}


def _as_functional(psi) -> MeasureFunctional:
    if isinstance(psi, GroupFunction):
        return MeasureFunctional.from_function(psi)
    return psi


def pair(f, psi):
    """``<f, psi> = sum_x f(x) psi(x)``.

    Either argument may carry a constant part, but not both on Z^d, where
    the sum would diverge.
    """
    f, psi = _as_functional(f), _as_functional(psi)
    g = psi.group
    if not g.is_finite and f.constant != 0 and psi.constant != 0:
        raise ValueError("divergent pairing: both sides have infinite support")
    if g.is_finite:
        a, b = f.to_function(), psi.to_function()
        return sum((v * b(x) for x, v in a.values.items()), a._zero())
    total = sum((v * psi(x) for x, v in f.atoms.values.items()), f.atoms._zero())
    if f.constant != 0:
        total += f.constant * psi.atoms.total()
    return total


def jordan(psi) -> tuple[MeasureFunctional, MeasureFunctional]:
    """Pointwise positive and negative parts: ``psi = psi+ - psi-``."""
    psi = _as_functional(psi)
    g = psi.group
    c = psi.constant
    cp, cm = max(c, 0 * c), max(-c, 0 * c)
    pos, neg = {}, {}
    for x in psi.atoms.values:
        v = psi(x)
        pos[x] = max(v, 0 * v) - cp
        neg[x] = max(-v, 0 * v) - cm
    return MeasureFunctional(g, pos, cp), MeasureFunctional(g, neg, cm)


def _cells(tiling: LatticeTiling | None, points):
    out: dict = {}
    for x in points:
        lat = coset_decompose(tiling, x)[0] if tiling is not None else ()
        out.setdefault(lat, []).append(x)
    return out


def mixed_norm_X(tiling: LatticeTiling | None, f: GroupFunction):
    """``sum_l max_{B + l} |f|``; on a finite group (``tiling=None``) the sup norm."""
    cells = _cells(None if f.group.is_finite else tiling, f.values)
    total = f._zero()
    for pts in cells.values():
        total += max(abs(f.values[x]) for x in pts)
    return total


def measure_norm_M(tiling: LatticeTiling | None, psi):
    """``sup_l |psi|(B + l)``; on a finite group the total variation."""
    psi = _as_functional(psi)
    g = psi.group
    if g.is_finite:
        return sum((abs(v) for v in psi.to_function().values.values()), Fraction(0) if psi.exact else 0.0)
    c = psi.constant
    best = abs(c) * tiling.tile_size
    cells = _cells(tiling, psi.atoms.values)
    for lat in cells:
        mass = 0 * c
        for b in tiling.tile():
            x = tuple(a + o for a, o in zip(lat, b))
            mass += abs(psi(x))
        best = max(best, mass)
    return best


def in_QA_dual(psi, region: Region) -> Verdict:
    """``psi <= 0`` pointwise with support inside ``region``."""
    psi = _as_functional(psi)
    g = psi.group
    if g.is_finite:
        pts = g.elements()
    else:
        if psi.constant > 0:
            return Verdict(False, reason="positive part nonzero", value=psi.constant)
        if psi.constant < 0 and not region.complement:
            return Verdict(False, reason="support escapes A", value=psi.constant)
        pts = set(psi.atoms.values) | (set(region.members) if region.complement else set())
    for x in sorted(pts):
        v = psi(x)
        if v > 0:
            return Verdict(False, reason="positive part nonzero", witness=x, value=v)
        if v != 0 and x not in region:
            return Verdict(False, reason="support escapes A", witness=x, value=v)
    return Verdict(True)


def is_positive_type(psi, resolution: int | None = None) -> Verdict:
    """Even with nonnegative transform (a measure of positive type)."""
    psi = _as_functional(psi)
    if not psi.is_even:
        return Verdict(False, reason="not even")
    if psi.group.is_finite:
        return is_positive_definite(psi.to_function())
    if psi.constant < 0:
        return Verdict(False, reason="negative multiple of counting measure", value=psi.constant)
    return is_positive_definite(psi.atoms, resolution=resolution)


def in_P_dual(psi, resolution: int | None = None) -> Verdict:
    """``psi = (positive type) + (odd)``: the even part must be of positive type."""
    psi = _as_functional(psi)
    even, odd = psi.even_odd_split()
    v = is_positive_type(even, resolution=resolution)
    v.details = dict(v.details, even=even, odd=odd)
    if v.ok:
        v.witness = (even, odd)
    return v


def orbit_cosine_sums(group: GroupSpec, exact: bool):
    """Matrix ``C[i][j] = sum_{x in O_i} cos(2 pi <x, y_j>)`` over inversion orbits.

    Rows index group orbits, columns dual orbits (identified with group
    orbits, represented by their first element).
    """
    tab = char_table(group.orders)
    orbits = inversion_orbits(group)
    reps = [tab.index[o[0]] for o in orbits]
    if exact:
        M = [[Fraction(int(sum(tab.two_cos[tab.index[x], j] for x in o)), 2) for j in reps]
             for o in orbits]
    else:
        M = np.array([[sum(tab.cos[tab.index[x], j] for x in o) for j in reps] for o in orbits])
    return orbits, M


def in_joint_dual(psi, omega: Region, mode: str | None = None) -> Verdict:
    """Is ``psi = nu - kappa + odd`` with ``kappa >= 0`` on ``A = omega^c``?

    Finite groups only.  The search is a small LP over the orbit values of
    the even part of ``kappa``, minimizing its total mass; the witness holds
    ``kappa``, ``nu`` (even, positive type) and the odd remainder.
    """
    from .simplex import LPProblem, solve_lp

    psi = _as_functional(psi)
    g = psi.group
    if not g.is_finite:
        raise ValueError("in_joint_dual works on finite groups")
    exact = psi.exact and g.exact_available if mode in (None, "auto") else mode == "exact"
    if exact and not g.exact_available:
        raise ValueError(f"exact mode unavailable: exponent {g.exponent}")
    f = psi.to_function()
    if exact and not f.exact:
        raise ValueError("exact mode requires rational data")
    fe, fo = even_odd_split(f if exact else f.as_float())
    orbits, C = orbit_cosine_sums(g, exact)
    # spectrum of the even part on dual orbit representatives
    spec = [sum((fe(o[0]) * C[i][j] for i, o in enumerate(orbits)), 0) for j in range(len(orbits))]
    a_orbits = [i for i, o in enumerate(orbits) if any(x not in omega for x in o)]
    lp = LPProblem(mode="exact" if exact else "float", kind="joint_dual")
    for i in a_orbits:
        lp.add_variable(("t", i))
    for j in range(len(orbits)):
        lp.add_constraint({("t", i): C[i][j] for i in a_orbits}, ">=", -spec[j], name=f"y{j}")
    lp.set_objective({("t", i): len(orbits[i]) for i in a_orbits}, "min")
    sol = solve_lp(lp)
    if sol.status != "optimal":
        j = min(range(len(orbits)), key=lambda k: spec[k])
        return Verdict(False, reason=f"no admissible kappa ({sol.status})",
                       witness=orbits[j][0], value=spec[j])
    kappa = {}
    for i in a_orbits:
        t = sol.point[("t", i)]
        if t == 0:
            continue
        inside = [x for x in orbits[i] if x not in omega]
        share = t * len(orbits[i]) / len(inside)
        for x in inside:
            kappa[x] = share
    kap = GroupFunction(g, kappa, exact=None if exact else False)
    ke, ko = even_odd_split(kap)
    nu = fe + ke
    odd = fo + ko
    check = is_positive_definite(nu)
    if not exact and not check.ok and check.value is not None and check.value >= -1e-7:
        check = Verdict(True, margin=check.value)
    wit = {"kappa": MeasureFunctional.from_function(kap), "nu": MeasureFunctional.from_function(nu),
           "odd": MeasureFunctional.from_function(odd)}
    if not check.ok:
        return Verdict(False, reason="recovered nu is not of positive type", witness=wit, value=check.value)
    return Verdict(True, witness=wit, value=sol.value, margin=check.margin)
