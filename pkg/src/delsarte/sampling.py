"""Seeded random instances for sweeps, the self test and the test suite."""
from __future__ import annotations

import random
from fractions import Fraction

from .functionals import MeasureFunctional
from .groups import GroupSpec, Region, inversion_orbits, make_group
from .lp_duality import Instance, make_instance

# every cyclic product of exponent 2, 3, 4 or 6 with at most 64 elements
EXACT_GROUPS = [
    (2,), (3,), (4,), (6,),
    (2, 2), (2, 4), (2, 6), (3, 3), (3, 6), (4, 4), (6, 6), (2, 2, 2), (2, 2, 4),
    (2, 2, 6), (2, 4, 4), (3, 3, 3), (4, 4, 4), (2, 2, 2, 2), (2, 2, 2, 4),
    (2, 2, 2, 2, 2), (2, 2, 2, 2, 2, 2),
]


def random_exact_group(rng: random.Random) -> GroupSpec:
    return make_group({"finite": list(rng.choice(EXACT_GROUPS))})


def random_symmetric_region(rng: random.Random, g: GroupSpec, p: float = 0.4,
                            contains_zero: bool = True) -> Region:
    pts = []
    for orb in inversion_orbits(g):
        if orb[0] == g.zero:
            if contains_zero:
                pts.extend(orb)
        elif rng.random() < p:
            pts.extend(orb)
    return Region.of(g, pts)


def random_rational(rng: random.Random, lo: int = -6, hi: int = 6, den: int = 4) -> Fraction:
    return Fraction(rng.randint(lo * den, hi * den), den)


def random_even_functional(rng: random.Random, g: GroupSpec, density: float = 0.6) -> MeasureFunctional:
    atoms = {}
    for orb in inversion_orbits(g):
        if rng.random() < density:
            v = random_rational(rng)
            for x in orb:
                atoms[x] = v
    return MeasureFunctional(g, atoms)


def random_strict_pd(rng: random.Random, g: GroupSpec) -> MeasureFunctional:
    """Even and diagonally dominant, hence strictly positive definite."""
    atoms = {}
    mass = Fraction(0)
    for orb in inversion_orbits(g):
        if orb[0] == g.zero or rng.random() > 0.3:
            continue
        v = random_rational(rng, -2, 2, 3)
        for x in orb:
            atoms[x] = v
        mass += abs(v) * len(orb)
    atoms[g.zero] = mass + Fraction(rng.randint(1, 8), 4)
    return MeasureFunctional(g, atoms)


def random_instance(rng: random.Random, g: GroupSpec | None = None, mode: str | None = None,
                    two_sided: bool = False) -> Instance:
    g = g or random_exact_group(rng)
    omega = random_symmetric_region(rng, g)
    om_minus = random_symmetric_region(rng, g, p=0.5) if two_sided else None
    rho = random_even_functional(rng, g)
    sigma = random_strict_pd(rng, g)
    return make_instance(g, omega, rho, sigma, om_minus, mode=mode)
