"""Split f = p - q with p positive definite and p <= f on A.

The mixed norm of p is compared with two bounds.  The bound
2 N |B + W| / |V| * ||f||_X fails already for f = -delta_5 with A missing
only {-1, 0, 1}: any admissible p has p(0) >= 2, so ||p||_X >= 4 > 2.  The
variant with N + 1 lattice cells, which pays for the cell at the origin,
holds.
"""
from __future__ import annotations

import random
from fractions import Fraction

from delsarte.constructions import pd_minorant_decompose
from delsarte.groups import GroupSpec, Region
from delsarte.spectral import GroupFunction

Z = GroupSpec("free", rank=1)


def main():
    A = Region.of(Z, [-1, 0, 1], complement=True)
    d = pd_minorant_decompose(GroupFunction.delta(Z, 5, -1), A)
    with_center = d.norm_p + d.checks["norm_bound_with_center_cell"].margin
    print("f = -delta_5:  ||p||_X =", d.norm_p, " bound =", d.norm_bound, " bound with N+1 =", with_center)

    rng = random.Random(0)
    held = held_c = 0
    for _ in range(100):
        f = GroupFunction(Z, {(x,): Fraction(rng.randint(-12, 12), 4)
                              for x in rng.sample(range(-20, 21), rng.randint(1, 10))})
        d = pd_minorant_decompose(f, A)
        held += d.checks["norm_bound"].ok
        held_c += d.checks["norm_bound_with_center_cell"].ok
    print(f"random f: bound holds {held}/100, bound with N+1 cells holds {held_c}/100")


if __name__ == "__main__":
    main()
