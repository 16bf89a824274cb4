"""Delsarte constants of arcs {-r, ..., r} in Z_n.

Exponents 1, 2, 3, 4 and 6 give rational character tables and exact
answers; everything else runs in floating point.
"""
from __future__ import annotations

from delsarte import make_group
from delsarte.lp_duality import delsarte_constant


def main():
    print(f"{'n':>3} {'r':>2}  {'mode':5}  D")
    for n in (4, 5, 6, 8, 12):
        g = make_group([n])
        for r in range(0, n // 2 + 1):
            arc = sorted({x % n for x in range(-r, r + 1)})
            res = delsarte_constant(g, arc)
            print(f"{n:>3} {r:>2}  {res.gap.mode:5}  {res.value}")


if __name__ == "__main__":
    main()
