"""Two-sided bounds for the Delsarte constant on Z and Z^2.

Lower bounds come from positive definite functions supported in a window,
upper bounds from dual certificates built from a finite part and periodic
characters.  For omega = {-1, 0, 1} both meet at 2.
"""
from __future__ import annotations

from delsarte.zd_bounds import sandwich


def table(d, omega, **kw):
    print(f"d = {d}, omega = {omega}")
    for r in sandwich(d, omega, **kw):
        print(f"  m={r.m} n={r.n}  lower={float(r.lower):.6f}  upper={float(r.upper):.6f}")


def main():
    table(1, [-1, 0, 1])
    table(1, [0])
    table(1, [0, 2, -2, 5, -5], schedule=[(5, 6), (6, 7)])
    table(2, [(0, 0), (1, 0), (-1, 0)], tol=1e-9)


if __name__ == "__main__":
    main()
