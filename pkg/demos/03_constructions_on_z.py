"""Positive definite building blocks on Z.

A kernel that is 1 at the origin and at least 1 - eps on a finite set, and
a sign-swap function: positive definite, equal to -1 on a symmetric set S,
with total sum zero.
"""
from __future__ import annotations

from fractions import Fraction

from delsarte.constructions import check_kernel, sign_swap, urysohn_pd_kernel
from delsarte.groups import GroupSpec

Z = GroupSpec("free", rank=1)


def show(f):
    return " ".join(f"{x[0]}:{v}" for x, v in sorted(f.items()))


def main():
    K, eps = [-2, -1, 0, 1, 2], Fraction(1, 2)
    k = urysohn_pd_kernel(Z, K, eps)
    rep = check_kernel(k, K, eps)
    print("kernel:", show(k))
    for name, v in rep.checks.items():
        print(f"  {name:18} {'ok' if v.ok else 'FAILED'}")

    S, V = [-9, -4, 4, 9], [0, 1]
    rep = sign_swap(Z, S, V)
    print("\nsign swap for S =", S, "V =", V)
    print("k:", show(rep.k))
    print("k(0) =", rep.value_at_zero, " sum =", rep.total_sum)
    for name, v in rep.checks.items():
        print(f"  {name:24} {'ok' if v.ok else 'FAILED'}")


if __name__ == "__main__":
    main()
