"""Solve the Delsarte problem on Z_4 with omega = {0, 1, 3} and check it.

The primal optimum is f = (1, 1/2, 0, 1/2): positive definite, f(0) = 1,
f(2) <= 0, total 2.  The dual certificate proves nothing larger exists.
"""
from __future__ import annotations

from delsarte import make_group
from delsarte.lp_duality import make_instance, solve_instance, verify_dual_certificate


def main():
    g = make_group([4])
    inst = make_instance(g, [0, 1, 3], mode="exact")
    res = solve_instance(inst)
    print("alpha (primal) =", res.alpha)
    print("omega (dual)   =", res.omega)
    print("gap            =", res.gap.gap)
    print("Delsarte constant D =", res.value)
    print("witness f:", [str(res.witness(x)) for x in g.elements()])
    cert = res.certificate
    print("certificate: s =", cert.s)
    print("  kappa:", [str(cert.kappa(x)) for x in g.elements()])
    print("  nu:   ", [str(cert.nu(x)) for x in g.elements()])
    v = verify_dual_certificate(inst, cert)
    print("independent verification:", "ok" if v.ok else v.reason)


if __name__ == "__main__":
    main()
