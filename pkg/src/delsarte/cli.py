"""Command line front end.

    delsarte solve --group '{"finite":[4]}' --omega '[0,1,3]'
    delsarte construct sign-swap --S '[2,-2]' --V '[0]'
    delsarte verify certificate.json
    delsarte sandwich --omega '[-1,0,1]'
    delsarte selftest --seed 1

Exit codes: 0 success, 1 malformed input, 2 infeasible, 3 tolerance or
verification failure, 4 a construction violated a property it must have.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from ._scalars import fmt
from .constructions import check_kernel, pd_minorant_decompose, sign_swap, urysohn_pd_kernel
from .functionals import MeasureFunctional, pair
from .groups import GroupSpec, make_group
from .lp_duality import WeakDualityError, make_instance, solve_instance, verify_dual_certificate
from .sampling import random_instance
from .serialization import (certificate_json, dumps, load_dual_certificate, load_function, load_json_arg,
                            load_problem, load_region, load_zd_certificate, parse_scalar,
                            zd_certificate_json)
from .spectral import is_positive_definite

EXIT_OK, EXIT_INPUT, EXIT_INFEASIBLE, EXIT_TOLERANCE, EXIT_PROPERTY = 0, 1, 2, 3, 4


@dataclass
class RunConfig:
    command: str
    mode: str | None = None
    fmt: str = "json"
    tol: float = 1e-6
    seed: int = 0
    jobs: int = 1
    out: str | None = None
    args: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.tol <= 0:
            raise ValueError("tolerances must be positive")


def _emit(cfg: RunConfig, text: str):
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv(rows, header) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


# --------------------------------------------------------------------------
# solve

def _is_delsarte_setting(inst) -> bool:
    g = inst.group
    return (inst.omega_minus is None
            and inst.rho == MeasureFunctional.haar(g, -1)
            and inst.sigma == MeasureFunctional.delta(g))


def solve_report(inst) -> tuple[int, dict]:
    try:
        res = solve_instance(inst)
    except WeakDualityError as exc:
        return EXIT_TOLERANCE, {"status": "weak_duality_violated", "error": str(exc)}
    gap = res.gap
    rep = {"status": res.primal.status}
    if res.primal.status == "optimal" and res.dual.status == "optimal":
        rep.update(certificate_json(inst, gap))
        rep["status"] = "optimal" if gap.no_gap else "gap"
        if _is_delsarte_setting(inst):
            rep["delsarte_constant"] = fmt(res.value)
        code = EXIT_OK if gap.no_gap else EXIT_TOLERANCE
    elif "infeasible" in (res.primal.status, res.dual.status) and res.primal.status != "optimal":
        rep.update({"alpha": fmt(res.alpha), "omega": fmt(res.omega), "gap": "nan",
                    "status": "infeasible"})
        code = EXIT_INFEASIBLE
    else:
        rep.update({"alpha": fmt(res.alpha), "omega": fmt(res.omega), "gap": "nan",
                    "status": f"primal {res.primal.status}, dual {res.dual.status}"})
        code = EXIT_TOLERANCE
    return code, rep


def _solve_one(payload):
    obj, mode = payload
    try:
        inst = load_problem(obj, mode)
    except (ValueError, KeyError, TypeError) as exc:
        return EXIT_INPUT, {"status": "malformed", "error": str(exc)}
    return solve_report(inst)


def run_solve(cfg: RunConfig) -> int:
    a = cfg.args
    if a.get("batch"):
        problems = load_json_arg(a["batch"])
        payloads = [(p, cfg.mode) for p in problems]
        if cfg.jobs > 1:
            with ProcessPoolExecutor(cfg.jobs) as ex:
                results = list(ex.map(_solve_one, payloads))
        else:
            results = [_solve_one(p) for p in payloads]
        rows = [[i, r.get("alpha", ""), r.get("omega", ""), r.get("gap", ""), r["status"]]
                for i, (_, r) in enumerate(results)]
        if cfg.fmt == "csv":
            _emit(cfg, _csv(rows, ["id", "alpha", "omega", "gap", "status"]))
        else:
            _emit(cfg, dumps([r for _, r in results]) + "\n")
        return max(c for c, _ in results) if results else EXIT_OK
    if a.get("problem"):
        obj = load_json_arg(a["problem"])
    else:
        if a.get("group") is None or a.get("omega") is None:
            raise ValueError("solve needs --problem or --group and --omega")
        obj = {"group": load_json_arg(a["group"]), "omega": load_json_arg(a["omega"])}
        for key in ("omega_minus", "rho", "sigma"):
            if a.get(key) is not None:
                v = a[key]
                obj[key] = v if v in ("haar", "-haar", "delta0") else load_json_arg(v)
    inst = load_problem(obj, cfg.mode)
    code, rep = solve_report(inst)
    if cfg.fmt == "csv":
        _emit(cfg, _csv([[0, rep.get("alpha", ""), rep.get("omega", ""), rep.get("gap", ""), rep["status"]]],
                        ["id", "alpha", "omega", "gap", "status"]))
    else:
        _emit(cfg, dumps(rep) + "\n")
    return code


# --------------------------------------------------------------------------
# construct

def _group_arg(a, default_rank: int = 1) -> GroupSpec:
    if a.get("group"):
        return make_group(load_json_arg(a["group"]))
    return GroupSpec("free", rank=default_rank)


def run_construct(cfg: RunConfig) -> int:
    a = cfg.args
    what = a["what"]
    g = _group_arg(a)
    if what == "kernel":
        K = load_region(g, load_json_arg(a["K"]))
        eps = parse_scalar(a["eps"])
        report = check_kernel(urysohn_pd_kernel(g, K, eps), K, eps)
    elif what == "sign-swap":
        S = load_region(g, load_json_arg(a["S"]))
        V = load_region(g, load_json_arg(a["V"])) if a.get("V") else None
        report = sign_swap(g, S, V)
    elif what == "decompose":
        f = load_function(g, load_json_arg(a["f"]))
        A = load_region(g, load_json_arg(a["A"]))
        V = load_region(g, load_json_arg(a["V"])) if a.get("V") else None
        report = pd_minorant_decompose(f, A, V, a.get("tile"))
    else:
        raise ValueError(f"unknown construction {what!r}")
    out = report.to_json()
    out["ok"] = report.ok
    _emit(cfg, dumps(out) + "\n")
    return EXIT_OK if report.ok else EXIT_PROPERTY


# --------------------------------------------------------------------------
# verify

def verify_certificate_obj(obj) -> tuple[bool, dict]:
    """Recheck a solve or sandwich certificate from its JSON alone."""
    kind = obj.get("type")
    if kind == "zd_certificate":
        from .zd_bounds import verify_zd_certificate

        cert = load_zd_certificate(obj)
        v = verify_zd_certificate(cert)
        return v.ok, {"valid": v.ok, "reason": v.reason, "upper": fmt(cert.upper)}
    if kind != "delsarte_certificate":
        raise ValueError(f"unknown certificate type {kind!r}")
    inst = load_problem(obj["problem"])
    g = inst.group
    exact = inst.mode == "exact"
    tol = 0 if exact else 1e-6
    checks = {}
    cert = load_dual_certificate(g, obj["dual_certificate"])
    v = verify_dual_certificate(inst, cert)
    checks["dual"] = {"ok": v.ok, "reason": v.reason}
    omega_val = parse_scalar(obj["omega"])
    checks["dual_value"] = {"ok": abs(cert.s - omega_val) <= tol}
    if "primal_witness" in obj:
        f = load_function(g, obj["primal_witness"])
        if not exact:
            f = f.as_float()
        pd = is_positive_definite(f)
        signs = all(f(x) <= tol for x in g.elements() if x not in inst.omega)
        if inst.omega_minus is not None:
            signs = signs and all(f(x) >= -tol for x in g.elements() if x not in inst.omega_minus)
        norm = pair(f, inst.sigma)
        alpha = pair(f, inst.rho)
        alpha_val = parse_scalar(obj["alpha"])
        checks["primal_pd"] = {"ok": bool(pd.ok or (not exact and pd.margin is not None and pd.margin >= -tol)),
                               "reason": pd.reason}
        checks["primal_signs"] = {"ok": signs}
        checks["primal_normalized"] = {"ok": abs(norm - 1) <= tol}
        checks["primal_value"] = {"ok": abs(alpha - alpha_val) <= tol}
        checks["no_gap"] = {"ok": abs(alpha_val - omega_val) <= tol}
    ok = all(c["ok"] for c in checks.values())
    return ok, {"valid": ok, "checks": checks}


def run_verify(cfg: RunConfig) -> int:
    obj = load_json_arg(cfg.args["certificate"])
    items = obj if isinstance(obj, list) else [obj]
    results = [verify_certificate_obj(x) for x in items]
    out = [r for _, r in results]
    _emit(cfg, dumps(out if isinstance(obj, list) else out[0]) + "\n")
    return EXIT_OK if all(ok for ok, _ in results) else EXIT_TOLERANCE


# --------------------------------------------------------------------------
# sandwich

def _sandwich_row(payload):
    from .zd_bounds import dual_upper_bound, primal_lower_bound

    d, omega, m, n = payload
    return primal_lower_bound(d, omega, m), dual_upper_bound(d, omega, n)


def run_sandwich(cfg: RunConfig) -> int:
    from .zd_bounds import CSV_HEADER, SandwichRow, default_schedule, sandwich

    a = cfg.args
    d = int(a.get("d") or 1)
    raw = load_json_arg(a["omega"])
    omega = [tuple(x) if isinstance(x, list) else x for x in raw]
    schedule = [tuple(p) for p in load_json_arg(a["schedule"])] if a.get("schedule") else \
        default_schedule(omega, int(a.get("steps") or 6))
    tol = parse_scalar(a["gap_tol"]) if a.get("gap_tol") else 0
    if cfg.jobs > 1:
        with ProcessPoolExecutor(cfg.jobs) as ex:
            pairs = list(ex.map(_sandwich_row, [(d, omega, m, n) for m, n in schedule]))
        rows, lo, up = [], None, None
        for (m, n), (l, u) in zip(schedule, pairs):
            lo = l if lo is None or l.value > lo.value else lo
            up = u if up is None or u.value < up.value else up
            rows.append(SandwichRow(m, n, lo.value, up.value, lo, up))
            if up.value - lo.value <= tol:
                break
    else:
        rows = sandwich(d, omega, schedule, tol)
    table = _csv([r.csv_fields() for r in rows], CSV_HEADER)
    if cfg.fmt == "json":
        _emit(cfg, dumps([{"m": r.m, "n": r.n, "lower": fmt(r.lower), "upper": fmt(r.upper),
                           "gap": fmt(r.gap)} for r in rows]) + "\n")
    else:
        _emit(cfg, table)
    if a.get("witnesses") and rows:
        last = rows[-1]
        wit = {"lower": last.lower_witness.to_json(),
               "upper": None if last.upper_witness.certificate is None
               else zd_certificate_json(last.upper_witness.certificate)}
        with open(a["witnesses"], "w") as fh:
            fh.write(dumps(wit) + "\n")
    ok = all(r.lower <= r.upper for r in rows)
    return EXIT_OK if ok else EXIT_TOLERANCE


# --------------------------------------------------------------------------
# selftest

def run_selftest(cfg: RunConfig) -> int:
    """Golden instance plus a seeded random strong duality sweep."""
    lines = []
    failures = 0
    golden = make_instance(make_group({"finite": [4]}), [0, 1, 3], mode="exact")
    res = solve_instance(golden)
    ok = res.gap.no_gap and res.value == 2 and verify_dual_certificate(golden, res.certificate).ok
    lines.append(f"golden Z_4 omega={{0,1,3}}: D={fmt(res.value)} gap={fmt(res.gap.gap)} {'ok' if ok else 'FAIL'}")
    failures += not ok
    rng = random.Random(cfg.seed)
    count = int(cfg.args.get("count") or 20)
    for i in range(count):
        inst = random_instance(rng, mode=cfg.mode if cfg.mode in ("exact", None) else "float")
        r = solve_instance(inst)
        good = r.gap.no_gap and verify_dual_certificate(inst, r.certificate).ok
        failures += not good
        lines.append(f"random {i:3d} {inst.group.describe():>16} alpha={fmt(r.alpha)} gap={fmt(r.gap.gap)} "
                     f"{'ok' if good else 'FAIL'}")
    lines.append(f"{count + 1 - failures}/{count + 1} passed")
    _emit(cfg, "\n".join(lines) + "\n")
    return EXIT_OK if failures == 0 else EXIT_TOLERANCE


# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="delsarte", description="Delsarte LP solver, certificates and constructions")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--mode", choices=["exact", "float", "auto"], default=None,
                        help="arithmetic (default: $DELSARTE_MODE, else auto)")
    common.add_argument("--format", dest="fmt", choices=["json", "csv"], default=None)
    common.add_argument("--tol", type=float, default=1e-6)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--out", default=None, help="write output here instead of stdout")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", parents=[common], help="solve a problem and certify the duality gap")
    s.add_argument("--problem", help="problem JSON (inline, @file or path)")
    s.add_argument("--batch", help="JSON list of problems; CSV rows per problem")
    s.add_argument("--group")
    s.add_argument("--omega")
    s.add_argument("--omega-minus", dest="omega_minus")
    s.add_argument("--rho")
    s.add_argument("--sigma")

    c = sub.add_parser("construct", parents=[common], help="build and check a positive definite construction")
    c.add_argument("what", choices=["kernel", "sign-swap", "decompose"])
    c.add_argument("--group", help="group descriptor (default: Z)")
    c.add_argument("--K")
    c.add_argument("--eps")
    c.add_argument("--S")
    c.add_argument("--V")
    c.add_argument("--f")
    c.add_argument("--A")
    c.add_argument("--tile", type=int)

    v = sub.add_parser("verify", parents=[common], help="recheck a certificate file")
    v.add_argument("certificate")

    w = sub.add_parser("sandwich", parents=[common], help="two-sided bounds on Z or Z^2")
    w.add_argument("--d", type=int, default=1, help="dimension, 1 or 2")
    w.add_argument("--omega", required=True, help="JSON list of points of the allowed set")
    w.add_argument("--schedule", help="JSON list of [m, n] pairs")
    w.add_argument("--steps", type=int, default=6, help="rows in the default schedule")
    w.add_argument("--gap-tol", dest="gap_tol", help="stop once upper - lower is at most this")
    w.add_argument("--witnesses", help="write the final row's witnesses here")

    t = sub.add_parser("selftest", parents=[common], help="golden case and a seeded random sweep")
    t.add_argument("--count", type=int, default=20)
    return p


RUNNERS = {"solve": run_solve, "construct": run_construct, "verify": run_verify,
           "sandwich": run_sandwich, "selftest": run_selftest}


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    mode = ns.mode or os.environ.get("DELSARTE_MODE") or None
    if mode == "auto":
        mode = None
    fmt_default = "csv" if ns.command == "sandwich" else "json"
    args = {k: v for k, v in vars(ns).items()
            if k not in ("command", "mode", "fmt", "tol", "seed", "jobs", "out")}
    try:
        cfg = RunConfig(ns.command, mode, ns.fmt or fmt_default, ns.tol, ns.seed, ns.jobs, ns.out, args)
        return RUNNERS[ns.command](cfg)
    except (ValueError, KeyError, json.JSONDecodeError, FileNotFoundError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
