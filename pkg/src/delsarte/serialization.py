"""JSON round trips for problems, functions and certificates.

Rationals are written as strings ``"p/q"`` (integers as ``"n"``) so exact
data survives a round trip; floats are written as JSON numbers.
"""
from __future__ import annotations

import json
import math
from fractions import Fraction

from ._scalars import fmt
from .functionals import MeasureFunctional
from .groups import GroupSpec, Region, element_str, make_group, parse_element
from .lp_duality import DualCertificate, GapCertificate, Instance, make_instance
from .spectral import GroupFunction


def parse_scalar(v):
    """``"p/q"``, ``"0.25"`` and ints become Fractions; JSON floats stay float."""
    if isinstance(v, bool):
        raise ValueError(f"not a number: {v!r}")
    if isinstance(v, (int, Fraction)):
        return Fraction(v)
    if isinstance(v, float):
        return v
    if isinstance(v, str):
        t = v.strip()
        if t.lower() in ("inf", "+inf", "infinity"):
            return math.inf
        if t.lower() in ("-inf", "-infinity"):
            return -math.inf
        if t.lower() == "nan":
            return math.nan
        try:
            return Fraction(t)
        except ValueError:
            pass
        return float(t)
    raise ValueError(f"not a number: {v!r}")


def to_jsonable(v):
    """Scalars to lossless JSON values; containers recursively."""
    if isinstance(v, Fraction):
        return fmt(v)
    if isinstance(v, float):
        return fmt(v) if not math.isfinite(v) else v
    if isinstance(v, dict):
        return {str(k): to_jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [to_jsonable(x) for x in v]
    return v


def dumps(obj) -> str:
    return json.dumps(to_jsonable(obj), indent=2)


def load_json_arg(text: str):
    """Inline JSON, or ``@path`` / an existing file path."""
    t = text.strip()
    if t.startswith("@"):
        with open(t[1:]) as fh:
            return json.load(fh)
    if t[:1] in "[{\"-0123456789" or t in ("true", "false", "null"):
        return json.loads(t)
    with open(t) as fh:
        return json.load(fh)


# --------------------------------------------------------------------------
# group objects

def load_region(group: GroupSpec, obj) -> Region:
    if isinstance(obj, Region):
        return obj
    if isinstance(obj, dict):
        members = [parse_element(group, x) for x in obj.get("members", [])]
        return Region.of(group, members, obj.get("complement", False))
    if obj == "all":
        return Region.everything()
    return Region.of(group, [parse_element(group, x) for x in obj])


def load_function(group: GroupSpec, obj) -> GroupFunction:
    """``{element: value}`` atoms, or a list of values in element order."""
    if isinstance(obj, dict) and "atoms" in obj:
        obj = obj["atoms"]
    if isinstance(obj, dict):
        return GroupFunction(group, {parse_element(group, k): parse_scalar(v) for k, v in obj.items()})
    return GroupFunction.from_values(group, [parse_scalar(v) for v in obj])


def dump_function(f: GroupFunction) -> dict:
    return {element_str(x): fmt(v) for x, v in f.items()}


def load_functional(group: GroupSpec, obj) -> MeasureFunctional:
    """``{"constant": c, "atoms": {...}}``; also ``"haar"``, ``"-haar"``, ``"delta0"``."""
    if isinstance(obj, MeasureFunctional):
        return obj
    if isinstance(obj, str):
        named = {"haar": MeasureFunctional.haar(group), "-haar": MeasureFunctional.haar(group, -1),
                 "delta0": MeasureFunctional.delta(group)}
        if obj not in named:
            raise ValueError(f"unknown functional {obj!r}")
        return named[obj]
    if isinstance(obj, list):
        return MeasureFunctional.from_values(group, [parse_scalar(v) for v in obj])
    atoms = {parse_element(group, k): parse_scalar(v) for k, v in obj.get("atoms", {}).items()}
    return MeasureFunctional(group, atoms, constant=parse_scalar(obj.get("constant", 0)))


def load_problem(obj, mode: str | None = None) -> Instance:
    """Problem JSON -> :class:`Instance`; ``mode`` overrides the file's mode."""
    if "group" not in obj or "omega" not in obj:
        raise ValueError("problem needs 'group' and 'omega'")
    g = make_group(obj["group"])
    omega = load_region(g, obj["omega"])
    om_minus = load_region(g, obj["omega_minus"]) if obj.get("omega_minus") is not None else None
    rho = load_functional(g, obj["rho"]) if obj.get("rho") is not None else None
    sigma = load_functional(g, obj["sigma"]) if obj.get("sigma") is not None else None
    return make_instance(g, omega, rho, sigma, om_minus, mode=mode or obj.get("mode"))


# --------------------------------------------------------------------------
# certificates

def certificate_json(inst: Instance, gap: GapCertificate) -> dict:
    """Everything needed to recheck a solve without rerunning it."""
    out = {"type": "delsarte_certificate", "problem": inst.to_json()}
    out.update(gap.to_json())
    return out


def load_dual_certificate(group: GroupSpec, obj) -> DualCertificate:
    km = obj.get("kappa_minus")
    return DualCertificate(
        parse_scalar(obj["s"]),
        load_functional(group, obj["kappa"]),
        load_functional(group, obj["nu"]),
        None if km is None else load_functional(group, km),
    )


def zd_certificate_json(cert) -> dict:
    out = {"type": "zd_certificate"}
    out.update(cert.to_json())
    out["exact"] = cert.exact
    return out


def load_zd_certificate(obj):
    from .zd_bounds import ZdCertificate

    d = int(obj["d"])
    g = GroupSpec("free", rank=d)
    chars = {}
    for k, v in obj.get("characters", {}).items():
        steps = k.split("/")[0]
        chars[tuple(int(c) for c in steps.split(","))] = parse_scalar(v)
    exact = bool(obj.get("exact", d == 1))
    conv = (lambda v: v) if exact else float

    def fn(atoms):
        return GroupFunction(g, {parse_element(g, x): conv(parse_scalar(v)) for x, v in atoms.items()},
                             exact=None if exact else False)

    return ZdCertificate(d, [parse_element(g, x) for x in obj["omega"]], int(obj["window"]),
                         conv(parse_scalar(obj["s"])), fn(obj["nu_finite"]),
                         {k: conv(v) for k, v in chars.items()}, fn(obj["kappa"]), exact)
