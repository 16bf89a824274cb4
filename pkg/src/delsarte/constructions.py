"""Explicit positive definite functions: Urysohn-type kernels, triangle
functions, sign-swap functions and the decomposition ``f = p - q``.

Every builder returns exact rational functions when the input is rational;
checks are bundled in reports so callers (and the CLI) can show which
property held and by how much.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from ._scalars import Verdict, fmt
from .functionals import mixed_norm_X
from .groups import (Element, GroupSpec, LatticeTiling, Region, coset_decompose, difference_set,
                     element_str, sumset)
from .spectral import GroupFunction, convolve, is_positive_definite


def _points(group: GroupSpec, region) -> list[Element]:
    if isinstance(region, Region):
        if region.complement:
            raise ValueError("a finite set is required here")
        return sorted(region.members)
    return sorted({group.elem(x) for x in region})


def _region(points) -> Region:
    return Region(frozenset(points), False)


# --------------------------------------------------------------------------
# Urysohn-type kernels

def _box_kernel_1d(n: int, modulus: int | None) -> dict[int, Fraction]:
    """``(1/|H|) 1_H * 1_H`` for ``H = {-n..n}`` in Z or in Z_modulus."""
    size = 2 * n + 1
    if modulus is None:
        return {x: Fraction(size - abs(x), size) for x in range(-2 * n, 2 * n + 1)}
    if size >= modulus:
        return {x: Fraction(1) for x in range(modulus)}
    counts: dict[int, int] = {}
    for a in range(-n, n + 1):
        for b in range(-n, n + 1):
            x = (a + b) % modulus
            counts[x] = counts.get(x, 0) + 1
    return {x: Fraction(c, size) for x, c in counts.items()}


def _product_kernel(group: GroupSpec, radii: list[int]) -> GroupFunction:
    factors = []
    for j, n in enumerate(radii):
        mod = group.orders[j] if group.is_finite else None
        factors.append(_box_kernel_1d(n, mod))
    vals: dict = {(): Fraction(1)}
    for fac in factors:
        vals = {x + (c,): v * w for x, v in vals.items() for c, w in fac.items()}
    return GroupFunction(group, vals)


def _radius(group: GroupSpec, x: Element) -> list[int]:
    if group.is_finite:
        return [min(c, n - c) for c, n in zip(x, group.orders)]
    return [abs(c) for c in x]


def urysohn_pd_kernel(group: GroupSpec, K, eps) -> GroupFunction:
    """Positive definite ``k`` with ``k(0) = 1``, ``0 <= k`` and ``k >= 1 - eps`` on ``K``.

    ``k = (1/|H|) 1_H * 1_H`` with ``H`` the symmetric box of radius ``n``;
    ``n`` starts at the smallest box containing ``K`` and grows until the
    minimum of ``k`` over ``K`` reaches ``1 - eps``.  On a finite group the
    box wraps around and eventually becomes the whole group (``k = 1``).
    """
    eps = Fraction(eps) if not isinstance(eps, float) else Fraction(eps).limit_denominator(10**12)
    if not 0 < eps < 1:
        raise ValueError("eps must lie strictly between 0 and 1")
    pts = _points(group, K)
    if not pts:
        pts = [group.zero]
    d = group.rank
    radii = [0] * d
    for x in pts:
        radii = [max(a, b) for a, b in zip(radii, _radius(group, x))]
    target = 1 - eps
    while True:
        k = _product_kernel(group, radii)
        if min(k(x) for x in pts) >= target:
            return k
        full = group.is_finite and all(2 * n + 1 >= m for n, m in zip(radii, group.orders))
        if full:  # cannot happen: k = 1 everywhere
            return k
        radii = [n + 1 if not group.is_finite or 2 * n + 1 < m else n
                 for n, m in zip(radii, group.orders if group.is_finite else [None] * d)]


@dataclass
class KernelReport:
    kernel: GroupFunction
    K: list
    eps: Fraction
    checks: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(v.ok for v in self.checks.values())

    def to_json(self) -> dict:
        return {"kernel": self.kernel.to_json()["atoms"],
                "K": [element_str(x) for x in self.K], "eps": fmt(self.eps),
                "checks": {k: {"ok": v.ok, "reason": v.reason, "margin": _jsonable(v.margin)}
                           for k, v in self.checks.items()}}


def _jsonable(v):
    if v is None or isinstance(v, (bool, int, str)):
        return v
    if isinstance(v, (Fraction, float)):
        return fmt(v)
    return str(v)


def check_kernel(k: GroupFunction, K, eps) -> KernelReport:
    """The five kernel properties, each as a verdict."""
    g = k.group
    pts = _points(g, K)
    eps = Fraction(eps) if not isinstance(eps, float) else Fraction(eps).limit_denominator(10**12)
    low = min((v for v in k.values.values()), default=Fraction(0))
    pd = is_positive_definite(k)
    k_min = min(k(x) for x in pts) if pts else Fraction(1)
    checks = {
        "value_at_zero": Verdict(k(g.zero) == 1, value=k(g.zero)),
        "nonnegative": Verdict(low >= 0, margin=low),
        "finite_support": Verdict(g.is_finite or len(k.values) < float("inf"), value=len(k.values)),
        "positive_definite": Verdict(pd.ok, reason=pd.reason, margin=pd.margin),
        "near_one_on_K": Verdict(k_min >= 1 - eps, margin=k_min - (1 - eps), value=k_min),
    }
    return KernelReport(k, pts, eps, checks)


# --------------------------------------------------------------------------
# triangle and sign-swap functions

def triangle_function(group: GroupSpec, V) -> GroupFunction:
    """``r = (1/|V|) 1_V * 1_{-V}``: ``r(x) = |V ∩ (V + x)| / |V|``."""
    pts = _points(group, V)
    if not pts:
        raise ValueError("V must be nonempty")
    ind = GroupFunction.indicator(group, pts)
    return convolve(ind, ind.reflect()) / len(pts)


def pd_difference_block(r: GroupFunction, x) -> GroupFunction:
    """``2r - T_x r - T_{-x} r``, positive definite whenever ``r`` is."""
    g = r.group
    x = g.elem(x)
    return r * 2 - r.translate(x) - r.translate(g.neg(x))


@dataclass
class SignSwapReport:
    k: GroupFunction
    S: list
    V: list
    W: list
    positive_support: Region
    negative_support: Region
    total_sum: object
    value_at_zero: object
    checks: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(v.ok for v in self.checks.values())

    def to_json(self) -> dict:
        return {
            "k": self.k.to_json()["atoms"],
            "S": [element_str(x) for x in self.S], "V": [element_str(x) for x in self.V],
            "W": [element_str(x) for x in self.W],
            "positive_support": [element_str(x) for x in sorted(self.positive_support.members)],
            "negative_support": [element_str(x) for x in sorted(self.negative_support.members)],
            "total_sum": fmt(self.total_sum), "value_at_zero": fmt(self.value_at_zero),
            "checks": {k: {"ok": v.ok, "reason": v.reason, "margin": _jsonable(v.margin)}
                       for k, v in self.checks.items()},
        }


def sign_swap(group: GroupSpec, S, V=None) -> SignSwapReport:
    """Positive definite ``k`` with ``k = -1`` on ``S`` and ``sum k = 0``.

    ``k = (1/(2|V|)) sum_{x in S+W} (2r - T_x r - T_{-x} r)`` with ``r`` the
    triangle function of ``V`` and ``W = V - V``.  Requires ``S`` symmetric,
    ``0`` not in ``S`` and ``(W + W + W) ∩ S`` empty.  The default ``V = {0}``
    gives ``k = |S| delta_0 - 1_S``.
    """
    g = group
    S_pts = _points(g, S)
    V_pts = _points(g, [g.zero] if V is None else V)
    if not V_pts:
        raise ValueError("V must be nonempty")
    if g.zero in S_pts:
        raise ValueError("0 must not lie in S")
    if {g.neg(x) for x in S_pts} != set(S_pts):
        raise ValueError("S must be symmetric")
    W = difference_set(g, V_pts)
    WWW = sumset(g, sumset(g, W, W), W)
    clash = WWW & set(S_pts)
    if clash:
        raise ValueError(f"separation condition violated: (W+W+W) meets S at {element_str(min(clash))}")
    r = triangle_function(g, V_pts)
    SW = sorted(sumset(g, S_pts, W))
    # S + W is symmetric, so the translates by x and -x contribute equally
    k = (r * len(SW) - convolve(GroupFunction.indicator(g, SW), r)) / len(V_pts)
    return _sign_swap_report(k, S_pts, V_pts, sorted(W), SW)


def _sign_swap_report(k, S_pts, V_pts, W, SW) -> SignSwapReport:
    g = k.group
    pos = [x for x, v in k.values.items() if v > 0]
    neg = [x for x, v in k.values.items() if v < 0]
    WW = sumset(g, W, W)
    SWW = sumset(g, SW, W)
    total = k.total()
    pos_mass = sum((v for v in k.values.values() if v > 0), Fraction(0))
    neg_mass = -sum((v for v in k.values.values() if v < 0), Fraction(0))
    on_S = [k(x) for x in S_pts]
    pd = is_positive_definite(k)
    expected_zero = Fraction(len(SW), len(V_pts))
    checks = {
        "positive_part_in_W": Verdict(set(pos) <= set(W)),
        "negative_part_in_S+W+W": Verdict(set(neg) <= SWW),
        "zero_sum": Verdict(total == 0 and pos_mass == neg_mass == len(SW), value=total,
                            details={"positive_mass": pos_mass, "negative_mass": neg_mass}),
        "minus_one_on_S": Verdict(all(v == -1 for v in on_S),
                                  value=max(on_S, default=Fraction(-1))),
        "positive_definite": Verdict(pd.ok, reason=pd.reason, margin=pd.margin),
        "disjoint_parts": Verdict(not set(pos) & set(neg)),
        "value_at_zero": Verdict(k(g.zero) == expected_zero, value=k(g.zero)),
    }
    return SignSwapReport(k, S_pts, V_pts, W, _region(pos), _region(neg), total, k(g.zero), checks)


# --------------------------------------------------------------------------
# f = p - q with p positive definite and q <= 0 on A

@dataclass
class Decomposition:
    f: GroupFunction
    p: GroupFunction
    q: GroupFunction
    A: Region
    V: list
    tiling: LatticeTiling | None
    pieces: list             # (coefficient, S) per sign-swap term
    norm_p: object
    norm_f: object
    norm_bound: object
    checks: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(v.ok for k, v in self.checks.items() if k != "norm_bound")

    def to_json(self) -> dict:
        return {
            "p": self.p.to_json()["atoms"], "q": self.q.to_json()["atoms"],
            "pieces": [{"c": fmt(c), "S": [element_str(x) for x in s]} for c, s in self.pieces],
            "tile_modulus": None if self.tiling is None else self.tiling.modulus,
            "norm_p": fmt(self.norm_p), "norm_f": fmt(self.norm_f), "norm_bound": fmt(self.norm_bound),
            "checks": {k: {"ok": v.ok, "reason": v.reason, "margin": _jsonable(v.margin)}
                       for k, v in self.checks.items()},
        }


def _symmetric_closure(group: GroupSpec, pts: Iterable[Element]) -> list[Element]:
    out = set()
    for x in pts:
        out.add(x)
        out.add(group.neg(x))
    return sorted(out)


def pd_minorant_decompose(f: GroupFunction, A: Region, V=None, tile_modulus: int | None = None) -> Decomposition:
    """Write ``f = p - q`` with ``p`` positive definite and ``p <= f`` on ``A``.

    ``p`` is a nonnegative combination of sign-swap functions.  On Z^d the
    group is tiled by translates of a centered box ``B`` of odd side
    ``tile_modulus`` (default: the smallest box containing ``W + W + W``);
    cells ``B + l`` and ``B - l`` are handled together so that each
    sign-swap set is symmetric, with coefficient the depth of the negative
    part of ``f`` on ``A`` in those cells.  On a finite group a single term
    on ``A ∩ {f < 0}`` (symmetrized) suffices.  Requires
    ``(W + W + W) ∩ A`` empty, ``W = V - V``.
    """
    g = f.group
    V_pts = _points(g, [g.zero] if V is None else V)
    if g.zero not in V_pts:
        raise ValueError("V must contain 0")
    W = sorted(difference_set(g, V_pts))
    WWW = sumset(g, sumset(g, W, W), W)
    bad = [x for x in WWW if x in A]
    if bad:
        raise ValueError(f"A meets W+W+W (at {element_str(min(bad))}); no decomposition of this type")
    neg_A = [x for x, v in f.values.items() if v < 0 and x in A]
    pieces: list = []
    tiling = None
    if g.is_finite:
        if neg_A:
            c = max(-f(x) for x in neg_A)
            pieces.append((c, _symmetric_closure(g, neg_A)))
    else:
        rad = max((max(abs(c) for c in x) for x in WWW), default=0)
        M = tile_modulus or 2 * rad + 1
        tiling = LatticeTiling(g.rank, M, centered=M % 2 == 1)
        if any(max(abs(c) for c in x) > (M - 1) // 2 for x in WWW):
            raise ValueError("tile must contain W+W+W")
        cells: dict = {}
        for x in neg_A:
            lat = coset_decompose(tiling, x)[0]
            key = min(lat, g.neg(lat))
            cells.setdefault(key, []).append(x)
        for key in sorted(cells):
            pts = cells[key]
            c = max(-f(x) for x in pts)
            pieces.append((c, _symmetric_closure(g, pts)))
    p = GroupFunction(g, {}, exact=None if f.exact else False)
    for c, S in pieces:
        rep = sign_swap(g, S, V_pts)
        p = p + rep.k * c
    q = p - f
    return _decomposition_report(f, p, q, A, V_pts, W, tiling, pieces)


def decomposition_norm_bound(f: GroupFunction, V_pts, W, tiling: LatticeTiling | None,
                             count_center: bool = False):
    """``2 N |B + W| / |V| * ||f||_X`` with ``N`` the lattice points in ``B - B - (W + W)``.

    With ``count_center`` the factor is ``N + 1``: the cell at the origin,
    where every term of ``p`` peaks, is then paid for separately.  Only this
    version holds for every input.
    """
    g = f.group
    norm_f = mixed_norm_X(tiling, f)
    if g.is_finite:
        B = g.elements()
        n_lat = 1
    else:
        B = tiling.tile()
        BB = difference_set(g, B)
        WW = sumset(g, W, W)
        region = difference_set(g, BB, WW)
        n_lat = sum(1 for x in region if all(c % tiling.modulus == 0 for c in x))
    BW = sumset(g, B, W)
    if count_center:
        n_lat += 1
    return Fraction(2 * n_lat * len(BW), len(V_pts)) * norm_f, norm_f


def _decomposition_report(f, p, q, A, V_pts, W, tiling, pieces) -> Decomposition:
    g = f.group
    pd = is_positive_definite(p)
    pts_A = [x for x in set(p.values) | set(f.values) if x in A]
    excess = max((p(x) - f(x) for x in pts_A), default=Fraction(0))
    bound, norm_f = decomposition_norm_bound(f, V_pts, W, tiling)
    bound_c, _ = decomposition_norm_bound(f, V_pts, W, tiling, count_center=True)
    norm_p = mixed_norm_X(tiling, p)
    checks = {
        "positive_definite": Verdict(pd.ok, reason=pd.reason, margin=pd.margin),
        "p_below_f_on_A": Verdict(excess <= 0, margin=-excess),
        "reconstruction": Verdict(p - q == f),
        "norm_bound": Verdict(norm_p <= bound, margin=bound - norm_p,
                              reason="" if norm_p <= bound else "mixed norm of p exceeds the bound"),
        "norm_bound_with_center_cell": Verdict(norm_p <= bound_c, margin=bound_c - norm_p),
    }
    return Decomposition(f, p, q, A, V_pts, tiling, pieces, norm_p, norm_f, bound, checks)
