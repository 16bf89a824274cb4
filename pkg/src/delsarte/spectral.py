"""Fourier analysis on finite Abelian groups and on Z^d.

On a finite group ``G = Z_{n_1} x ... x Z_{n_d}`` the dual group is
identified with ``G`` itself through ``chi_y(x) = exp(2 pi i <x, y>)``,
``<x, y> = sum_j x_j y_j / n_j``, and

    f^(y) = sum_x f(x) conj(chi_y(x)).

When the exponent of ``G`` lies in {1, 2, 3, 4, 6} every ``2 cos(2 pi <x,y>)``
is an integer in {0, +-1, +-2}, so spectra of even rational functions are
computed exactly.  On ``Z^d`` the transform of a finitely supported ``f`` is
the trigonometric polynomial ``theta -> sum_x f(x) exp(-i x.theta)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping

import numpy as np

from ._scalars import FLOAT_TOL, Verdict, all_exact, to_scalar
from .groups import Element, GroupSpec, element_str

_TWO_COS = {  # 2 cos(2 pi k / e) for the exponents with rational character real parts
    1: (2,),
    2: (2, -2),
    3: (2, -1, -1),
    4: (2, 0, -2, 0),
    6: (2, 1, -1, -2, -1, 1),
}


class GroupFunction:
    """Real-valued, finitely supported function on a group.

    Values are all exact rationals or all floats.  On ``Z^d`` the group's
    window is widened, if necessary, so that it contains the support.
    """

    __slots__ = ("group", "values")

    def __init__(self, group: GroupSpec, values: Mapping | None = None, exact: bool | None = None):
        vals = {}
        for k, v in (values or {}).items():
            x = group.elem(k)
            v = to_scalar(v, exact)
            vals[x] = vals.get(x, 0) + v
        if exact is None and any(isinstance(v, float) for v in vals.values()):
            vals = {k: float(v) for k, v in vals.items()}
        vals = {k: v for k, v in vals.items() if v != 0}
        if not group.is_finite and vals:
            radius = max(max(abs(c) for c in x) for x in vals)
            if radius > group.window:
                group = group.with_window(radius)
        self.group = group
        self.values = vals

    # constructors -------------------------------------------------------
    @classmethod
    def from_values(cls, group: GroupSpec, seq: Iterable) -> "GroupFunction":
        """Values listed in :meth:`GroupSpec.elements` order."""
        seq = list(seq)
        elems = group.elements()
        if len(seq) != len(elems):
            raise ValueError(f"expected {len(elems)} values, got {len(seq)}")
        return cls(group, dict(zip(elems, seq)))

    @classmethod
    def delta(cls, group: GroupSpec, x=None, c=1) -> "GroupFunction":
        return cls(group, {group.zero if x is None else group.elem(x): c})

    @classmethod
    def indicator(cls, group: GroupSpec, points: Iterable, c=1) -> "GroupFunction":
        return cls(group, {group.elem(x): c for x in points})

    @classmethod
    def constant(cls, group: GroupSpec, c=1) -> "GroupFunction":
        if not group.is_finite:
            raise ValueError("constant functions on Z^d are not finitely supported")
        return cls(group, {x: c for x in group.elements()})

    # access -------------------------------------------------------------
    @property
    def exact(self) -> bool:
        return all_exact(self.values.values())

    def _zero(self):
        return Fraction(0) if self.exact else 0.0

    def __call__(self, x):
        return self.values.get(self.group.elem(x), self._zero())

    __getitem__ = __call__

    def support(self) -> list[Element]:
        return sorted(self.values)

    def items(self):
        return sorted(self.values.items())

    def to_array(self) -> list:
        """Values on every group element (finite) or window point (Z^d)."""
        z = self._zero()
        return [self.values.get(x, z) for x in self.group.elements()]

    def total(self):
        return sum(self.values.values(), self._zero())

    def sup_norm(self):
        return max((abs(v) for v in self.values.values()), default=self._zero())

    def radius(self) -> int:
        return max((max(abs(c) for c in x) for x in self.values), default=0)

    # algebra ------------------------------------------------------------
    def _merged_group(self, other: "GroupFunction") -> GroupSpec:
        if self.group.kind != other.group.kind or self.group.orders != other.group.orders \
                or self.group.rank != other.group.rank:
            raise ValueError("functions live on different groups")
        if self.group.is_finite:
            return self.group
        return self.group.with_window(max(self.group.window, other.group.window))

    def __add__(self, other: "GroupFunction") -> "GroupFunction":
        out = dict(self.values)
        for k, v in other.values.items():
            out[k] = out.get(k, 0) + v
        return GroupFunction(self._merged_group(other), out)

    def __neg__(self) -> "GroupFunction":
        return GroupFunction(self.group, {k: -v for k, v in self.values.items()})

    def __sub__(self, other: "GroupFunction") -> "GroupFunction":
        return self + (-other)

    def __mul__(self, c) -> "GroupFunction":
        if isinstance(c, GroupFunction):
            return GroupFunction(self._merged_group(c),
                                 {k: v * c.values[k] for k, v in self.values.items() if k in c.values})
        c = to_scalar(c)
        return GroupFunction(self.group, {k: v * c for k, v in self.values.items()})

    __rmul__ = __mul__

    def __truediv__(self, c) -> "GroupFunction":
        c = to_scalar(c)
        return GroupFunction(self.group, {k: v / c for k, v in self.values.items()})

    def reflect(self) -> "GroupFunction":
        """``x -> f(-x)``."""
        return GroupFunction(self.group, {self.group.neg(k): v for k, v in self.values.items()})

    def translate(self, x) -> "GroupFunction":
        """``T_x f = f(. - x)``."""
        x = self.group.elem(x)
        return GroupFunction(self.group, {self.group.add(k, x): v for k, v in self.values.items()})

    def is_even(self, tol: float = 0.0) -> bool:
        g = self.group
        z = self._zero()
        for k, v in self.values.items():
            if abs(v - self.values.get(g.neg(k), z)) > tol:
                return False
        return True

    def is_odd(self, tol: float = 0.0) -> bool:
        g = self.group
        z = self._zero()
        for k, v in self.values.items():
            if abs(v + self.values.get(g.neg(k), z)) > tol:
                return False
        return True

    def as_float(self) -> "GroupFunction":
        return GroupFunction(self.group, {k: float(v) for k, v in self.values.items()}, exact=False)

    def __eq__(self, other) -> bool:
        if not isinstance(other, GroupFunction):
            return NotImplemented
        return self.values == other.values and self.group.orders == other.group.orders \
            and self.group.kind == other.group.kind

    def __repr__(self) -> str:
        body = ", ".join(f"{element_str(k)}: {v}" for k, v in self.items())
        return f"GroupFunction({self.group.describe()}, {{{body}}})"

    def to_json(self) -> dict:
        from ._scalars import fmt
        return {"group": self.group.to_json(),
                "atoms": {element_str(k): fmt(v) for k, v in self.items()}}


def convolve(f: GroupFunction, g: GroupFunction) -> GroupFunction:
    """``(f * g)(x) = sum_y f(y) g(x - y)``."""
    grp = f._merged_group(g)
    out: dict = {}
    for x, a in f.values.items():
        for y, b in g.values.items():
            z = grp.add(x, y)
            out[z] = out.get(z, 0) + a * b
    return GroupFunction(grp, out)


def even_odd_split(f: GroupFunction) -> tuple[GroupFunction, GroupFunction]:
    """``f = f_e + f_o`` with ``f_e = (f + f~)/2`` even and ``f_o`` odd."""
    r = f.reflect()
    half = Fraction(1, 2) if f.exact else 0.5
    return (f + r) * half, (f - r) * half


# --------------------------------------------------------------------------
# finite groups

@dataclass(frozen=True)
class _CharTable:
    elements: tuple
    index: dict
    exponent: int
    phase: np.ndarray        # e * <x, y> mod e
    cos: np.ndarray
    sin: np.ndarray
    two_cos: np.ndarray | None  # object array of ints, exact exponents only


@lru_cache(maxsize=64)
def char_table(orders: tuple[int, ...]) -> _CharTable:
    g = GroupSpec("finite", orders=orders)
    elems = tuple(g.elements())
    e = g.exponent
    X = np.array(elems, dtype=np.int64).reshape(len(elems), len(orders))
    w = np.array([e // n for n in orders], dtype=np.int64)
    phase = ((X * w) @ X.T) % e
    ang = 2 * np.pi * phase / e
    two_cos = None
    if e in _TWO_COS:
        table = np.array(_TWO_COS[e], dtype=object)
        two_cos = table[phase]
    for arr in (phase,):
        arr.setflags(write=False)
    return _CharTable(elems, {x: i for i, x in enumerate(elems)}, e, phase,
                      np.cos(ang), np.sin(ang), two_cos)


@dataclass(frozen=True)
class Spectrum:
    """Fourier transform on a finite group, indexed like ``group.elements()``."""

    group: GroupSpec
    values: tuple
    exact: bool

    def __getitem__(self, y):
        return self.values[char_table(self.group.orders).index[self.group.elem(y)]]

    def is_real(self, tol: float = 1e-9) -> bool:
        if self.exact:
            return True
        return all(abs(complex(v).imag) <= tol for v in self.values)

    def real(self) -> list:
        if self.exact:
            return list(self.values)
        return [complex(v).real for v in self.values]

    def argmin(self) -> tuple[Element, object]:
        vals = self.real()
        i = min(range(len(vals)), key=lambda k: vals[k])
        return self.group.elements()[i], vals[i]

    def to_json(self) -> list:
        from ._scalars import fmt
        if self.exact:
            return [fmt(v) for v in self.values]
        if self.is_real():
            return [complex(v).real for v in self.values]
        return [[complex(v).real, complex(v).imag] for v in self.values]


def _require_exact_group(group: GroupSpec):
    if not group.exact_available:
        raise ValueError(f"exact mode unavailable: exponent {group.exponent}")


def transform(f: GroupFunction, mode: str | None = None):
    """Fourier transform.

    Finite groups return a :class:`Spectrum`; exact rational values are used
    when the group exponent allows it, ``f`` is even and rational (``mode``
    ``None`` picks this automatically, ``"exact"`` insists, ``"float"``
    never).  On ``Z^d`` a :class:`TrigPolynomial` is returned.
    """
    g = f.group
    if not g.is_finite:
        if mode == "exact" and not f.exact:
            raise ValueError("exact mode requires rational data")
        return TrigPolynomial(f)
    if mode == "exact":
        _require_exact_group(g)
        if not f.exact:
            raise ValueError("exact mode requires rational data")
        if not f.is_even():
            raise ValueError("exact spectra are only available for even functions")
    tab = char_table(g.orders)
    if mode != "float" and g.exact_available and f.exact and f.is_even():
        v = np.array(f.to_array(), dtype=object)
        vals = tab.two_cos.dot(v) if len(v) else v
        return Spectrum(g, tuple(Fraction(x) / 2 for x in vals), True)
    v = np.array([float(x) for x in f.to_array()])
    vals = tab.cos @ v - 1j * (tab.sin @ v)
    return Spectrum(g, tuple(complex(x) for x in vals), False)


def inverse_transform(spec: Spectrum) -> GroupFunction:
    g = spec.group
    tab = char_table(g.orders)
    n = g.order
    if spec.exact and tab.two_cos is not None:
        v = np.array(spec.values, dtype=object)
        vals = tab.two_cos.dot(v)
        return GroupFunction.from_values(g, [Fraction(x) / (2 * n) for x in vals])
    v = np.array([complex(x) for x in spec.values])
    vals = (tab.cos @ v + 1j * (tab.sin @ v)) / n
    if np.max(np.abs(vals.imag), initial=0.0) > 1e-9 * max(1.0, np.max(np.abs(vals), initial=0.0)):
        raise ValueError("spectrum does not come from a real-valued function")
    return GroupFunction.from_values(g, [float(x) for x in vals.real])


def spectrum_from_orbit_values(group: GroupSpec, values: Mapping) -> Spectrum:
    """Even spectrum given by one value per dual inversion orbit."""
    g = group
    full = {}
    for y, v in values.items():
        y = g.elem(y)
        full[y] = v
        full[g.neg(y)] = v
    exact = all_exact(full.values())
    zero = Fraction(0) if exact else 0.0
    return Spectrum(g, tuple(full.get(y, zero) for y in g.elements()), exact)


# --------------------------------------------------------------------------
# Z^d: trigonometric polynomials

class TrigPolynomial:
    """``theta -> sum_x f(x) exp(-i x.theta)`` for finitely supported ``f`` on Z^d."""

    def __init__(self, f: GroupFunction):
        if f.group.is_finite:
            raise ValueError("trigonometric polynomials live on Z^d")
        self.f = f
        self.rank = f.group.rank

    def __call__(self, theta) -> np.ndarray:
        th = np.asarray(theta, dtype=float)
        if self.rank == 1 and th.ndim <= 1:
            th = th.reshape(-1, 1) if th.ndim == 1 else th.reshape(1, 1)
        pts = np.array(list(self.f.values), dtype=float).reshape(-1, self.rank)
        coef = np.array([float(v) for v in self.f.values.values()])
        if not len(coef):
            return np.zeros(th.shape[0])
        return np.exp(-1j * th @ pts.T) @ coef

    def cosine_coefficients(self) -> dict[int, object]:
        """Coefficients ``a_k`` of ``sum_k a_k cos(k theta)`` (rank 1, even part)."""
        if self.rank != 1:
            raise ValueError("cosine expansion only for Z")
        out: dict[int, object] = {}
        for (x,), v in self.f.values.items():
            k = abs(x)
            out[k] = out.get(k, 0) + v
        return out


def _cheb_to_monomial(a: list) -> list:
    """Coefficients of ``sum a_k T_k(t)`` in the monomial basis (low to high)."""
    n = len(a)
    out = [Fraction(0)] * max(n, 1)
    if n == 0:
        return out
    out[0] += a[0]
    if n > 1:
        out[1] += a[1]
    prev, cur = [1], [0, 1]
    for k in range(2, n):
        nxt = [0] * (k + 1)
        for i, c in enumerate(cur):
            nxt[i + 1] += 2 * c
        for i, c in enumerate(prev):
            nxt[i] -= c
        prev, cur = cur, nxt
        if a[k]:
            for i, c in enumerate(cur):
                if c:
                    out[i] += a[k] * c
    return out


def cosine_polynomial(f: GroupFunction) -> list:
    """Monomial coefficients of ``P`` with ``Re f^(theta) = P(cos theta)`` (f on Z)."""
    coeffs = TrigPolynomial(f).cosine_coefficients()
    deg = max(coeffs, default=0)
    a = [Fraction(0)] * (deg + 1)
    for k, v in coeffs.items():
        a[k] += Fraction(v)
    return _cheb_to_monomial(a)


def _shift(c: list, s: int) -> list:
    """Coefficients of ``p(x + s)`` (low to high), in place on a copy."""
    c = list(c)
    n = len(c)
    for i in range(n - 1):
        for j in range(n - 2, i - 1, -1):
            c[j] += s * c[j + 1]
    return c


def _positive_on_unit(q: list, max_boxes: int = 512):
    """Sign of an integer polynomial on ``[0, 1]`` by Bernstein-type bisection.

    Returns ``(True, None)`` if ``q > 0`` on the whole interval,
    ``(False, u)`` with ``q(u) < 0`` at a rational ``u``, or ``(None, None)``
    when the box budget runs out (a zero touching from above, typically).
    A piece is positive when ``(1 + x)^n q(1 / (1 + x))`` has only positive
    coefficients, i.e. all its Bernstein coefficients are positive.
    """
    n = len(q) - 1
    stack = [(q, Fraction(0), Fraction(1))]
    boxes = 0
    while stack:
        c, lo, hi = stack.pop()
        boxes += 1
        if boxes > max_boxes:
            return None, None
        left, right = c[0], sum(c)
        if left < 0:
            return False, lo
        if right < 0:
            return False, hi
        if left > 0 and all(v > 0 for v in _shift(c[::-1], 1)):
            continue
        half = [v << (n - i) for i, v in enumerate(c)]   # 2^n q(u / 2)
        g = 0
        for v in half:
            g = math.gcd(g, v)
        if g > 1:
            half = [v // g for v in half]
        mid = (lo + hi) / 2
        stack.append((_shift(half, 1), mid, hi))
        stack.append((half, lo, mid))
    return True, None


def _odd_part(coeffs: list) -> tuple[list, bool]:
    """Integer coefficients of ``lc * prod f_i`` over the odd-multiplicity
    square-free factors ``f_i`` of ``P``, and whether ``P`` has any factor of
    even multiplicity.  The result has the sign of ``P`` wherever ``P`` is
    nonzero."""
    import sympy as sp

    t = sp.Symbol("t")
    P = sp.Poly([sp.Rational(c.numerator, c.denominator) for c in map(Fraction, reversed(coeffs))],
                t, domain=sp.QQ)
    lc, factors = P.sqf_list()
    H = sp.Poly(lc, t, domain=sp.QQ)
    for f, m in factors:
        if m % 2:
            H = H * f
    H = [Fraction(int(c.p), int(c.q)) for c in reversed(H.all_coeffs())]
    den = 1
    for c in H:
        den = math.lcm(den, c.denominator)
    return [int(c * den) for c in H], any(m % 2 == 0 for _, m in factors)


def _nonnegative_fast(coeffs: list, strict: bool):
    """Exact verdict via endpoint deflation and bisection, or None if undecided.

    Bisection runs on the odd-multiplicity part of ``P``, which is square
    free, so interior zeros are sign changes and get found.
    """
    R, repeated = _odd_part(coeffs)
    if strict and repeated:
        return None
    roots = 0
    for e in (1, -1):
        while len(R) > 1 and sum(v * e ** i for i, v in enumerate(R)) == 0:
            # synthetic division by (t - e)
            out = [0] * (len(R) - 1)
            acc = 0
            for i in range(len(R) - 1, 0, -1):
                acc = R[i] + acc * e
                out[i - 1] = acc
            # divide by (1 - t) or (1 + t), both nonnegative on the interval
            R = [-v for v in out] if e == 1 else out
            roots += 1
    if strict and roots:
        return None
    # R(2u - 1) on u in [0, 1]; (1 - t) and (1 + t) are >= 0 there
    q = _shift(R, -1)
    q = [v << i for i, v in enumerate(q)]
    ok, u = _positive_on_unit(q)
    if ok is None:
        return None
    if ok:
        samples = (Fraction(-1), Fraction(0), Fraction(1))
        vals = [sum(Fraction(c) * x ** i for i, c in enumerate(coeffs)) for x in samples]
        k = min(range(3), key=vals.__getitem__)
        return Verdict(True, reason="exact bisection", value=vals[k], witness=samples[k],
                       details={"endpoint_roots": roots})
    t = 2 * u - 1
    if abs(t) == 1:
        # R < 0 at an endpoint where P vanishes; step inside until P < 0
        step = Fraction(1, 2)
        while sum(v * (t - t * step) ** i for i, v in enumerate(R)) >= 0:
            step /= 2
        t = t - t * step
    val = sum(Fraction(c) * t ** i for i, c in enumerate(coeffs))
    if val < 0:
        return Verdict(False, reason="negative value", witness=t, value=val)
    return None


def nonnegative_on_interval(coeffs: list, strict: bool = False) -> Verdict:
    """Exact test ``P(t) >= 0`` (or ``> 0``) on ``[-1, 1]`` for rational ``P``.

    Factors of even multiplicity are dropped, zeros at the endpoints are
    divided out and the rest is shown positive (or negative somewhere) by
    exact Bernstein bisection.  When that is inconclusive, real roots of the square-free part are isolated exactly; the
    sign of ``P`` is then constant on each gap and is sampled at a rational
    point of every gap and at both endpoints.
    """
    import sympy as sp

    t = sp.Symbol("t")
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs = coeffs[:-1]
    if all(c == 0 for c in coeffs):
        return Verdict(not strict, reason="identically zero", value=Fraction(0), margin=Fraction(0))
    if len(coeffs) > 1:
        fast = _nonnegative_fast(coeffs, strict)
        if fast is not None:
            return fast
    P = sp.Poly([sp.Rational(c.numerator, c.denominator) for c in reversed(coeffs)], t, domain=sp.QQ)
    if P.degree() <= 0:
        c = Fraction(coeffs[0])
        ok = c > 0 if strict else c >= 0
        return Verdict(ok, reason="constant", value=c, margin=c, witness=Fraction(1))
    Q = P.sqf_part()
    spans = sorted((Fraction(int(a.p), int(a.q)), Fraction(int(b.p), int(b.q)))
                   for (a, b), _ in Q.intervals(inf=-1, sup=1))
    # isolating spans may share an endpoint; shrink them until they are disjoint
    while any(spans[i][1] >= spans[i + 1][0] for i in range(len(spans) - 1)):
        new = []
        for a, b in spans:
            if a < b:
                lo, hi = Q.refine_root(sp.Rational(a.numerator, a.denominator),
                                       sp.Rational(b.numerator, b.denominator), eps=(b - a) / 4)
                a, b = Fraction(int(lo.p), int(lo.q)), Fraction(int(hi.p), int(hi.q))
            new.append((a, b))
        spans = new
    # each span holds one root; between two roots lies a span endpoint or a gap midpoint
    samples = [Fraction(-1), Fraction(1)]
    left = Fraction(-1)
    for a, b in spans:
        samples += [a, b]
        if a > left:
            samples.append((left + a) / 2)
        left = max(left, b)
    if left < 1:
        samples.append((left + 1) / 2)
    samples = [x for x in samples if -1 <= x <= 1]
    worst_t, worst = None, None
    for s in samples:
        v = P.eval(sp.Rational(s.numerator, s.denominator))
        v = Fraction(int(v.p), int(v.q))
        if worst is None or v < worst:
            worst_t, worst = s, v
    if worst < 0:
        return Verdict(False, reason="negative value", witness=worst_t, value=worst)
    if strict and spans:
        a, b = spans[0]
        return Verdict(False, reason="has a zero", witness=(a + b) / 2, value=Fraction(0))
    return Verdict(True, reason="exact root isolation", value=worst, witness=worst_t,
                   details={"roots_in_interval": len(spans)})


@dataclass(frozen=True)
class CertifiedBound:
    """Certified lower bound for a real trigonometric polynomial on the torus."""

    bound: float
    resolution: int
    gradient_bound: float
    grid_min: float
    argmin: tuple

    def to_json(self) -> dict:
        return {"bound": self.bound, "resolution": self.resolution,
                "gradient_bound": self.gradient_bound, "grid_min": self.grid_min,
                "argmin": list(self.argmin)}


def trig_poly_min_certified(f: GroupFunction, resolution: int | None = None) -> CertifiedBound:
    """Certified lower bound for ``min Re f^`` over the torus, ``d <= 2``.

    The torus is covered by the cells of an ``N^d`` grid (``N = resolution``).
    On each cell ``f^ >= f^(c) - |grad f^(c)|_1 h/2 - H (h/2)^2 / 2`` with
    ``h = 2 pi / N`` and ``H = sum |f(x)| |x|_1^2``.  The bound is maximized
    over the dyadic sub-grids too, so it never decreases when ``N`` doubles.
    """
    g = f.group
    if g.is_finite:
        raise ValueError("certified minima are for Z^d")
    d = g.rank
    if d > 2:
        raise ValueError("torus certification supports d <= 2 only")
    n = int(resolution or (1 << 18 if d == 1 else 1 << 10))
    pts = list(f.values)
    vals = np.array([float(v) for v in f.values.values()])
    if not pts:
        return CertifiedBound(0.0, n, 0.0, 0.0, (0.0,) * d)
    X = np.array(pts, dtype=np.int64).reshape(-1, d)
    l1 = np.abs(X).sum(axis=1)
    grad_bound = float(np.sum(l1 * np.abs(vals)))
    hess = float(np.sum(l1.astype(float) ** 2 * np.abs(vals)))
    if grad_bound == 0.0:  # constant spectrum
        c = float(vals.sum())
        return CertifiedBound(c, n, 0.0, c, (0.0,) * d)
    shape = (n,) * d
    idx = tuple((X[:, j] % n) for j in range(d))
    a = np.zeros(shape)
    np.add.at(a, idx, vals)
    spec = np.fft.fftn(a).real
    grads = []
    for j in range(d):
        b = np.zeros(shape)
        np.add.at(b, idx, X[:, j] * vals)
        grads.append(np.fft.fftn(b).imag)
    gnorm = np.sum(np.abs(grads), axis=0)
    rounding = 1e-14 * float(np.sum(np.abs(vals[l1 > 0]))) * max(1, int(np.log2(n)))
    best = -math.inf
    step = 1
    while n // step >= 8 and n % step == 0:
        h = 2 * np.pi * step / n
        sl = (slice(None, None, step),) * d
        cell = spec[sl] - gnorm[sl] * h / 2 - hess * (h / 2) ** 2 / 2
        best = max(best, float(cell.min()) - rounding)
        step *= 2
    k = np.unravel_index(int(np.argmin(spec)), shape)
    argmin = tuple(2 * np.pi * int(c) / n for c in k)
    return CertifiedBound(best, n, grad_bound, float(spec.min()), argmin)


# --------------------------------------------------------------------------
# positive definiteness tests

def _finite_pd(f: GroupFunction, strict: bool = False) -> Verdict:
    g = f.group
    exact = f.exact and g.exact_available
    tol = 0 if f.exact else FLOAT_TOL * max(1.0, float(f.sup_norm()))
    if not f.is_even(tol=tol):
        spec = transform(f, mode="float")
        i = max(range(len(spec.values)), key=lambda k: abs(spec.values[k].imag))
        return Verdict(False, reason="not even: spectrum not real",
                       witness=g.elements()[i], value=spec.values[i])
    spec = transform(f, mode=None if exact else "float")
    y, low = spec.argmin()
    if exact:
        ok = low > 0 if strict else low >= 0
    else:
        ok = low > FLOAT_TOL if strict else low >= -FLOAT_TOL
    return Verdict(ok, reason="" if ok else ("spectrum not strictly positive" if strict
                                             else "negative spectrum"),
                   witness=y, value=low, margin=low)


def _separable_factors(f: GroupFunction):
    """``(g, h)`` with ``f(x, y) = g(x) h(y)`` for rational ``f`` on Z^2, else None."""
    if f.group.rank != 2 or not f.exact or not f.values:
        return None
    vals = f.values
    zero = Fraction(0)
    (x0, y0), c = min(vals.items())
    xs = sorted({x for x, _ in vals})
    ys = sorted({y for _, y in vals})
    col = {x: vals.get((x, y0), zero) for x in xs}
    row = {y: vals.get((x0, y), zero) for y in ys}
    for x in xs:
        for y in ys:
            if vals.get((x, y), zero) * c != col[x] * row[y]:
                return None
    Z = GroupSpec("free", rank=1)
    g = GroupFunction(Z, col)
    h = GroupFunction(Z, {y: v / c for y, v in row.items()})
    return g, h


def _free_pd(f: GroupFunction, strict: bool = False, resolution: int | None = None) -> Verdict:
    tol = 0 if f.exact else FLOAT_TOL * max(1.0, float(f.sup_norm()))
    if not f.is_even(tol=tol):
        return Verdict(False, reason="not even: spectrum not real")
    parts = _separable_factors(f)
    if parts is not None:
        # f^ = g^ h^; nonnegative iff both factors have one common sign
        g, h = parts
        if g.is_even() and h.is_even():
            vs = [nonnegative_on_interval(cosine_polynomial(u), strict=strict) for u in (g, h)]
            ws = [nonnegative_on_interval(cosine_polynomial(-u), strict=strict) for u in (g, h)]
            if (vs[0].ok and vs[1].ok) or (ws[0].ok and ws[1].ok):
                return Verdict(True, reason="exact: product of nonnegative cosine polynomials",
                               margin=Fraction(0))
    if f.group.rank == 1 and f.exact:
        v = nonnegative_on_interval(cosine_polynomial(f), strict=strict)
        if v.witness is not None:  # report the torus point theta = arccos(t)
            v.witness = (math.acos(max(-1.0, min(1.0, float(v.witness)))),)
        v.margin = v.value
        return v
    cb = trig_poly_min_certified(f, resolution)
    ok = cb.bound > 0 if strict else cb.bound >= -FLOAT_TOL
    return Verdict(ok, reason="certified grid bound" if ok else "grid bound negative",
                   witness=cb.argmin, value=cb.grid_min, margin=cb.bound,
                   details=cb.to_json())


def is_positive_definite(f: GroupFunction, resolution: int | None = None) -> Verdict:
    """Positive definiteness of a real function via its spectrum.

    Real positive definite functions are even, so non-even input fails at
    once.  On Z the verdict for rational data is exact; on Z^2 or with float
    data it rests on :func:`trig_poly_min_certified`.
    """
    if f.group.is_finite:
        return _finite_pd(f)
    return _free_pd(f, resolution=resolution)


def is_strictly_pd(f, resolution: int | None = None) -> Verdict:
    """Wiener condition: the transform is strictly positive everywhere.

    Accepts a :class:`GroupFunction` or anything with ``to_function()``
    (measure functionals on finite groups, or a constant-plus-finite
    functional whose finite part carries the test on Z^d).
    """
    if hasattr(f, "constant") and hasattr(f, "finite_part"):
        if not f.group.is_finite:
            if f.constant < 0:
                return Verdict(False, reason="negative constant part")
            return _free_pd(f.finite_part(), strict=True, resolution=resolution)
        f = f.to_function()
    if f.group.is_finite:
        return _finite_pd(f, strict=True)
    return _free_pd(f, strict=True, resolution=resolution)


def is_real_sense_pd(f: GroupFunction, resolution: int | None = None) -> Verdict:
    """Quadratic forms with real coefficients are nonnegative.

    Equivalent to the even part being positive definite, since odd parts are
    invisible to real quadratic forms.
    """
    even, _ = even_odd_split(f)
    return is_positive_definite(even, resolution=resolution)


def quadratic_form(f: GroupFunction, points: list, coeffs: list):
    """``sum_jk c_j c_k f(x_j - x_k)`` with real coefficients."""
    g = f.group
    pts = [g.elem(p) for p in points]
    total = 0
    for a, x in zip(coeffs, pts):
        for b, y in zip(coeffs, pts):
            total += a * b * f(g.sub(x, y))
    return total
