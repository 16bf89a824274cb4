"""Finite Abelian groups, windowed Z^d, regions and lattice tilings.

Elements are integer tuples with one coordinate per cyclic factor.  For a
finite group ``Z_{n_1} x ... x Z_{n_d}`` coordinates are reduced modulo the
orders; for the free group ``Z^d`` they are arbitrary integers and the
``window`` radius only fixes which finite box is used when a finite
representation is needed.  Haar measure is counting measure throughout.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

Element = tuple[int, ...]

#: Exponents for which every character value has a rational real part.
EXACT_EXPONENTS = frozenset({1, 2, 3, 4, 6})


@dataclass(frozen=True)
class GroupSpec:
    """A finite Abelian group (product of cyclic factors) or windowed Z^d."""

    kind: str
    orders: tuple[int, ...] = ()
    rank: int = 0
    window: int = 0

    def __post_init__(self):
        if self.kind == "finite":
            if not self.orders:
                raise ValueError("finite group needs at least one cyclic factor")
            if any(int(n) < 1 for n in self.orders):
                raise ValueError(f"cyclic orders must be >= 1, got {list(self.orders)}")
            object.__setattr__(self, "rank", len(self.orders))
        elif self.kind == "free":
            if self.rank < 1:
                raise ValueError("free group rank must be >= 1")
            if self.window < 0:
                raise ValueError("window radius must be >= 0")
        else:
            raise ValueError(f"unknown group kind {self.kind!r}")

    @property
    def is_finite(self) -> bool:
        return self.kind == "finite"

    @property
    def order(self) -> int:
        if not self.is_finite:
            raise ValueError("Z^d has infinite order")
        return math.prod(self.orders)

    @property
    def exponent(self) -> int | None:
        if not self.is_finite:
            return None
        return math.lcm(*self.orders)

    @property
    def exact_available(self) -> bool:
        """True when character real parts are rational (exponent in {1,2,3,4,6})."""
        return self.is_finite and self.exponent in EXACT_EXPONENTS

    @property
    def zero(self) -> Element:
        return (0,) * self.rank

    def elem(self, x) -> Element:
        """Normalize ``x`` (int or sequence) into a reduced element tuple."""
        if not isinstance(x, (tuple, list)):
            x = (int(x),)
        x = tuple(int(c) for c in x)
        if len(x) != self.rank:
            raise ValueError(f"element {x} has wrong rank for {self}")
        if self.is_finite:
            return tuple(c % n for c, n in zip(x, self.orders))
        return x

    def neg(self, x: Element) -> Element:
        return self.elem(tuple(-c for c in x))

    def add(self, x: Element, y: Element) -> Element:
        return self.elem(tuple(a + b for a, b in zip(x, y)))

    def sub(self, x: Element, y: Element) -> Element:
        return self.elem(tuple(a - b for a, b in zip(x, y)))

    def elements(self) -> list[Element]:
        """All elements (finite group) or the window box [-W, W]^d (Z^d)."""
        if self.is_finite:
            return _finite_elements(self.orders)
        r = range(-self.window, self.window + 1)
        return list(itertools.product(r, repeat=self.rank))

    def in_window(self, x: Element) -> bool:
        if self.is_finite:
            return True
        return all(abs(c) <= self.window for c in x)

    def with_window(self, window: int) -> "GroupSpec":
        if self.is_finite:
            return self
        return GroupSpec("free", rank=self.rank, window=int(window))

    def describe(self) -> str:
        if self.is_finite:
            return " x ".join(f"Z_{n}" for n in self.orders)
        return f"Z^{self.rank} (window {self.window})"

    def to_json(self) -> dict:
        if self.is_finite:
            return {"finite": list(self.orders)}
        return {"free": {"rank": self.rank, "window": self.window}}


@lru_cache(maxsize=None)
def _finite_elements(orders: tuple[int, ...]) -> list[Element]:
    return list(itertools.product(*(range(n) for n in orders)))


def make_group(descriptor) -> GroupSpec:
    """Build a group from a JSON-style descriptor.

    Accepts ``{"finite": [n1, ...]}``, ``{"free": {"rank": d, "window": W}}``,
    a bare list of cyclic orders, or an existing :class:`GroupSpec`.
    """
    if isinstance(descriptor, GroupSpec):
        return descriptor
    if isinstance(descriptor, (list, tuple)):
        descriptor = {"finite": list(descriptor)}
    if not isinstance(descriptor, dict) or not descriptor:
        raise ValueError("empty group descriptor")
    if "finite" in descriptor:
        orders = descriptor["finite"]
        if isinstance(orders, int):
            orders = [orders]
        if not orders:
            raise ValueError("empty group descriptor")
        if any(int(n) == 0 for n in orders):
            raise ValueError("cyclic factor of order zero")
        return GroupSpec("finite", orders=tuple(int(n) for n in orders))
    if "free" in descriptor:
        spec = descriptor["free"]
        if isinstance(spec, int):
            spec = {"rank": spec}
        return GroupSpec("free", rank=int(spec.get("rank", 1)), window=int(spec.get("window", 0)))
    raise ValueError(f"unrecognized group descriptor {descriptor!r}")


@dataclass(frozen=True)
class Region:
    """A subset of the group, optionally stored as the complement of ``members``."""

    members: frozenset = field(default_factory=frozenset)
    complement: bool = False

    @classmethod
    def of(cls, group: GroupSpec, members: Iterable = (), complement: bool = False) -> "Region":
        return cls(frozenset(group.elem(x) for x in members), bool(complement))

    @classmethod
    def everything(cls) -> "Region":
        return cls(frozenset(), True)

    def __contains__(self, x) -> bool:
        return (x in self.members) != self.complement

    def points(self, group: GroupSpec) -> list[Element]:
        """Members inside the group (window for Z^d), in canonical order."""
        return [x for x in group.elements() if x in self]

    def negated(self, group: GroupSpec) -> "Region":
        return Region(frozenset(group.neg(x) for x in self.members), self.complement)

    def is_symmetric(self, group: GroupSpec) -> bool:
        return self.negated(group).members == self.members

    def complement_region(self) -> "Region":
        return Region(self.members, not self.complement)

    def to_json(self) -> dict:
        return {"members": [list(x) if len(x) > 1 else x[0] for x in sorted(self.members)],
                "complement": self.complement}


def symmetrize_region(group: GroupSpec, region: Region) -> Region:
    """Return the largest symmetric subset ``region ∩ (-region)``."""
    neg = region.negated(group).members
    if region.complement:
        return Region(region.members | neg, True)
    return Region(region.members & neg, False)


def inversion_orbits(group: GroupSpec) -> list[tuple[Element, ...]]:
    """Partition of the group (or window) into orbits ``{x, -x}``.

    Each orbit lists its canonical representative first: the element that
    comes first in :meth:`GroupSpec.elements` order.
    """
    if group.is_finite:
        return list(_finite_orbits(group.orders))
    seen: set[Element] = set()
    out = []
    for x in group.elements():
        if x in seen:
            continue
        orbit = (x,) if group.neg(x) == x else (x, group.neg(x))
        seen.update(orbit)
        out.append(orbit)
    return out


@lru_cache(maxsize=None)
def _finite_orbits(orders: tuple[int, ...]) -> tuple[tuple[Element, ...], ...]:
    g = GroupSpec("finite", orders=orders)
    seen: set[Element] = set()
    out = []
    for x in g.elements():
        if x in seen:
            continue
        nx = g.neg(x)
        orbit = (x,) if nx == x else (x, nx)
        seen.update(orbit)
        out.append(orbit)
    return tuple(out)


@dataclass(frozen=True)
class LatticeTiling:
    """Lattice ``L = N Z^d`` with tile ``B = {0..N-1}^d``.

    With ``centered=True`` (odd ``N`` only) the tile is the symmetric box
    ``{-h..h}^d``, ``N = 2h + 1``.
    """

    rank: int
    modulus: int
    centered: bool = False

    def __post_init__(self):
        if self.rank < 1:
            raise ValueError("rank must be >= 1")
        if self.modulus < 1:
            raise ValueError("modulus must be >= 1")
        if self.centered and self.modulus % 2 == 0:
            raise ValueError("a centered tile needs an odd modulus")

    @property
    def offset(self) -> int:
        return (self.modulus - 1) // 2 if self.centered else 0

    def tile(self) -> list[Element]:
        r = range(-self.offset, self.modulus - self.offset)
        return list(itertools.product(r, repeat=self.rank))

    @property
    def tile_size(self) -> int:
        return self.modulus ** self.rank

    def cell_of(self, g: Sequence[int]) -> Element:
        """Lattice point ``l`` with ``g in B + l``."""
        return coset_decompose(self, g)[0]


def coset_decompose(tiling: LatticeTiling, g) -> tuple[Element, Element]:
    """Unique ``(l, b)`` with ``g = l + b``, ``l`` in the lattice and ``b`` in the tile."""
    if isinstance(g, int):
        g = (g,)
    if len(g) != tiling.rank:
        raise ValueError("element rank does not match tiling")
    n, o = tiling.modulus, tiling.offset
    lat, rem = [], []
    for c in g:
        q = (c + o) // n
        lat.append(q * n)
        rem.append(c - q * n)
    return tuple(lat), tuple(rem)


def lattice_norm(tiling: LatticeTiling, point) -> int:
    """Max absolute generator coefficient of a lattice point."""
    if isinstance(point, int):
        point = (point,)
    if len(point) != tiling.rank:
        raise ValueError("lattice point rank does not match tiling")
    if any(c % tiling.modulus for c in point):
        raise ValueError(f"{tuple(point)} is not in the lattice {tiling.modulus}Z^{tiling.rank}")
    return max((abs(c) // tiling.modulus for c in point), default=0)


def sumset(group: GroupSpec, a: Iterable[Element], b: Iterable[Element]) -> frozenset:
    b = list(b)
    return frozenset(group.add(x, y) for x in a for y in b)


def difference_set(group: GroupSpec, a: Iterable[Element], b: Iterable[Element] | None = None) -> frozenset:
    a = list(a)
    b = a if b is None else list(b)
    return frozenset(group.sub(x, y) for x in a for y in b)


def element_str(x: Element) -> str:
    return str(x[0]) if len(x) == 1 else ",".join(str(c) for c in x)


def parse_element(group: GroupSpec, text) -> Element:
    if isinstance(text, str):
        text = text.strip().strip("()[]")
        return group.elem(tuple(int(c) for c in text.split(",")))
    return group.elem(text)


def iter_box(rank: int, radius: int) -> Iterator[Element]:
    return itertools.product(range(-radius, radius + 1), repeat=rank)
