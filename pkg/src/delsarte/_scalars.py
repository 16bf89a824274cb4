"""Scalar handling shared by every module: exact rationals or floats."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Any

#: Spectral nonnegativity tolerance in float mode.
FLOAT_TOL = 1e-9


def is_exact(v) -> bool:
    return isinstance(v, (int, Fraction)) and not isinstance(v, bool) or isinstance(v, Rational)


def to_scalar(v, exact: bool | None = None):
    """Coerce JSON-ish input (int, float, "p/q" string, Fraction) into a scalar.

    ``exact=True`` refuses floats; ``exact=False`` converts everything to float.
    """
    if isinstance(v, str):
        v = Fraction(v.strip())
    elif isinstance(v, bool):
        raise TypeError("booleans are not scalars")
    elif isinstance(v, int):
        v = Fraction(v)
    if exact is False:
        return float(v)
    if isinstance(v, Fraction):
        return v
    if isinstance(v, Rational):
        return Fraction(v.numerator, v.denominator)
    if exact:
        raise ValueError(f"exact mode requires rational data, got {v!r}")
    return float(v)


def all_exact(values) -> bool:
    return all(isinstance(v, Fraction) for v in values)


def fmt(v) -> str:
    """Lossless text form: "p/q" for rationals, repr for floats."""
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, float):
        return repr(v)
    return str(v)


def zero_like(exact: bool):
    return Fraction(0) if exact else 0.0


@dataclass
class Verdict:
    """Boolean outcome with the evidence behind it.

    ``witness`` is a falsifying point (or a decomposition on success),
    ``value`` the quantity tested there and ``margin`` the slack on success.
    """

    ok: bool
    reason: str = ""
    witness: Any = None
    value: Any = None
    margin: Any = None
    details: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return bool(self.ok)
