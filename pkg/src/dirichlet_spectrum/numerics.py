"""Exact rationals and exact rational intervals.

Rationals are plain :class:`fractions.Fraction` values, which are always
stored reduced with a positive denominator.  An :class:`Enclosure` is a
closed interval with rational endpoints; every operation on it is exact,
so the only source of width is the caller's uncertainty about the real
number being enclosed.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from decimal import ROUND_CEILING, ROUND_FLOOR, Decimal, localcontext
from fractions import Fraction
from typing import Union

from .errors import InvalidArgument

RationalLike = Union[int, Fraction]

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*([+-]?\d+))?\s*$")

DECIMAL_DIGITS = 30


def make_rational(num: int, den: int = 1) -> Fraction:
    if isinstance(num, bool) or isinstance(den, bool) or not isinstance(num, int) or not isinstance(den, int):
        raise InvalidArgument("numerator and denominator must be integers")
    if den == 0:
        raise InvalidArgument("denominator must be nonzero")
    return Fraction(num, den)


def parse_rational(text: str) -> Fraction:
    """Parse ``p/q`` or an integer string.  Decimal notation is rejected."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int) and not isinstance(text, bool):
        return Fraction(text)
    m = _RATIONAL_RE.match(str(text))
    if m is None:
        raise InvalidArgument(f"expected an exact rational like 1/2, got {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    return make_rational(num, den)


def parse_int(text) -> int:
    if isinstance(text, int) and not isinstance(text, bool):
        return text
    s = str(text).strip()
    if not re.fullmatch(r"[+-]?\d+", s):
        raise InvalidArgument(f"expected a decimal integer, got {text!r}")
    return int(s)


def rational_str(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def nearest_integer(x: RationalLike) -> int:
    # round() on a Fraction is exact and breaks ties to even
    return round(Fraction(x))


def decimal_str(x: RationalLike, direction: str, digits: int = DECIMAL_DIGITS) -> str:
    """Round ``x`` to ``digits`` significant digits toward -inf ("down") or +inf ("up")."""
    x = Fraction(x)
    if x == 0:
        return "0"
    rounding = {"down": ROUND_FLOOR, "up": ROUND_CEILING}[direction]
    with localcontext() as ctx:
        ctx.prec = digits
        ctx.rounding = rounding
        ctx.Emax = 10**9
        ctx.Emin = -(10**9)
        d = Decimal(x.numerator) / Decimal(x.denominator)
    return format(d, "E") if abs(d.adjusted()) > 6 else format(d, "f")


@dataclass(frozen=True)
class Enclosure:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        lo, hi = Fraction(self.lo), Fraction(self.hi)
        if lo > hi:
            raise InvalidArgument(f"empty enclosure [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def point(cls, x: RationalLike) -> "Enclosure":
        return cls(Fraction(x), Fraction(x))

    @classmethod
    def hull(cls, *parts: "Enclosure") -> "Enclosure":
        return cls(min(p.lo for p in parts), max(p.hi for p in parts))

    @staticmethod
    def _lift(other) -> "Enclosure":
        if isinstance(other, Enclosure):
            return other
        return Enclosure.point(other)

    def __add__(self, other) -> "Enclosure":
        o = self._lift(other)
        return Enclosure(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __neg__(self) -> "Enclosure":
        return Enclosure(-self.hi, -self.lo)

    def __sub__(self, other) -> "Enclosure":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "Enclosure":
        return self._lift(other) - self

    def scale(self, r: RationalLike) -> "Enclosure":
        r = Fraction(r)
        a, b = self.lo * r, self.hi * r
        return Enclosure(min(a, b), max(a, b))

    def __mul__(self, other) -> "Enclosure":
        if not isinstance(other, Enclosure):
            return self.scale(other)
        ps = (self.lo * other.lo, self.lo * other.hi, self.hi * other.lo, self.hi * other.hi)
        return Enclosure(min(ps), max(ps))

    __rmul__ = __mul__

    def reciprocal(self) -> "Enclosure":
        if self.lo <= 0 <= self.hi:
            raise InvalidArgument("reciprocal of an enclosure containing 0")
        return Enclosure(1 / self.hi, 1 / self.lo)

    def __truediv__(self, other) -> "Enclosure":
        return self * self._lift(other).reciprocal()

    def __abs__(self) -> "Enclosure":
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return Enclosure(Fraction(0), max(-self.lo, self.hi))

    def contains(self, x) -> bool:
        if isinstance(x, Enclosure):
            return self.lo <= x.lo and x.hi <= self.hi
        return self.lo <= x <= self.hi

    __contains__ = contains

    def overlaps(self, other: "Enclosure") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def is_point(self) -> bool:
        return self.lo == self.hi

    def to_json(self) -> dict:
        return {
            "lo": rational_str(self.lo),
            "hi": rational_str(self.hi),
            "lo_dec": decimal_str(self.lo, "down"),
            "hi_dec": decimal_str(self.hi, "up"),
        }

    def __repr__(self) -> str:
        return f"Enclosure[{decimal_str(self.lo, 'down', 12)}, {decimal_str(self.hi, 'up', 12)}]"
