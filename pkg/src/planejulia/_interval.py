"""Outward-rounded interval arithmetic on binary64 with extended endpoints.

Sums and products are rounded in the direction of their exact error term
(TwoSum and Dekker's product), so exact results stay exact and inexact ones
move one ulp with ``math.nextafter`` toward the true value.  Outside the
range where the error-free transforms are valid the result is inflated by
one ulp on both sides.  A product 0 * inf is taken as 0: endpoints are limits of bounded
boxes, so a zero factor kills the growth.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

INF = math.inf


def down(v: float) -> float:
    return math.nextafter(v, -INF)


def up(v: float) -> float:
    return math.nextafter(v, INF)


_SPLIT = 134217729.0  # 2**27 + 1
_BIG = 2.0 ** 500
_TINY = 2.0 ** -900


def _sum_err(a: float, b: float):
    s = a + b
    if not math.isfinite(s):
        return s, None
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _prod_err(a: float, b: float):
    p = a * b
    if not (abs(a) < _BIG and abs(b) < _BIG and abs(p) > _TINY):
        return p, None
    t = _SPLIT * a
    ah = t - (t - a)
    al = a - ah
    t = _SPLIT * b
    bh = t - (t - b)
    bl = b - bh
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


def _lower(v, err):
    if err is None:
        return down(v)
    return down(v) if err < 0 else v


def _upper(v, err):
    if err is None:
        return up(v)
    return up(v) if err > 0 else v


def add_lo(a: float, b: float) -> float:
    return _lower(*_sum_err(a, b))


def add_hi(a: float, b: float) -> float:
    return _upper(*_sum_err(a, b))


def add(a, b):
    return (add_lo(a[0], b[0]), add_hi(a[1], b[1]))


def sub(a, b):
    return (add_lo(a[0], -b[1]), add_hi(a[1], -b[0]))


def neg(a):
    return (-a[1], -a[0])


def mul(a, b):
    lo, hi = INF, -INF
    for u in a:
        for v in b:
            if u == 0.0 or v == 0.0:
                lo, hi = min(lo, 0.0), max(hi, 0.0)
            else:
                p, err = _prod_err(u, v)
                lo, hi = min(lo, _lower(p, err)), max(hi, _upper(p, err))
    return (lo, hi)


def sqrt(a):
    lo = down(math.sqrt(a[0])) if a[0] > 0 else 0.0
    return (max(lo, 0.0), up(math.sqrt(a[1])))


def from_fraction(q: Fraction):
    f = float(q)
    if Fraction(f) == q:
        return (f, f)
    return (down(f), up(f))


def hull(a, b):
    return (min(a[0], b[0]), max(a[1], b[1]))


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        if math.isnan(self.lo) or math.isnan(self.hi) or self.lo > self.hi:
            raise ValueError(f"invalid interval [{self.lo!r}, {self.hi!r}]")

    @classmethod
    def point(cls, v: float) -> "Interval":
        return cls(float(v), float(v))

    @classmethod
    def of(cls, v) -> "Interval":
        if isinstance(v, Interval):
            return v
        if isinstance(v, tuple):
            return cls(*v)
        if isinstance(v, Fraction):
            return cls(*from_fraction(v))
        return cls.point(v)

    @property
    def pair(self) -> tuple[float, float]:
        return (self.lo, self.hi)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def mid(self) -> float:
        return 0.5 * self.lo + 0.5 * self.hi

    def contains(self, v: float) -> bool:
        return self.lo <= v <= self.hi

    def __add__(self, other):
        return Interval(*add(self.pair, Interval.of(other).pair))

    __radd__ = __add__

    def __sub__(self, other):
        return Interval(*sub(self.pair, Interval.of(other).pair))

    def __rsub__(self, other):
        return Interval(*sub(Interval.of(other).pair, self.pair))

    def __neg__(self):
        return Interval(*neg(self.pair))

    def __mul__(self, other):
        return Interval(*mul(self.pair, Interval.of(other).pair))

    __rmul__ = __mul__

    def to_json(self):
        return [_json_end(self.lo), _json_end(self.hi)]


@dataclass(frozen=True)
class IBox:
    xi: Interval
    yi: Interval

    @classmethod
    def from_bounds(cls, x0, x1, y0, y1) -> "IBox":
        return cls(Interval(x0, x1), Interval(y0, y1))

    @property
    def bounds(self) -> tuple[float, float, float, float]:
        return (self.xi.lo, self.xi.hi, self.yi.lo, self.yi.hi)

    def contains(self, z) -> bool:
        return self.xi.contains(z[0]) and self.yi.contains(z[1])

    def midpoint(self) -> tuple[float, float]:
        return (self.xi.mid, self.yi.mid)

    def to_json(self):
        return {"x": self.xi.to_json(), "y": self.yi.to_json()}


def _json_end(v: float):
    if v == INF:
        return "inf"
    if v == -INF:
        return "-inf"
    return v


def recip_pos(a):
    """1 / a for an interval of strictly positive reals."""
    if not a[0] > 0:
        raise ZeroDivisionError("reciprocal of an interval reaching zero")
    return (down(1.0 / a[1]), up(1.0 / a[0]))
