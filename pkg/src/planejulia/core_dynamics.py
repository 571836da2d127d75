"""Point evaluation of the map (x, y) -> (xy + c, x) and the scalar helpers around it.

Everything here is a pure function of its arguments.  Points are immutable
named tuples so they can be hashed, compared and unpacked like plain pairs.

The forward map accepts ``fractions.Fraction`` coordinates as well as floats,
which gives an exact backend for the identities involving the 3-cycle.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

__all__ = [
    "Point",
    "FixedPoints",
    "ThreeCycle",
    "StabilityReport",
    "StabilityClass",
    "Target",
    "DynamicsError",
    "RangeError",
    "NonRealError",
    "PreimageFailure",
    "NoPreimage",
    "NonUniquePreimage",
    "BracketError",
    "ZERO_DIVISOR",
    "in_certified_regime",
    "has_real_fixed_points",
    "apply",
    "apply_inverse",
    "fixed_points",
    "three_cycle",
    "jacobian",
    "stability",
    "scalar_maps",
    "g_map",
    "h1_map",
    "g_inverse_chain",
    "sequences",
    "cn_sequence",
    "bn_sequence",
    "fib_escape",
    "point_json",
]

# |v| below this is treated as zero by the inverse branch.
ZERO_DIVISOR = 1e-300
INDIFFERENT_TOL = 1e-12


class DynamicsError(Exception):
    """Base class for domain errors raised by this package."""


class RangeError(DynamicsError, ArithmeticError):
    """An iterate overflowed to a non-finite coordinate."""


class NonRealError(DynamicsError, ValueError):
    """The requested object is not real for this parameter (c > 1/4)."""


class PreimageFailure(DynamicsError):
    """The inverse branch is undefined at this point."""

    def __init__(self, message: str, step: int | None = None):
        super().__init__(message)
        self.step = step


class NoPreimage(PreimageFailure):
    pass


class NonUniquePreimage(PreimageFailure):
    pass


class BracketError(DynamicsError, ValueError):
    """Bisection could not bracket a root."""


class Point(NamedTuple):
    x: float
    y: float

    def sup_dist(self, other) -> float:
        return max(abs(self[0] - other[0]), abs(self[1] - other[1]))


@dataclass(frozen=True)
class FixedPoints:
    a1: float
    a2: float
    alpha: Point
    theta: Point


@dataclass(frozen=True)
class ThreeCycle:
    p: Point
    fp: Point
    f2p: Point

    def points(self) -> tuple[Point, Point, Point]:
        return (self.p, self.fp, self.f2p)


class StabilityClass(str, Enum):
    ATTRACTING = "Attracting"
    REPELLING = "Repelling"
    SADDLE = "Saddle"
    INDIFFERENT = "Indifferent"


class Target(str, Enum):
    ALPHA = "Alpha"
    THETA = "Theta"
    CYCLE = "Cycle"


@dataclass(frozen=True)
class StabilityReport:
    eigenvalues: tuple[complex, complex]
    cls: StabilityClass


def in_certified_regime(c: float) -> bool:
    return -1.0 < c < 0.0


def has_real_fixed_points(c: float) -> bool:
    return c <= 0.25


def _check_parameter(c) -> None:
    if isinstance(c, float) and not math.isfinite(c):
        raise ValueError(f"parameter c must be finite, got {c!r}")


def apply(z, c) -> Point:
    x, y = z
    u = x * y + c
    if isinstance(u, float) and not math.isfinite(u):
        raise RangeError(f"f({x!r}, {y!r}) overflowed")
    return Point(u, x)


def apply_inverse(z, c) -> Point:
    u, v = z
    if abs(v) < ZERO_DIVISOR:
        if u == c:
            raise NonUniquePreimage(f"({u!r}, {v!r}) is the image of the whole line x = 0")
        raise NoPreimage(f"({u!r}, {v!r}) has no preimage")
    y = (u - c) / v
    if isinstance(y, float) and not math.isfinite(y):
        raise RangeError(f"inverse of ({u!r}, {v!r}) overflowed")
    return Point(v, y)


def fixed_points(c) -> FixedPoints:
    _check_parameter(c)
    disc = 1.0 - 4.0 * c
    if disc < 0:
        raise NonRealError(f"fixed points are not real for c = {c!r} > 1/4")
    root = math.sqrt(disc)
    a2 = (1.0 + root) / 2.0
    # a1 = c / a2 avoids cancellation when c is small.
    a1 = c / a2 if a2 != 0 else (1.0 - root) / 2.0
    return FixedPoints(a1, a2, Point(a1, a1), Point(a2, a2))


def three_cycle(c) -> ThreeCycle:
    _check_parameter(c)
    one = c - c + 1  # keeps Fraction inputs exact
    return ThreeCycle(Point(-one, -one), Point(one + c, -one), Point(-one, one + c))


def jacobian(z) -> tuple[tuple[float, float], tuple[float, float]]:
    x, y = z
    return ((y, x), (1.0, 0.0))


def _matmul(a, b):
    return (
        (a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]),
        (a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]),
    )


def _eigenvalues(m) -> tuple[complex, complex]:
    tr = m[0][0] + m[1][1]
    det = m[0][0] * m[1][1] - m[0][1] * m[1][0]
    root = cmath.sqrt(tr * tr - 4.0 * det)
    lams = [(tr + root) / 2.0, (tr - root) / 2.0]
    lams.sort(key=lambda z: (-abs(z), -z.real, -z.imag))
    return (complex(lams[0]), complex(lams[1]))


def _classify_moduli(lams, tol: float = INDIFFERENT_TOL) -> StabilityClass:
    mods = [abs(z) for z in lams]
    if any(abs(m - 1.0) <= tol for m in mods):
        return StabilityClass.INDIFFERENT
    if all(m < 1.0 for m in mods):
        return StabilityClass.ATTRACTING
    if all(m > 1.0 for m in mods):
        return StabilityClass.REPELLING
    return StabilityClass.SADDLE


def stability(c, target) -> StabilityReport:
    target = Target(target)
    if target is Target.CYCLE:
        cyc = three_cycle(float(c))
        m = jacobian(cyc.p)
        m = _matmul(jacobian(cyc.fp), m)
        m = _matmul(jacobian(cyc.f2p), m)
    else:
        fp = fixed_points(c)
        m = jacobian(fp.alpha if target is Target.ALPHA else fp.theta)
    lams = _eigenvalues(m)
    return StabilityReport(lams, _classify_moduli(lams))


def g_map(x, c):
    return x * (x * x + c) + c


def h1_map(x, c):
    a1 = fixed_points(c).a1
    return (a1**2 - a1**5) * x * x + (2 * a1**2 - a1**5 - a1**6) * x + a1 - a1**6


def scalar_maps(kind: str, x, c):
    kind = kind.upper()
    if kind == "G":
        return g_map(x, c)
    if kind == "H1":
        return h1_map(x, c)
    raise ValueError(f"unknown scalar map {kind!r}; expected 'G' or 'H1'")


def _bisect_increasing(fun, target, lo, hi, xtol=1e-14, max_steps=200):
    flo, fhi = fun(lo) - target, fun(hi) - target
    if flo > 0 or fhi < 0:
        raise BracketError(f"no sign change on [{lo!r}, {hi!r}]")
    for _ in range(max_steps):
        if hi - lo <= xtol:
            break
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if fun(mid) - target > 0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def g_inverse_chain(c, n: int) -> list[float]:
    """Backward chain z0 = -sqrt(-c) > z1 > ... with g(z_{k+1}) = z_k.

    g is increasing on [-1, -sqrt(-c)] with g(-1) = -1 and g(-sqrt(-c)) = c,
    so every z_k in (-1, c] has a single preimage there.  Once consecutive
    terms agree to the bisection tolerance the chain is non-increasing only.
    """
    if not in_certified_regime(c):
        raise BracketError(f"g_inverse_chain needs -1 < c < 0, got c = {c!r}")
    top = -math.sqrt(-c)
    chain = [top]
    for _ in range(n):
        chain.append(_bisect_increasing(lambda t: g_map(t, c), chain[-1], -1.0, top))
    return chain


def cn_sequence(c, n: int) -> list[float]:
    out = [c]
    for _ in range(n):
        out.append(out[-1] * out[-1] + c)
    return out


def bn_sequence(c, w, n: int) -> list[float]:
    """Backward envelope b_1..b_n for a starting sup-norm w >= a2."""
    a2 = fixed_points(c).a2
    out = []
    b = w
    for _ in range(n):
        b = (b - c) / a2
        out.append(b)
    return out


def fib_escape(c) -> int:
    """Smallest N >= 1 with (1 + c)**F_{N-1} + c < 0, where F_0 = 1, F_1 = 2."""
    if not in_certified_regime(c):
        raise ValueError(f"fib_escape needs -1 < c < 0, got c = {c!r}")
    log_base = math.log1p(c)
    log_bound = math.log(-c)
    prev, cur = 1, 2  # F_{N-1}, F_N for N = 1
    n = 1
    while prev * log_base >= log_bound:
        prev, cur = cur, prev + cur
        n += 1
    return n


def sequences(kind: str, c, n: int = 10, w: float | None = None):
    kind = kind.lower()
    if kind == "cn":
        return cn_sequence(c, n)
    if kind == "bn":
        if w is None:
            raise ValueError("the bn sequence needs a starting value w")
        return bn_sequence(c, w, n)
    if kind in ("fib", "fibescape"):
        return fib_escape(c)
    raise ValueError(f"unknown sequence {kind!r}; expected cn, bn or fib")


def point_json(z) -> dict:
    return {"x": float(z[0]), "y": float(z[1])}
