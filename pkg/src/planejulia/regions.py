"""Named rectangles of the filtration and their transition tables.

Every box is written once, in ``layout``, as a function of a small
namespace holding c, 1 and the two fixed-point abscissas.  The numeric
catalog feeds floats through it and the certifier feeds exact symbolic
endpoints through the same code, so the two views cannot drift apart.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from types import SimpleNamespace
from typing import Iterable

import numpy as np

from .core_dynamics import NonRealError, PreimageFailure, apply, apply_inverse, fixed_points

__all__ = [
    "RegionId",
    "ExtInterval",
    "Box",
    "NoTableEntry",
    "PARTITION",
    "ESCAPE_UNION",
    "R_UNION",
    "FORWARD",
    "INVERSE",
    "layout",
    "catalog",
    "region_of",
    "forward_successors",
    "inverse_successors",
    "sample_conformance",
    "ConformanceReport",
    "EntryReport",
    "catalog_json",
    "SAMPLE_TRUNCATION",
]

INF = math.inf
SAMPLE_TRUNCATION = 1e4


class RegionId(str, Enum):
    L = "L"
    M = "M"
    N = "N"
    P = "P"
    A = "A"
    B = "B"
    C = "C"
    D = "D"
    E = "E"
    F = "F"
    G = "G"
    H1 = "H1"
    H2 = "H2"
    R0 = "R0"
    R1 = "R1"
    R2 = "R2"
    R3 = "R3"
    Y = "Y"
    QR = "QR"
    QS = "QS"
    QT = "QT"
    QU = "QU"
    Z0 = "Z0"
    Z1 = "Z1"
    Z2 = "Z2"
    Z3 = "Z3"
    Z4 = "Z4"

    def __str__(self):
        return self.value


R = RegionId

# Seventeen boxes covering the plane, overlapping only on edges.
PARTITION = (R.L, R.M, R.N, R.P, R.A, R.B, R.C, R.D, R.E, R.F, R.G, R.H1, R.H2,
             R.R0, R.R1, R.R2, R.R3)
ESCAPE_UNION = (R.L, R.M, R.N, R.P)
R_UNION = (R.R0, R.R1, R.R2, R.R3)


class NoTableEntry(KeyError):
    pass


@dataclass(frozen=True)
class ExtInterval:
    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo <= self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")
        if self.lo == self.hi and math.isinf(self.lo):
            raise ValueError("degenerate infinite interval")

    def contains(self, v: float) -> bool:
        return self.lo <= v <= self.hi

    @property
    def bounded(self) -> bool:
        return math.isfinite(self.lo) and math.isfinite(self.hi)


@dataclass(frozen=True)
class Box:
    xi: ExtInterval
    yi: ExtInterval
    open_edges: frozenset = field(default_factory=frozenset)

    @classmethod
    def of(cls, x0, x1, y0, y1, open_edges=()) -> "Box":
        return cls(ExtInterval(x0, x1), ExtInterval(y0, y1), frozenset(open_edges))

    @property
    def bounds(self) -> tuple[float, float, float, float]:
        return (self.xi.lo, self.xi.hi, self.yi.lo, self.yi.hi)

    def contains(self, z, respect_open_edges: bool = False) -> bool:
        x, y = z
        if not (self.xi.contains(x) and self.yi.contains(y)):
            return False
        if respect_open_edges and self.open_edges:
            edges = {"x_lo": x == self.xi.lo, "x_hi": x == self.xi.hi,
                     "y_lo": y == self.yi.lo, "y_hi": y == self.yi.hi}
            return not any(edges[e] for e in self.open_edges)
        return True

    def to_json(self, tag) -> dict:
        return {"region": str(tag), "x": [_end(self.xi.lo), _end(self.xi.hi)],
                "y": [_end(self.yi.lo), _end(self.yi.hi)]}


def _end(v: float):
    if v == INF:
        return "inf"
    if v == -INF:
        return "-inf"
    return v


def layout(k) -> dict:
    """Box bounds (x0, x1, y0, y1) for every region, in terms of namespace ``k``.

    ``k`` supplies c, one, zero, a1, a2, abs_a1 and inf; arithmetic only uses
    +, - and *, so any ring with those constants works.
    """
    c, one, zero, a1, a2, inf = k.c, k.one, k.zero, k.a1, k.a2, k.inf
    m1 = zero - one
    cp1 = one + c
    r2, r3 = k.abs_a1 * k.abs_a1, k.abs_a1 * k.abs_a1 * k.abs_a1
    return {
        R.L: (a2, inf, a2, inf),
        R.M: (-inf, m1, cp1, inf),
        R.N: (-inf, m1, -inf, m1),
        R.P: (cp1, inf, -inf, m1),
        R.R0: (zero, cp1, zero, a2),
        R.R1: (m1, zero, zero, cp1),
        R.R2: (m1, zero, m1, zero),
        R.R3: (zero, cp1, m1, zero),
        R.A: (zero, a2, a2, inf),
        R.B: (m1, zero, cp1, inf),
        R.C: (-inf, m1, zero, cp1),
        R.D: (-inf, m1, m1, zero),
        R.E: (m1, zero, -inf, m1),
        R.F: (zero, cp1, -inf, m1),
        R.G: (cp1, inf, m1, zero),
        R.H1: (cp1, a2, zero, a2),
        R.H2: (a2, inf, zero, a2),
        R.Y: (c, zero, c, zero),
        R.QR: (a1, zero, c, a1),
        R.QS: (a1, zero, a1, zero),
        R.QT: (c, a1, a1, zero),
        R.QU: (c, a1, c, a1),
        R.Z0: (a1, a1 + r3, a1 - r3, a1),
        R.Z1: (a1 + r2, zero, a1 - r2, a1),
        R.Z2: (a1 + r3, a1 + r2, a1 - r2, a1 - r3),
        R.Z3: (a1, a1 + r3, a1 - r2, a1 - r3),
        R.Z4: (a1 + r3, a1 + r2, a1 - r3, a1),
    }


OPEN_EDGES = {R.Z1: frozenset({"x_lo"})}


def _numeric_namespace(c: float) -> SimpleNamespace:
    fp = fixed_points(c)
    return SimpleNamespace(c=float(c), one=1.0, zero=0.0, a1=fp.a1, a2=fp.a2,
                           abs_a1=abs(fp.a1), inf=INF)


_CATALOG_CACHE: dict = {}


def catalog(c: float) -> dict:
    """Numeric boxes for every region at parameter c (needs c <= 1/4)."""
    c = float(c)
    hit = _CATALOG_CACHE.get(c)
    if hit is not None:
        return hit
    if not c <= 0.25:
        raise NonRealError(f"region catalog needs c <= 1/4, got c = {c!r}")
    raw = layout(_numeric_namespace(c))
    out = {r: Box.of(*b, open_edges=OPEN_EDGES.get(r, ())) for r, b in raw.items()}
    if len(_CATALOG_CACHE) > 256:
        _CATALOG_CACHE.clear()
    _CATALOG_CACHE[c] = out
    return out


def catalog_json(c: float) -> list[dict]:
    return [box.to_json(r) for r, box in catalog(c).items()]


def region_of(z, c: float, respect_open_edges: bool = False) -> set:
    return {r for r, box in catalog(c).items() if box.contains(z, respect_open_edges)}


FORWARD = {
    R.L: {R.L},
    R.M: {R.N},
    R.N: {R.P},
    R.P: {R.M},
    R.R0: {R.R0, R.R1},
    R.R1: {R.R2},
    R.R2: {R.R2, R.R3},
    R.R3: {R.R1},
    R.QR: {R.QS, R.QT},
    R.QS: {R.QT},
    R.QT: {R.QU, R.QR},
    R.QU: {R.QR},
    R.A: {R.B, R.R0, R.R1, R.H1, R.H2},
    R.B: {R.D, R.R2},
    R.C: {R.N, R.E},
    R.D: {R.E, R.F, R.P},
    R.E: {R.R2, R.R3, R.G},
    R.F: {R.R1, R.C},
    R.G: {R.M, R.B},
    R.H1: {R.B, R.R0, R.H1},
    R.H2: {R.B, R.A, R.L},
    R.Y: {R.Y},
}

INVERSE = {
    R.A: {R.H2},
    R.B: {R.A, R.G, R.H1, R.H2},
    R.C: {R.F},
    R.D: {R.B},
    R.E: {R.C, R.D},
    R.F: {R.D},
    R.G: {R.E},
    R.H1: {R.A, R.H1},
    R.H2: {R.A},
    R.R0: {R.R0, R.A, R.H1},
    R.R1: {R.R0, R.R3, R.A, R.F},
    R.R2: {R.R1, R.R2, R.B, R.E},
    R.R3: {R.R2, R.E},
    R.L: {R.L, R.H2},
    R.M: {R.P, R.G},
    R.N: {R.M, R.C},
    R.P: {R.N, R.D},
}


def forward_successors(r) -> frozenset:
    r = RegionId(r)
    if r not in FORWARD:
        raise NoTableEntry(f"no one-step forward inclusion is tabulated for {r}")
    return frozenset(FORWARD[r])


def inverse_successors(r) -> frozenset:
    r = RegionId(r)
    if r not in INVERSE:
        raise NoTableEntry(f"no inverse inclusion is tabulated for {r}")
    return frozenset(INVERSE[r])


@dataclass(frozen=True)
class EntryReport:
    source: RegionId
    targets: frozenset
    direction: str
    samples: int
    violations: int
    worst_margin: float


@dataclass(frozen=True)
class ConformanceReport:
    c: float
    entries: tuple

    @property
    def violations(self) -> int:
        return sum(e.violations for e in self.entries)


def _margin(z, boxes: Iterable[Box]) -> float:
    """Signed sup-distance of z into the union: >= 0 inside, < 0 outside."""
    best = -INF
    for b in boxes:
        x0, x1, y0, y1 = b.bounds
        m = min(z[0] - x0, x1 - z[0], z[1] - y0, y1 - z[1])
        best = max(best, m)
    return best


def _truncated(box: Box, bound: float) -> tuple[float, float, float, float]:
    x0, x1, y0, y1 = box.bounds
    return (max(x0, -bound), min(x1, bound), max(y0, -bound), min(y1, bound))


def _sample_box(bounds, n: int, rng_seed: int) -> np.ndarray:
    from scipy.stats import qmc

    x0, x1, y0, y1 = bounds
    m = max(1, int(math.ceil(math.log2(max(n, 1)))))
    pts = qmc.Sobol(d=2, scramble=True, seed=rng_seed).random_base2(m)[:n]
    return np.column_stack((x0 + pts[:, 0] * (x1 - x0), y0 + pts[:, 1] * (y1 - y0)))


def sample_conformance(c: float, samples_per_region: int = 1024, seed: int = 0,
                       direction: str = "forward", truncation: float = SAMPLE_TRUNCATION,
                       atol: float = 1e-12) -> ConformanceReport:
    """Quasi-random empirical check of the transition tables.

    A sample counts as a violation when its image lies more than ``atol``
    outside the union of the tabulated targets.
    """
    if not -1.0 < c < 0.0:
        raise ValueError(f"sample_conformance needs -1 < c < 0, got c = {c!r}")
    cat = catalog(c)
    table = FORWARD if direction == "forward" else INVERSE
    step = apply if direction == "forward" else apply_inverse
    entries = []
    for i, (src, targets) in enumerate(table.items()):
        pts = _sample_box(_truncated(cat[src], truncation), samples_per_region, seed + i)
        boxes = [cat[t] for t in targets]
        bad, worst = 0, INF
        for x, y in pts:
            try:
                w = step((float(x), float(y)), c)
            except (ArithmeticError, PreimageFailure):
                continue
            m = _margin(w, boxes)
            worst = min(worst, m)
            if m < -atol:
                bad += 1
        entries.append(EntryReport(src, frozenset(targets), direction, len(pts), bad, worst))
    return ConformanceReport(float(c), tuple(entries))
