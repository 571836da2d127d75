"""Forward and backward orbit classification with trap-region stopping rules.

Forward verdicts, checked in this order:

1. the start point is one of the special points (within 1e-13)
2. the orbit enters the escape union L u M u N u P away from the saddle
   points, so it diverges (or, outside -1 < c < 0, its sup norm passes
   the escape radius)
3. the orbit enters the trap Y, whose points converge to alpha
4. the orbit shadows the stable set of theta inside A u H2
5. the orbit settles onto the 3-cycle
6. nothing decided within ``max_iter``

Candidate verdicts are heuristics.  The stable and unstable sets are
curves, so a finite orbit can only show that it behaved like a point on
them for as long as it was followed.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from enum import Enum

from .core_dynamics import (
    DynamicsError,
    NoPreimage,
    NonUniquePreimage,
    Point,
    RangeError,
    StabilityClass,
    apply,
    apply_inverse,
    fixed_points,
    has_real_fixed_points,
    in_certified_regime,
    stability,
    three_cycle,
)
from .regions import RegionId, catalog, region_of

__all__ = [
    "ForwardClass",
    "BackwardClass",
    "StopReason",
    "Direction",
    "OrbitRecord",
    "NotInRegion",
    "NotInZ0",
    "EXACT_TOL",
    "CONVERGENCE_TOL",
    "RENDER_TOL",
    "ESCAPE_RADIUS",
    "classify_forward",
    "classify_backward",
    "orbit",
    "return_times",
    "envelope_check",
    "verdict_json",
    "SIX_CYCLE",
]

EXACT_TOL = 1e-13
CONVERGENCE_TOL = 1e-9
RENDER_TOL = 1e-6
ESCAPE_RADIUS = 1e6
DEFAULT_MAX_ITER = 5000

SIX_CYCLE = (RegionId.F, RegionId.C, RegionId.E, RegionId.G, RegionId.B, RegionId.D)


class ForwardClass(str, Enum):
    FIXED_ALPHA = "FixedAlpha"
    FIXED_THETA = "FixedTheta"
    THREE_CYCLE_MEMBER = "ThreeCycleMember"
    ATTRACTING_BASIN = "AttractingBasin"
    THETA_STABLE_CANDIDATE = "ThetaStableCandidate"
    CYCLE_STABLE_CANDIDATE = "CycleStableCandidate"
    ESCAPING = "Escaping"
    UNDECIDED = "Undecided"

    def __str__(self):
        return self.value


class BackwardClass(str, Enum):
    FIXED_ALPHA = "FixedAlpha"
    THETA_UNSTABLE_CANDIDATE = "ThetaUnstableCandidate"
    CYCLE_UNSTABLE_CANDIDATE = "CycleUnstableCandidate"
    BACKWARD_ESCAPING = "BackwardEscaping"
    PREIMAGE_FAILURE = "PreimageFailure"
    UNDECIDED = "Undecided"

    def __str__(self):
        return self.value


class StopReason(str, Enum):
    EXACT_MATCH = "ExactMatch"
    ENTERED_ESCAPE_REGION = "EnteredEscapeRegion"
    NORM_THRESHOLD = "NormThreshold"
    OVERFLOW = "Overflow"
    ENTERED_TRAP = "EnteredTrap"
    CONVERGED_ALPHA = "ConvergedAlpha"
    CONVERGED_THETA = "ConvergedTheta"
    CONVERGED_CYCLE = "ConvergedCycle"
    THETA_CRITERION = "ThetaCriterion"
    CYCLE_CRITERION = "CycleCriterion"
    NO_PREIMAGE = "NoPreimage"
    NON_UNIQUE_PREIMAGE = "NonUniquePreimage"
    MAX_ITER = "MaxIter"
    STEPS_DONE = "StepsDone"

    def __str__(self):
        return self.value


class Direction(str, Enum):
    FORWARD = "forward"
    BACKWARD = "backward"


class NotInRegion(DynamicsError, ValueError):
    pass


class NotInZ0(NotInRegion):
    pass


@dataclass(frozen=True)
class OrbitRecord:
    points: tuple
    stop_reason: StopReason
    iterations: int
    region_trace: tuple | None = None
    direction: Direction = Direction.FORWARD
    regime: str = "certified"
    failure_step: int | None = None

    def to_json(self) -> dict:
        out = {"direction": self.direction.value, "stop_reason": self.stop_reason.value,
               "iterations": self.iterations, "regime": self.regime,
               "points": [{"x": float(p[0]), "y": float(p[1])} for p in self.points]}
        if self.region_trace is not None:
            out["regions"] = [sorted(str(r) for r in rs) for rs in self.region_trace]
        if self.failure_step is not None:
            out["failure_step"] = self.failure_step
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["step", "x", "y", "regions"])
        sign = -1 if self.direction is Direction.BACKWARD else 1
        for k, p in enumerate(self.points):
            regs = ""
            if self.region_trace is not None:
                regs = " ".join(sorted(str(r) for r in self.region_trace[k]))
            writer.writerow([sign * k, repr(float(p[0])), repr(float(p[1])), regs])
        return buf.getvalue()


def verdict_json(cls, record: OrbitRecord) -> dict:
    return {"class": str(cls), "iterations": record.iterations,
            "stop_reason": record.stop_reason.value, "regime": record.regime}


def _sup(ax, ay, bx, by):
    dx, dy = ax - bx, ay - by
    return max(dx if dx >= 0 else -dx, dy if dy >= 0 else -dy)


@dataclass(frozen=True)
class _Setup:
    c: float
    certified: bool
    alpha: Point | None
    theta: Point | None
    alpha_attracts: bool
    cycle: tuple
    a2: float = math.nan


def _setup(c: float) -> _Setup:
    c = float(c)
    cyc = three_cycle(c).points()
    if has_real_fixed_points(c):
        fp = fixed_points(c)
        attracts = stability(c, "Alpha").cls is StabilityClass.ATTRACTING
        return _Setup(c, in_certified_regime(c), fp.alpha, fp.theta, attracts, cyc, fp.a2)
    return _Setup(c, False, None, None, False, cyc)


def _exact_forward(z, s: _Setup):
    if s.alpha is not None and _sup(z[0], z[1], *s.alpha) <= EXACT_TOL:
        return ForwardClass.FIXED_ALPHA
    if s.theta is not None and _sup(z[0], z[1], *s.theta) <= EXACT_TOL:
        return ForwardClass.FIXED_THETA
    if any(_sup(z[0], z[1], *q) <= EXACT_TOL for q in s.cycle):
        return ForwardClass.THREE_CYCLE_MEMBER
    return None


def _itinerary_ok(window, c) -> bool:
    """The last six iterates follow F, C, E, G, B, D up to rotation."""
    if len(window) < 6:
        return False
    traces = [region_of(w, c) for w in window[-6:]]
    return any(all(SIX_CYCLE[(r + i) % 6] in traces[i] for i in range(6)) for r in range(6))


def classify_forward(z, c, max_iter: int = DEFAULT_MAX_ITER, tol: float = CONVERGENCE_TOL,
                     mode: str = "metric", escape_radius: float = ESCAPE_RADIUS,
                     record: bool = True, trace: bool = False):
    """Classify the forward orbit of z.  Returns (ForwardClass, OrbitRecord).

    ``mode="itinerary"`` additionally asks cycle candidates to show the
    six-region itinerary F, C, E, G, B, D on their last six iterates.
    """
    if mode not in ("metric", "itinerary"):
        raise ValueError(f"mode must be 'metric' or 'itinerary', got {mode!r}")
    s = _setup(c)
    cls, reason, n, pts = _forward_core((float(z[0]), float(z[1])), s, max_iter, tol, mode,
                                        escape_radius, record)
    regime = "certified" if s.certified else "uncertified"
    tr = tuple(region_of(p, s.c) for p in pts) if (trace and s.alpha is not None) else None
    return cls, OrbitRecord(tuple(Point(*p) for p in pts), reason, n, tr, Direction.FORWARD,
                            regime)


def _forward_core(z, s: _Setup, max_iter, tol, mode, escape_radius, record):
    """Shared loop for classify_forward and the renderer."""
    pts = [z] if record else None
    exact = _exact_forward(z, s)
    if exact is not None:
        return exact, StopReason.EXACT_MATCH, 0, pts or [z]
    c = s.c
    x, y = z
    certified = s.certified
    has_fp = s.theta is not None
    tx = s.a2 if has_fp else math.nan
    ax = s.alpha[0] if has_fp else math.nan
    cp1 = 1.0 + c
    a2 = tx
    (px, py), (qx, qy), (rx, ry) = s.cycle
    in_ah2 = True
    theta_mono = True
    prev_even = math.inf
    cyc_hist = []
    window = [] if mode == "itinerary" else None
    n = 0
    while True:
        if not (math.isfinite(x) and math.isfinite(y)):
            return ForwardClass.ESCAPING, StopReason.OVERFLOW, n, pts or [z]
        d_theta = _sup(x, y, tx, tx) if has_fp else math.inf
        d_cyc = min(_sup(x, y, px, py), _sup(x, y, qx, qy), _sup(x, y, rx, ry))
        if certified:
            in_escape = ((x >= a2 and y >= a2) or (x <= -1.0 and (y >= cp1 or y <= -1.0))
                         or (x >= cp1 and y <= -1.0))
            if in_escape and d_theta >= tol and d_cyc >= tol:
                return ForwardClass.ESCAPING, StopReason.ENTERED_ESCAPE_REGION, n, pts or [z]
            if c <= x <= 0.0 and c <= y <= 0.0:
                return ForwardClass.ATTRACTING_BASIN, StopReason.ENTERED_TRAP, n, pts or [z]
        elif has_fp and s.alpha_attracts and _sup(x, y, ax, ax) < tol:
            return ForwardClass.ATTRACTING_BASIN, StopReason.CONVERGED_ALPHA, n, pts or [z]
        if max(abs(x), abs(y)) > escape_radius:
            return ForwardClass.ESCAPING, StopReason.NORM_THRESHOLD, n, pts or [z]
        if has_fp:
            if certified:
                in_ah2 = in_ah2 and ((0.0 <= x <= a2 and y >= a2) or (x >= a2 and 0.0 <= y <= a2))
            if n % 2 == 0:
                theta_mono = theta_mono and d_theta <= prev_even
                prev_even = d_theta
            if in_ah2 and d_theta < tol:
                return (ForwardClass.THETA_STABLE_CANDIDATE, StopReason.CONVERGED_THETA, n,
                        pts or [z])
        cyc_hist.append(d_cyc)
        if window is not None:
            window.append((x, y))
            if len(window) > 6:
                window.pop(0)
        if d_cyc < tol and _cycle_settled(cyc_hist) and (
                window is None or _itinerary_ok(window, c)):
            return ForwardClass.CYCLE_STABLE_CANDIDATE, StopReason.CONVERGED_CYCLE, n, pts or [z]
        if n >= max_iter:
            break
        x, y = x * y + c, x
        n += 1
        if pts is not None:
            pts.append((x, y))
    if has_fp and certified and in_ah2 and theta_mono:
        return ForwardClass.THETA_STABLE_CANDIDATE, StopReason.THETA_CRITERION, n, pts or [z]
    tail = max(3, len(cyc_hist) // 10)
    if min(cyc_hist[-3:]) < tol and _non_increasing(cyc_hist[-tail:]):
        return ForwardClass.CYCLE_STABLE_CANDIDATE, StopReason.CYCLE_CRITERION, n, pts or [z]
    return ForwardClass.UNDECIDED, StopReason.MAX_ITER, n, pts or [z]


def _cycle_settled(hist) -> bool:
    """Distances sampled every third step are non-increasing lately."""
    if len(hist) < 7:
        return False
    return hist[-1] <= hist[-4] <= hist[-7]


def _non_increasing(seq) -> bool:
    """Every-third-step samples (one cycle period) do not grow."""
    return all(seq[i + 3] <= seq[i] for i in range(len(seq) - 3))


def classify_backward(z, c, max_iter: int = DEFAULT_MAX_ITER, tol: float = CONVERGENCE_TOL,
                      cycle_tol: float = RENDER_TOL, escape_radius: float = ESCAPE_RADIUS,
                      record: bool = True):
    """Classify the backward orbit of z.  Returns (BackwardClass, OrbitRecord).

    Backward iteration of the cycle amplifies rounding by roughly the ratio
    of the cycle's multipliers, so convergence to the cycle is judged at
    ``cycle_tol`` rather than ``tol``.
    """
    s = _setup(c)
    cls, reason, n, pts, fail = _backward_core((float(z[0]), float(z[1])), s, max_iter, tol,
                                               cycle_tol, escape_radius, record)
    regime = "certified" if s.certified else "uncertified"
    return cls, OrbitRecord(tuple(Point(*p) for p in pts), reason, n, None,
                            Direction.BACKWARD, regime, fail)


def _backward_core(z, s: _Setup, max_iter, tol, cycle_tol, escape_radius, record):
    pts = [z] if record else None
    x, y = z
    if s.alpha is not None and _sup(x, y, *s.alpha) <= EXACT_TOL:
        return BackwardClass.FIXED_ALPHA, StopReason.EXACT_MATCH, 0, [z], None
    if s.theta is not None and _sup(x, y, *s.theta) <= EXACT_TOL:
        return BackwardClass.THETA_UNSTABLE_CANDIDATE, StopReason.EXACT_MATCH, 0, [z], None
    if any(_sup(x, y, *q) <= EXACT_TOL for q in s.cycle):
        return BackwardClass.CYCLE_UNSTABLE_CANDIDATE, StopReason.EXACT_MATCH, 0, [z], None
    c = s.c
    has_fp = s.theta is not None
    tx = s.theta[0] if has_fp else math.nan
    (px, py), (qx, qy), (rx, ry) = s.cycle
    prev_theta = math.inf
    cyc_hist = []
    n = 0
    while True:
        if max(abs(x), abs(y)) > escape_radius or not (math.isfinite(x) and math.isfinite(y)):
            return (BackwardClass.BACKWARD_ESCAPING, StopReason.NORM_THRESHOLD, n, pts or [z],
                    None)
        if has_fp:
            d_theta = _sup(x, y, tx, tx)
            if d_theta < tol and d_theta < prev_theta:
                return (BackwardClass.THETA_UNSTABLE_CANDIDATE, StopReason.CONVERGED_THETA, n,
                        pts or [z], None)
            prev_theta = d_theta
        d_cyc = min(_sup(x, y, px, py), _sup(x, y, qx, qy), _sup(x, y, rx, ry))
        cyc_hist.append(d_cyc)
        if d_cyc < cycle_tol and len(cyc_hist) > 3 and d_cyc < cyc_hist[-4]:
            return (BackwardClass.CYCLE_UNSTABLE_CANDIDATE, StopReason.CONVERGED_CYCLE, n,
                    pts or [z], None)
        if n >= max_iter:
            return BackwardClass.UNDECIDED, StopReason.MAX_ITER, n, pts or [z], None
        try:
            x, y = apply_inverse((x, y), c)
        except NonUniquePreimage:
            return (BackwardClass.PREIMAGE_FAILURE, StopReason.NON_UNIQUE_PREIMAGE, n,
                    pts or [z], n + 1)
        except NoPreimage:
            return (BackwardClass.PREIMAGE_FAILURE, StopReason.NO_PREIMAGE, n, pts or [z], n + 1)
        except RangeError:
            return (BackwardClass.BACKWARD_ESCAPING, StopReason.OVERFLOW, n, pts or [z], None)
        n += 1
        if pts is not None:
            pts.append((x, y))


def orbit(z, c, steps: int, direction="forward", regions: bool = False) -> OrbitRecord:
    """Raw iteration; stops early on a preimage failure or overflow."""
    direction = Direction(direction)
    step = apply if direction is Direction.FORWARD else apply_inverse
    c = float(c)
    pts = [Point(float(z[0]), float(z[1]))]
    reason, fail = StopReason.STEPS_DONE, None
    for k in range(steps):
        try:
            pts.append(step(pts[-1], c))
        except NonUniquePreimage:
            reason, fail = StopReason.NON_UNIQUE_PREIMAGE, k + 1
            break
        except NoPreimage:
            reason, fail = StopReason.NO_PREIMAGE, k + 1
            break
        except RangeError:
            reason = StopReason.OVERFLOW
            break
    trace = tuple(frozenset(region_of(p, c)) for p in pts) if regions else None
    regime = "certified" if in_certified_regime(c) else "uncertified"
    return OrbitRecord(tuple(pts), reason, len(pts) - 1, trace, direction, regime, fail)


def _near_box(box, w, slack) -> bool:
    x0, x1, y0, y1 = box.bounds
    return x0 - slack <= w[0] <= x1 + slack and y0 - slack <= w[1] <= y1 + slack


def return_times(z, c, region, count: int, max_steps: int = DEFAULT_MAX_ITER,
                 slack: float = EXACT_TOL) -> list[int]:
    """[n_0 = 0, n_1, ...]: the start plus up to ``count`` later visits to
    ``region``, truncated if ``max_steps`` runs out first.

    Membership allows ``slack`` so that a fixed corner point such as alpha,
    whose computed image may move by an ulp, keeps returning every step.
    """
    box = catalog(c)[RegionId(region)]
    if not box.contains(z):
        raise NotInRegion(f"{tuple(z)} is not in {RegionId(region)} at c = {c}")
    out = [0]
    w = (float(z[0]), float(z[1]))
    for n in range(1, max_steps + 1):
        w = apply(w, c)
        if _near_box(box, w, slack):
            out.append(n)
            if len(out) > count:
                break
    return out


def envelope_check(z, c, returns: int, slack: float = EXACT_TOL) -> bool:
    """True iff the i-th return to QR lies in the square of side
    |c|^i |a1|^3 at the alpha corner, for i = 1..returns."""
    cat = catalog(c)
    if not cat[RegionId.Z0].contains(z):
        raise NotInZ0(f"{tuple(z)} is not in Z0 at c = {c}")
    a1 = fixed_points(c).a1
    times = return_times(z, c, RegionId.QR, returns)
    if len(times) <= returns:
        return False
    w = (float(z[0]), float(z[1]))
    k = 0
    for i in range(1, returns + 1):
        while k < times[i]:
            w = apply(w, c)
            k += 1
        side = abs(c) ** i * abs(a1) ** 3
        if not (a1 - slack <= w[0] <= a1 + side + slack and a1 - side - slack <= w[1] <= a1 + slack):
            return False
    return True

