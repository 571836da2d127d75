"""Rigorous inclusion and disjointness proofs for one step of the map over an interval of c.

Two engines share one subdivision driver.

The exact engine keeps every box edge as an expression A(c) + B(c)*a2 and
bounds the image of a box by its corner products.  This is exact for a
bilinear map on a box whose edges have known signs.  Comparisons between
edges are then sign questions about a single such expression over the
c-interval, so edge-tight inclusions such as a2*a2 + c = a2 cancel
identically instead of being lost to rounding.

The numeric engine is plain outward-rounded interval arithmetic.  It is
used for iterated images, where the exact expressions would grow too fast.

Unbounded sources are cut at ``r_max`` into a bounded core, which is
subdivided, plus named tail pieces.  The tails keep their infinite edges
and are checked once with the same corner rule, which on a box with
monotone edges is a monotonicity argument.
"""

from __future__ import annotations

import math
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from types import SimpleNamespace

from . import _exact as ex
from . import _interval as iv
from ._interval import IBox, Interval
from .regions import INVERSE, PARTITION, RegionId, layout

__all__ = [
    "Interval",
    "IBox",
    "Status",
    "Certificate",
    "CertifyOptions",
    "Claim",
    "PreconditionError",
    "f_image",
    "certify_inclusion",
    "certify_disjoint",
    "certify_claim",
    "certify_suite",
    "certify_range",
    "suite_claims",
    "literal_wall_claim",
    "r0_threshold",
    "certify_r0_exclusion",
    "shape_bounds",
    "report_lines",
]

R = RegionId
INF = math.inf


class Status(str, Enum):
    CERTIFIED = "Certified"
    FAILED = "Failed"
    DEPTH_EXCEEDED = "DepthExceeded"

    def __str__(self):
        return self.value


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class CertifyOptions:
    r_max: float = 1e4
    max_depth: int = 24
    c_split: int = 4
    max_nodes: int = 1_000_000


@dataclass(frozen=True)
class Certificate:
    claim: str
    status: Status
    max_depth_used: int
    c_interval: Interval
    counterexample: IBox | None = None
    counterexample_c: float | None = None
    parts: tuple = ()
    nodes: int = 0
    statement: str = ""

    @property
    def certified(self) -> bool:
        return self.status is Status.CERTIFIED

    def to_json(self) -> dict:
        out = {"claim": self.claim, "status": self.status.value,
               "depth": self.max_depth_used,
               "c": [self.c_interval.lo, self.c_interval.hi]}
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample.to_json()
            out["counterexample_c"] = self.counterexample_c
        return out


def f_image(b: IBox, c) -> IBox:
    """Interval extension ([x][y] + [c], [x])."""
    cI = Interval.of(c)
    u = iv.add(iv.mul(b.xi.pair, b.yi.pair), cI.pair)
    return IBox(Interval(*u), b.xi)


# --- shapes ----------------------------------------------------------------

_SYM_NS = SimpleNamespace(c=ex.C, one=ex.ONE, zero=ex.ZERO, a1=ex.S_SMALL, a2=ex.S,
                          abs_a1=ex.S - ex.ONE, inf=INF)


def _aux_shapes(k) -> dict:
    c, zero, m1 = k.c, k.zero, k.zero - k.one
    return {
        "R2.east": (c, zero, m1, zero),
        "R2.west": (m1, c, m1, zero),
        "R2.northwest": (m1, c, c, zero),
        "R2.southeast": (c, zero, m1, c),
        "R2.southwest": (m1, c, m1, c),
    }


_SHAPES = {**layout(_SYM_NS), **_aux_shapes(_SYM_NS)}


def shape_bounds(key, c: float) -> tuple[float, float, float, float]:
    """Float bounds of a region or auxiliary shape at a single c (for sampling)."""
    return tuple(v if ex.is_inf(v) else v.value(c) for v in _SHAPES[_key(key)])


def _key(key):
    if isinstance(key, RegionId):
        return key
    try:
        return RegionId(key)
    except ValueError:
        if key in _SHAPES:
            return key
        raise KeyError(f"unknown shape {key!r}") from None


# --- exact predicates --------------------------------------------------------

class _Ctx:
    """Comparison cache for one c-interval."""

    __slots__ = ("lo", "hi", "_le", "undecided")

    def __init__(self, lo: float, hi: float):
        self.lo, self.hi = lo, hi
        self._le = {}
        self.undecided = False

    def le(self, a, b):
        key = (a, b)
        if key in self._le:
            hit = self._le[key]
        else:
            hit = ex.le(a, b, self.lo, self.hi)
            self._le[key] = hit
        if hit is None:
            self.undecided = True
        return hit

    def nonneg(self, e):
        return self.le(ex.ZERO, e)

    def nonpos(self, e):
        return self.le(e, ex.ZERO)


def _hull(box, ctx: _Ctx):
    """Exact image hull (u0, u1, v0, v1) of a box, or None if undecided."""
    x0, x1, y0, y1 = box
    xs = 1 if ctx.nonneg(x0) else (-1 if ctx.nonpos(x1) else 0)
    ys = 1 if ctx.nonneg(y0) else (-1 if ctx.nonpos(y1) else 0)
    if xs and ys:
        lo_pair = {(1, 1): (x0, y0), (1, -1): (x1, y0), (-1, 1): (x0, y1), (-1, -1): (x1, y1)}
        hi_pair = {(1, 1): (x1, y1), (1, -1): (x0, y1), (-1, 1): (x1, y0), (-1, -1): (x0, y0)}
        lo = ex.times(*lo_pair[xs, ys], ctx.lo, ctx.hi)
        hi = ex.times(*hi_pair[xs, ys], ctx.lo, ctx.hi)
        if lo is None or hi is None:
            return None
    else:
        corners = [ex.times(a, b, ctx.lo, ctx.hi) for a in (x0, x1) for b in (y0, y1)]
        if any(p is None for p in corners):
            return None
        lo = _extreme(corners, ctx, lambda a, b: ctx.le(a, b))
        hi = _extreme(corners, ctx, lambda a, b: ctx.le(b, a))
        if lo is None or hi is None:
            return None
    return (ex.plus(lo, ex.C), ex.plus(hi, ex.C), x0, x1)


def _extreme(values, ctx, below):
    for v in values:
        if all(below(v, w) for w in values if w is not v):
            return v
    return None


def _inside(b, t, ctx) -> bool:
    return bool(ctx.le(t[0], b[0]) and ctx.le(b[1], t[1])
                and ctx.le(t[2], b[2]) and ctx.le(b[3], t[3]))


def _apart(b, t, ctx) -> bool:
    """The closed box b misses the open box t."""
    return bool(ctx.le(b[1], t[0]) or ctx.le(t[1], b[0])
                or ctx.le(b[3], t[2]) or ctx.le(t[3], b[2]))


def _subtract(b, t, ctx):
    """Closed pieces whose union contains b minus the interior of t."""
    pieces = []
    if not ctx.le(t[0], b[0]):
        pieces.append((b[0], t[0], b[2], b[3]))
    if not ctx.le(b[1], t[1]):
        pieces.append((t[1], b[1], b[2], b[3]))
    mx0 = t[0] if ctx.le(b[0], t[0]) else b[0]
    mx1 = t[1] if ctx.le(t[1], b[1]) else b[1]
    if not ctx.le(t[2], b[2]):
        pieces.append((mx0, mx1, b[2], t[2]))
    if not ctx.le(b[3], t[3]):
        pieces.append((mx0, mx1, t[3], b[3]))
    return pieces


def _covered(b, targets, ctx) -> bool:
    for t in targets:
        if _inside(b, t, ctx):
            return True
    for i, t in enumerate(targets):
        if _apart(b, t, ctx):
            continue
        rest = targets[:i] + targets[i + 1:]
        if not rest:
            continue
        if all(_covered(p, rest, ctx) for p in _subtract(b, t, ctx)):
            return True
    return False


def _exact_predicate(kind: str, targets):
    def check(box, c_lo, c_hi):
        """(holds, some comparison was undecided)"""
        ctx = _Ctx(c_lo, c_hi)
        h = _hull(box, ctx)
        if h is None:
            return False, True
        if kind == "inclusion":
            return _covered(h, targets, ctx), ctx.undecided
        return all(_apart(h, t, ctx) for t in targets), ctx.undecided
    return check


def _split_c(check, box, c_lo, c_hi, depth):
    ok, undecided = check(box, c_lo, c_hi)
    if ok:
        return True
    if depth <= 0 or not undecided:
        return False
    mid = 0.5 * c_lo + 0.5 * c_hi
    if not c_lo < mid < c_hi:
        return False
    return (_split_c(check, box, c_lo, mid, depth - 1)
            and _split_c(check, box, mid, c_hi, depth - 1))


# --- witnesses ---------------------------------------------------------------

def _point_enclosure(e, c):
    return ex.enclose_end(e, c, c)


def _witness(box, kind, targets, c_lo, c_hi):
    """Search corners and centre of a finite box at three values of c for a
    point whose image provably violates the claim.  Returns (gap, IBox, c)."""
    best = None
    half = Fraction(1, 2)
    c_mid = 0.5 * c_lo + 0.5 * c_hi
    for cv in (c_lo, c_mid, c_hi):
        for s, t in ((0, 0), (1, 0), (0, 1), (1, 1), (half, half)):
            xe = box[0] + s * (box[1] - box[0]) if s else box[0]
            ye = box[2] + t * (box[3] - box[2]) if t else box[2]
            if ex.is_inf(xe) or ex.is_inf(ye):
                continue
            px, py = _point_enclosure(xe, cv), _point_enclosure(ye, cv)
            u = iv.add(iv.mul(px, py), (cv, cv))
            gap = _violation(u, px, kind, targets, cv)
            if gap is not None and (best is None or gap > best[0]):
                best = (gap, IBox(Interval(*px), Interval(*py)), cv)
    return best


def _violation(u, v, kind, targets, cv):
    boxes = [tuple(_point_enclosure(e, cv) for e in t) for t in targets]
    if kind == "inclusion":
        dists = []
        for bx in boxes:
            dx = max(bx[0][0] - u[1], u[0] - bx[1][1], 0.0)
            dy = max(bx[2][0] - v[1], v[0] - bx[3][1], 0.0)
            if dx <= 0 and dy <= 0:
                return None
            dists.append(math.hypot(dx, dy))
        return min(dists)
    depth = []
    for bx in boxes:
        m = min(u[0] - bx[0][1], bx[1][0] - u[1], v[0] - bx[2][1], bx[3][0] - v[1])
        if m > 0:
            depth.append(m)
    return max(depth) if depth else None


# --- driver ------------------------------------------------------------------

def _split_unbounded(src, r_max):
    """Core box plus tail pieces (with names) of a possibly unbounded box."""
    r = ex.Sym.const(Fraction(r_max))

    def cuts(lo, hi):
        out = []
        if ex.is_inf(lo):
            out.append(("-", lo, -r))
            lo = -r
        mid_hi = r if ex.is_inf(hi) else hi
        out.append(("", lo, mid_hi))
        if ex.is_inf(hi):
            out.append(("+", r, hi))
        return out

    core, tails = None, []
    for xn, x0, x1 in cuts(src[0], src[1]):
        for yn, y0, y1 in cuts(src[2], src[3]):
            piece = (x0, x1, y0, y1)
            if not xn and not yn:
                core = piece
            else:
                name = "tail:" + (f"x{xn}" if xn else "") + (f"y{yn}" if yn else "")
                tails.append((name, piece))
    return core, tails


def _node_box(core, node):
    s0, s1, t0, t1 = node
    dx, dy = core[1] - core[0], core[3] - core[2]
    return (core[0] + s0 * dx if s0 else core[0], core[0] + s1 * dx if s1 != 1 else core[1],
            core[2] + t0 * dy if t0 else core[2], core[2] + t1 * dy if t1 != 1 else core[3])


def _widths(core, node, c_mid):
    x0, x1 = core[0].value(c_mid), core[1].value(c_mid)
    y0, y1 = core[2].value(c_mid), core[3].value(c_mid)
    s0, s1, t0, t1 = node
    return (float(s1 - s0) * (x1 - x0), float(t1 - t0) * (y1 - y0))


def _bisect(node, wx, wy):
    s0, s1, t0, t1 = node
    if wx >= wy:
        sm = (s0 + s1) / 2
        return [(s0, sm, t0, t1), (sm, s1, t0, t1)]
    tm = (t0 + t1) / 2
    return [(s0, s1, t0, tm), (s0, s1, tm, t1)]


def _run_exact(claim_id, statement, kind, src, targets, c_lo, c_hi, opts: CertifyOptions):
    check = _exact_predicate(kind, targets)
    cI = Interval(c_lo, c_hi)
    core, tails = _split_unbounded(src, opts.r_max)
    parts = []
    for name, piece in tails:
        ok = _split_c(check, piece, c_lo, c_hi, opts.c_split)
        parts.append(Certificate(f"{claim_id}/{name}",
                                 Status.CERTIFIED if ok else Status.DEPTH_EXCEEDED, 0, cI))
    c_mid = 0.5 * c_lo + 0.5 * c_hi
    one = Fraction(1)
    queue = deque([((Fraction(0), one, Fraction(0), one), 0)])
    deepest, nodes = 0, 0
    status, cex, cex_c = Status.CERTIFIED, None, None
    while queue:
        node, depth = queue.popleft()
        nodes += 1
        deepest = max(deepest, depth)
        box = _node_box(core, node)
        if _split_c(check, box, c_lo, c_hi, opts.c_split):
            continue
        wit = _witness(box, kind, targets, c_lo, c_hi)
        if wit is not None:
            status, cex, cex_c = Status.FAILED, wit[1], wit[2]
            break
        if depth >= opts.max_depth or nodes >= opts.max_nodes:
            status = Status.DEPTH_EXCEEDED
            break
        queue.extend((child, depth + 1) for child in _bisect(node, *_widths(core, node, c_mid)))
    if status is Status.CERTIFIED and any(not p.certified for p in parts):
        status = Status.DEPTH_EXCEEDED
    return Certificate(claim_id, status, deepest, cI, cex, cex_c, tuple(parts), nodes, statement)


# --- numeric engine ----------------------------------------------------------

def _numeric_box(key, c_lo, c_hi):
    """Hull over the c-interval of a shape's edges, as enclosures."""
    return tuple(ex.enclose_end(e, c_lo, c_hi) for e in _SHAPES[_key(key)])


def _run_numeric(claim_id, statement, kind, source, avoid, steps, c_lo, c_hi,
                 opts: CertifyOptions, interior: bool):
    sb = _numeric_box(source, c_lo, c_hi)
    if any(math.isinf(v) for pair in sb for v in pair):
        raise PreconditionError(f"{claim_id}: the interval engine needs a bounded source")
    x0, x1, y0, y1 = sb[0][0], sb[1][1], sb[2][0], sb[3][1]
    inner = (sb[0][1], sb[1][0], sb[2][1], sb[3][0])  # surely inside the source
    targets = [_numeric_box(t, c_lo, c_hi) for t in avoid]
    cpair = (c_lo, c_hi)
    cI = Interval(c_lo, c_hi)

    def image(b):
        xi, yi = (b[0], b[1]), (b[2], b[3])
        for _ in range(steps):
            xi, yi = iv.add(iv.mul(xi, yi), cpair), xi
        return xi, yi

    def ok(b):
        u, v = image(b)
        for t in targets:
            # outer edges of t over the c-interval, widened by one ulp
            tx0, tx1 = iv.down(t[0][0]), iv.up(t[1][1])
            ty0, ty1 = iv.down(t[2][0]), iv.up(t[3][1])
            if interior:
                sep = u[1] <= tx0 or u[0] >= tx1 or v[1] <= ty0 or v[0] >= ty1
            else:
                sep = u[1] < tx0 or u[0] > tx1 or v[1] < ty0 or v[0] > ty1
            if not sep:
                return False
        return True

    def witness(b):
        if c_lo != c_hi:
            return None
        for px in (b[0], 0.5 * (b[0] + b[1]), b[1]):
            px = min(max(px, inner[0]), inner[1])
            for py in (b[2], 0.5 * (b[2] + b[3]), b[3]):
                py = min(max(py, inner[2]), inner[3])
                u, v = image((px, px, py, py))
                for t in targets:
                    tx0, tx1, ty0, ty1 = t[0][1], t[1][0], t[2][1], t[3][0]
                    if tx0 < u[0] and u[1] < tx1 and ty0 < v[0] and v[1] < ty1:
                        return IBox(Interval(px, px), Interval(py, py))
        return None

    queue = deque([((x0, x1, y0, y1), 0)])
    deepest, nodes = 0, 0
    status, cex = Status.CERTIFIED, None
    while queue:
        b, depth = queue.popleft()
        nodes += 1
        deepest = max(deepest, depth)
        if ok(b):
            continue
        w = witness(b)
        if w is not None:
            status, cex = Status.FAILED, w
            break
        if depth >= opts.max_depth or nodes >= opts.max_nodes:
            status = Status.DEPTH_EXCEEDED
            break
        if b[1] - b[0] >= b[3] - b[2]:
            xm = 0.5 * (b[0] + b[1])
            kids = [(b[0], xm, b[2], b[3]), (xm, b[1], b[2], b[3])]
        else:
            ym = 0.5 * (b[2] + b[3])
            kids = [(b[0], b[1], b[2], ym), (b[0], b[1], ym, b[3])]
        queue.extend((k, depth + 1) for k in kids)
    return Certificate(claim_id, status, deepest, cI, cex, c_lo if cex else None, (), nodes,
                       statement)


# --- public operations ------------------------------------------------------

def _c_pair(c) -> tuple[float, float]:
    if isinstance(c, Interval):
        return c.lo, c.hi
    if isinstance(c, tuple):
        return float(c[0]), float(c[1])
    return float(c), float(c)


def _check_regime(c_lo, c_hi, what):
    if not (-1.0 < c_lo <= c_hi < 0.0):
        raise PreconditionError(
            f"{what}: c-interval [{c_lo!r}, {c_hi!r}] must lie strictly inside (-1, 0)")


def certify_inclusion(source, targets, c, opts: CertifyOptions | None = None,
                      claim_id: str | None = None) -> Certificate:
    """Prove f(source) is inside the union of ``targets`` for every c in the interval."""
    opts = opts or CertifyOptions()
    c_lo, c_hi = _c_pair(c)
    _check_regime(c_lo, c_hi, "certify_inclusion")
    src = _key(source)
    tks = [_key(t) for t in targets]
    cid = claim_id or f"{src}->{'|'.join(map(str, tks))}"
    statement = f"f({src}) in " + " u ".join(map(str, tks))
    return _run_exact(cid, statement, "inclusion", _SHAPES[src], [_SHAPES[t] for t in tks],
                      c_lo, c_hi, opts)


def certify_disjoint(source, avoid, c, opts: CertifyOptions | None = None,
                     claim_id: str | None = None, steps: int = 1,
                     interior: bool = True) -> Certificate:
    """Prove f^steps(source) misses ``avoid`` for every c in the interval.

    With ``interior`` the avoided set is the open box, so shared edges are
    allowed.  One step uses the exact engine; more steps (or
    ``interior=False``) use plain interval arithmetic on the source.
    """
    opts = opts or CertifyOptions()
    c_lo, c_hi = _c_pair(c)
    _check_regime(c_lo, c_hi, "certify_disjoint")
    src = _key(source)
    avoid_list = [avoid] if isinstance(avoid, (str, RegionId)) else list(avoid)
    tks = [_key(t) for t in avoid_list]
    power = "" if steps == 1 else f"^{steps}"
    cid = claim_id or f"{src}-x-{'|'.join(map(str, tks))}" + (f"@{steps}" if steps != 1 else "")
    rel = "int " if interior else ""
    statement = f"f{power}({src}) misses {rel}" + " u ".join(map(str, tks))
    if steps == 1 and interior:
        return _run_exact(cid, statement, "disjoint", _SHAPES[src], [_SHAPES[t] for t in tks],
                          c_lo, c_hi, opts)
    return _run_numeric(cid, statement, "disjoint", src, tks, steps, c_lo, c_hi, opts, interior)


@dataclass(frozen=True)
class Claim:
    claim_id: str
    kind: str  # "inclusion", "disjoint" or "family"
    statement: str
    source: object = None
    targets: tuple = ()
    members: tuple = field(default=())  # (source, avoid) pairs for families

    def run(self, c, opts: CertifyOptions | None = None) -> Certificate:
        return certify_claim(self, c, opts)


def certify_claim(claim: Claim, c, opts: CertifyOptions | None = None) -> Certificate:
    opts = opts or CertifyOptions()
    if claim.kind == "inclusion":
        cert = certify_inclusion(claim.source, claim.targets, c, opts, claim.claim_id)
        return replace(cert, statement=claim.statement)
    if claim.kind == "disjoint":
        cert = certify_disjoint(claim.source, claim.targets, c, opts, claim.claim_id)
        return replace(cert, statement=claim.statement)
    c_lo, c_hi = _c_pair(c)
    parts = tuple(certify_disjoint(s, a, c, opts, f"{claim.claim_id}/{s}") for s, a in claim.members)
    return _aggregate(claim.claim_id, claim.statement, parts, Interval(c_lo, c_hi))


def _aggregate(claim_id, statement, parts, cI) -> Certificate:
    status, cex, cex_c = Status.CERTIFIED, None, None
    for p in parts:
        if p.status is Status.FAILED:
            status, cex, cex_c = Status.FAILED, p.counterexample, p.counterexample_c
            break
        if p.status is Status.DEPTH_EXCEEDED:
            status = Status.DEPTH_EXCEEDED
    return Certificate(claim_id, status, max((p.max_depth_used for p in parts), default=0), cI,
                       cex, cex_c, parts, sum(p.nodes for p in parts), statement)


def _union(keys) -> str:
    return " u ".join(str(k) for k in keys)


def suite_claims() -> list[Claim]:
    """The 42 one-step claims behind the filtration, in report order."""
    claims = []
    groups = [("S", (R.L, R.M, R.N, R.P)), ("R", (R.R0, R.R1, R.R2, R.R3)),
              ("Q", (R.QR, R.QS, R.QT, R.QU)),
              ("AH", (R.A, R.B, R.C, R.D, R.E, R.F, R.G, R.H1, R.H2))]
    from .regions import FORWARD
    for prefix, keys in groups:
        for k in keys:
            tg = tuple(sorted(FORWARD[k], key=list(RegionId).index))
            claims.append(Claim(f"{prefix}.{k}", "inclusion", f"f({k}) in {_union(tg)}", k, tg))
    claims.append(Claim("trap.Y", "inclusion", "f(Y) in Y", R.Y, (R.Y,)))
    for t in INVERSE:
        allowed = INVERSE[t]
        members = tuple((w, t) for w in PARTITION if w not in allowed)
        allowed_s = _union(sorted(allowed, key=list(RegionId).index))
        claims.append(Claim(f"inv.{t}", "family", f"preimage of {t} in {allowed_s}",
                            members=members))
    claims.append(Claim("wall.1", "family",
                        "R2 points with preimage in R2 outside Y have no second preimage in R2",
                        members=((R.R2, "R2.west"), ("R2.east", "R2.southeast"))))
    claims.append(Claim("wall.2", "family", "preimage of R3 inside R2 lies in [-1,c]x[-1,c]",
                        members=(("R2.east", R.R3), ("R2.northwest", R.R3))))
    claims.append(Claim("wall.3", "family",
                        "preimage of [-1,c]x[-1,c] inside R0 u R1 u R2 u R3 lies in R1",
                        members=tuple((w, "R2.southwest") for w in (R.R0, R.R2, R.R3))))
    return claims


def literal_wall_claim() -> Claim:
    """Preimage of [-1,c]x[-1,c] inside R1 over the whole plane.  This is false:
    f(-0.5, 1) = (-1, -0.5) at c = -0.5, with (-0.5, 1) in B."""
    members = tuple((w, "R2.southwest") for w in PARTITION if w is not R.R1)
    return Claim("wall.3-plane", "family", "preimage of [-1,c]x[-1,c] in R1", members=members)


def certify_suite(c, opts: CertifyOptions | None = None) -> list[Certificate]:
    c_lo, c_hi = _c_pair(c)
    _check_regime(c_lo, c_hi, "certify_suite")
    return [certify_claim(cl, (c_lo, c_hi), opts) for cl in suite_claims()]


def _suite_piece(args):
    lo, hi, opts = args
    return certify_suite((lo, hi), opts)


def certify_range(c_lo: float, c_hi: float, pieces: int = 1,
                  opts: CertifyOptions | None = None, workers: int = 1) -> list[Certificate]:
    """Run the suite on ``pieces`` equal subintervals; results are in c order."""
    _check_regime(c_lo, c_hi, "certify_range")
    if pieces < 1:
        raise PreconditionError("certify_range: pieces must be >= 1")
    edges = [c_lo + (c_hi - c_lo) * i / pieces for i in range(pieces)] + [c_hi]
    jobs = [(edges[i], edges[i + 1], opts) for i in range(pieces)]
    if workers <= 1:
        chunks = [_suite_piece(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_suite_piece, jobs))
    return [cert for chunk in chunks for cert in chunk]


def report_lines(certs) -> list[dict]:
    return [cert.to_json() for cert in certs]


# --- backward exclusion of R0 ----------------------------------------------

def r0_threshold(c, limit: int = 10_000) -> int:
    """Smallest k with (-c / a2^k) * sum_{i<k} a2^i > 1 + c on the whole
    c-interval, evaluated in interval arithmetic."""
    c_lo, c_hi = _c_pair(c)
    _check_regime(c_lo, c_hi, "r0_threshold")
    cI = (c_lo, c_hi)
    a2 = ex.S.enclose(c_lo, c_hi)
    inv = iv.recip_pos(a2)
    neg_c = iv.neg(cI)
    one_c = iv.add((1.0, 1.0), cI)
    total = (0.0, 0.0)
    power = (1.0, 1.0)
    for k in range(1, limit + 1):
        power = iv.mul(power, inv)
        total = iv.add(total, power)  # sum_{m=1}^{k} a2^{-m}
        lhs = iv.mul(neg_c, total)
        if lhs[0] > one_c[1]:
            return k
    raise PreconditionError(f"r0_threshold: no k <= {limit} on [{c_lo}, {c_hi}]")


def certify_r0_exclusion(c, extra: int = 0, opts: CertifyOptions | None = None):
    """Certify f^j(R0) misses R0 (closed) for j = 2k .. 2k + extra, with k
    from ``r0_threshold``.  Returns (k, certificates)."""
    opts = opts or CertifyOptions()
    k = r0_threshold(c)
    certs = [certify_disjoint(R.R0, R.R0, c, opts, f"R0-x-R0@{j}", steps=j, interior=False)
             for j in range(2 * k, 2 * k + extra + 1)]
    return k, certs
