"""Constructed test points on unstable curves.

Uniformly drawn points almost never lie on these curves, so acceptance
checks that need them build them: start a tiny step from the saddle along
its unstable direction and push forward.
"""

import math
import random

from planejulia.core_dynamics import Point, fixed_points


def _unit_unstable(c, which):
    """Unstable eigenvalue and unit eigenvector of theta or of the cycle at p."""
    if which == "theta":
        a2 = fixed_points(c).a2
        m = ((a2, a2), (1.0, 0.0))
    else:
        k = (1.0 + c) * (2.0 + c) + 1.0
        m = ((k, 2.0 + c), (2.0 + c, 1.0))  # product of Jacobians once around the cycle
    tr, det = m[0][0] + m[1][1], m[0][0] * m[1][1] - m[0][1] * m[1][0]
    lam = (tr + math.sqrt(tr * tr - 4.0 * det)) / 2.0
    vx, vy = m[0][1], lam - m[0][0]
    if abs(vx) + abs(vy) == 0.0:
        vx, vy = lam - m[1][1], m[1][0]
    norm = math.hypot(vx, vy)
    vx, vy = vx / norm, vy / norm
    if vx < 0:
        vx, vy = -vx, -vy
    return lam, (vx, vy)


def unstable_points(c, which: str, count: int, seed: int = 0, radius: float = 10.0,
                    start: float = 1e-9, min_dist: float = 1e-6) -> list[Point]:
    """Points on the local unstable curve of theta (inside L) or of the
    3-cycle at p (inside N).

    A seed is placed at distance s from the special point along the unstable
    direction, with log s uniform over one fundamental domain, and pushed
    forward (by f, or by f^3 for the cycle).  One iterate with distance to
    the special point in [min_dist, radius] is kept per seed.
    """
    if which not in ("theta", "cycle"):
        raise ValueError("which must be 'theta' or 'cycle'")
    rng = random.Random(seed)
    lam, (vx, vy) = _unit_unstable(c, which)
    if which == "theta":
        a2 = fixed_points(c).a2
        base, sign, period = (a2, a2), 1.0, 1
    else:
        base, sign, period = (-1.0, -1.0), -1.0, 3
    out = []
    while len(out) < count:
        s = start * lam ** rng.random()
        w = (base[0] + sign * s * vx, base[1] + sign * s * vy)
        keep = []
        while True:
            d = max(abs(w[0] - base[0]), abs(w[1] - base[1]))
            if d > radius:
                break
            if d >= min_dist:
                keep.append(w)
            for _ in range(period):
                w = (w[0] * w[1] + c, w[0])
        if keep:
            out.append(Point(*rng.choice(keep)))
    return out
