"""Per-pixel classification sweeps, PPM output and class counts.

Pixels are sampled at cell centres, row 0 at the top (y_max).  Rows are
classified independently and merged in row order, so the image does not
depend on the number of workers.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .classifier import (
    CONVERGENCE_TOL,
    DEFAULT_MAX_ITER,
    ESCAPE_RADIUS,
    RENDER_TOL,
    BackwardClass,
    ForwardClass,
    Direction,
    _backward_core,
    _forward_core,
    _setup,
)

__all__ = [
    "GridSpec",
    "ClassImage",
    "Stats",
    "SweepOptions",
    "sweep",
    "write_ppm",
    "read_ppm",
    "stats_summary",
    "FORWARD_PALETTE",
    "BACKWARD_PALETTE",
    "KPLUS_WINDOW",
    "KMINUS_WINDOW",
]

KPLUS_WINDOW = (-2.5, 2.5, -2.5, 2.5)
KMINUS_WINDOW = (-3.0, 3.0, -3.0, 3.0)

FORWARD_PALETTE = {
    ForwardClass.ATTRACTING_BASIN: (40, 40, 40),
    ForwardClass.ESCAPING: (255, 255, 255),
    ForwardClass.THETA_STABLE_CANDIDATE: (200, 0, 0),
    ForwardClass.CYCLE_STABLE_CANDIDATE: (0, 0, 200),
    ForwardClass.UNDECIDED: (120, 120, 120),
    ForwardClass.FIXED_ALPHA: (0, 160, 0),
    ForwardClass.FIXED_THETA: (200, 0, 0),
    ForwardClass.THREE_CYCLE_MEMBER: (0, 0, 200),
}

BACKWARD_PALETTE = {
    BackwardClass.BACKWARD_ESCAPING: (255, 255, 255),
    BackwardClass.THETA_UNSTABLE_CANDIDATE: (200, 0, 0),
    BackwardClass.CYCLE_UNSTABLE_CANDIDATE: (0, 0, 200),
    BackwardClass.PREIMAGE_FAILURE: (230, 160, 0),
    BackwardClass.UNDECIDED: (120, 120, 120),
    BackwardClass.FIXED_ALPHA: (0, 160, 0),
}


def _tags(direction: Direction) -> tuple:
    return tuple(ForwardClass) if direction is Direction.FORWARD else tuple(BackwardClass)


@dataclass(frozen=True)
class GridSpec:
    x_min: float
    x_max: float
    y_min: float
    y_max: float
    width: int
    height: int

    def __post_init__(self):
        vals = (self.x_min, self.x_max, self.y_min, self.y_max)
        if not all(math.isfinite(v) for v in vals):
            raise ValueError("grid window must be finite")
        if not (self.x_min < self.x_max and self.y_min < self.y_max):
            raise ValueError("grid window needs x_min < x_max and y_min < y_max")
        if int(self.width) < 1 or int(self.height) < 1:
            raise ValueError("grid needs width >= 1 and height >= 1")

    @classmethod
    def square(cls, window, size: int) -> "GridSpec":
        return cls(*window, size, size)

    def xs(self) -> np.ndarray:
        dx = (self.x_max - self.x_min) / self.width
        return self.x_min + (np.arange(self.width) + 0.5) * dx

    def y_of_row(self, j: int) -> float:
        dy = (self.y_max - self.y_min) / self.height
        return self.y_max - (j + 0.5) * dy

    def center(self, i: int, j: int) -> tuple[float, float]:
        return (float(self.xs()[i]), self.y_of_row(j))

    def to_json(self) -> dict:
        return {"x_min": self.x_min, "x_max": self.x_max, "y_min": self.y_min,
                "y_max": self.y_max, "width": self.width, "height": self.height}


@dataclass(frozen=True, eq=False)
class ClassImage:
    width: int
    height: int
    codes: np.ndarray  # uint8 indices into ``labels``, shape (height, width)
    direction: Direction = Direction.FORWARD
    flags: np.ndarray | None = None  # True where the classifier raised

    @property
    def labels(self) -> tuple:
        return _tags(self.direction)

    def tag(self, i: int, j: int):
        return self.labels[int(self.codes[j, i])]

    def tags(self) -> list:
        lab = self.labels
        return [lab[k] for k in self.codes.ravel()]

    def __eq__(self, other):
        return (isinstance(other, ClassImage) and self.direction is other.direction
                and np.array_equal(self.codes, other.codes))


@dataclass(frozen=True)
class Stats:
    counts: dict
    total: int
    c: float
    grid: GridSpec | None = None
    flagged: int = 0

    def to_json(self) -> dict:
        out = {"c": self.c, "counts": {str(k): v for k, v in self.counts.items()},
               "total": self.total, "flagged": self.flagged}
        out["grid"] = self.grid.to_json() if self.grid is not None else None
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)

    def fractions(self) -> dict:
        return {k: v / self.total for k, v in self.counts.items()}


@dataclass(frozen=True)
class SweepOptions:
    max_iter: int = DEFAULT_MAX_ITER
    tol: float = CONVERGENCE_TOL
    cycle_tol: float = RENDER_TOL
    escape_radius: float = ESCAPE_RADIUS
    mode: str = "metric"


def _row(args):
    grid, c, direction, opts, j = args
    s = _setup(c)
    index = {t: k for k, t in enumerate(_tags(direction))}
    y = grid.y_of_row(j)
    codes = np.empty(grid.width, dtype=np.uint8)
    flags = np.zeros(grid.width, dtype=bool)
    for i, x in enumerate(grid.xs()):
        z = (float(x), y)
        try:
            if direction is Direction.FORWARD:
                cls = _forward_core(z, s, opts.max_iter, opts.tol, opts.mode,
                                    opts.escape_radius, False)[0]
            else:
                cls = _backward_core(z, s, opts.max_iter, opts.tol, opts.cycle_tol,
                                     opts.escape_radius, False)[0]
        except (ArithmeticError, ValueError):
            cls = ForwardClass.UNDECIDED if direction is Direction.FORWARD else BackwardClass.UNDECIDED
            flags[i] = True
        codes[i] = index[cls]
    return codes, flags


def sweep(grid: GridSpec, c: float, direction="forward", opts: SweepOptions | None = None,
          workers: int = 1) -> tuple[ClassImage, Stats]:
    direction = Direction(direction)
    opts = opts or SweepOptions()
    c = float(c)
    jobs = [(grid, c, direction, opts, j) for j in range(grid.height)]
    if workers > 1 and grid.height > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_row, jobs, chunksize=max(1, grid.height // (4 * workers))))
    else:
        rows = [_row(a) for a in jobs]
    codes = np.vstack([r[0] for r in rows])
    flags = np.vstack([r[1] for r in rows])
    img = ClassImage(grid.width, grid.height, codes, direction, flags)
    return img, stats_summary(img, c, grid)


def stats_summary(img: ClassImage, c: float = math.nan, grid: GridSpec | None = None) -> Stats:
    hist = np.bincount(img.codes.ravel(), minlength=len(img.labels))
    counts = {t: int(hist[k]) for k, t in enumerate(img.labels)}
    flagged = int(img.flags.sum()) if img.flags is not None else 0
    return Stats(counts, int(img.codes.size), float(c), grid, flagged)


def ppm_bytes(img: ClassImage, palette: dict | None = None) -> bytes:
    if palette is None:
        palette = FORWARD_PALETTE if img.direction is Direction.FORWARD else BACKWARD_PALETTE
    lut = np.zeros((len(img.labels), 3), dtype=np.uint8)
    present = set(np.unique(img.codes).tolist())
    for k, t in enumerate(img.labels):
        rgb = palette.get(t, palette.get(str(t)))
        if rgb is None:
            if k in present:
                raise KeyError(f"palette has no colour for class {t}")
            continue
        lut[k] = rgb
    header = f"P6\n{img.width} {img.height}\n255\n".encode("ascii")
    return header + lut[img.codes].tobytes()


def write_ppm(img: ClassImage, palette: dict | None, path) -> None:
    data = ppm_bytes(img, palette)
    try:
        with open(path, "wb") as fh:
            fh.write(data)
    except OSError as exc:
        raise OSError(exc.errno, f"cannot write PPM to {path}: {exc.strerror}") from exc


def read_ppm(path) -> tuple[int, int, int, bytes]:
    """Parse a binary PPM written by ``write_ppm``: (width, height, maxval, pixels)."""
    with open(path, "rb") as fh:
        data = fh.read()
    parts = data.split(b"\n", 3)
    if len(parts) < 4 or parts[0] != b"P6":
        raise ValueError(f"{path}: not a binary PPM")
    w, h = (int(v) for v in parts[1].split())
    return w, h, int(parts[2]), parts[3]
