"""Dynamics of the plane map f(x, y) = (xy + c, x) for -1 < c < 0."""

from .core_dynamics import apply, apply_inverse, fixed_points, stability, three_cycle
from .classifier import BackwardClass, ForwardClass, classify_backward, classify_forward, orbit
from .interval_certifier import Status, certify_disjoint, certify_inclusion, certify_range
from .regions import RegionId, catalog, region_of
from .renderer import GridSpec, stats_summary, sweep, write_ppm

__version__ = "0.1.0"
