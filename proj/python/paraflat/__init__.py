"""Flatness-based boundary control synthesis for 1D parabolic equations."""

from paraflat._core import (
    GevreyBump,
    PiecewiseSmoothFn,
    Problem,
    load_problem,
    parse_problem,
    plan_composite,
    plan_null_control,
    plan_transfer,
    __version__,
)

__all__ = [
    "GevreyBump",
    "PiecewiseSmoothFn",
    "Problem",
    "load_problem",
    "parse_problem",
    "plan_composite",
    "plan_null_control",
    "plan_transfer",
    "__version__",
]
