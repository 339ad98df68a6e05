#!/usr/bin/env python3
"""
Threshold scans over the noise parameter of a state family.

The margin is tabulated on a grid and the first sign change is refined by
bisection; closed forms are never used on this path.
"""
import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.optimize import bisect

from ..config import MIN_BISECTION_TOL
from ..utils.errors import ParameterError
from .correlations import correlation_tensor
from .criteria import evaluate_tensor, competitor_curves
from .states import evaluate


@dataclass
class ScanResult:
    """Tabulated margins and the located threshold, if any."""

    parameter: str
    grid: np.ndarray
    statistics: np.ndarray
    bounds: np.ndarray
    margins: np.ndarray
    threshold: Optional[float] = None
    achieved_tol: Optional[float] = None
    detected_side: Optional[str] = None
    competitors: dict = field(default_factory=dict)
    competitor_roots: dict = field(default_factory=dict)

    @property
    def threshold_found(self):
        return self.threshold is not None

    def to_dict(self):
        return {
            "parameter": self.parameter,
            "threshold": self.threshold,
            "threshold_found": self.threshold_found,
            "achieved_tol": self.achieved_tol,
            "detected_side": self.detected_side,
            "grid": [float(v) for v in self.grid],
            "statistic": [float(v) for v in self.statistics],
            "bound": [float(v) for v in self.bounds],
            "margin": [float(v) for v in self.margins],
            "competitors": {k: [float(v) for v in vals] for k, vals in self.competitors.items()},
            "competitor_roots": self.competitor_roots,
        }


def margin_function(family, bases, spec):
    """x -> CriterionReport of rho(x)."""
    def report_at(x):
        return evaluate_tensor(correlation_tensor(evaluate(family, x), bases), spec)
    return report_at


def locate_sign_change(values):
    """Index i of the first bracket [i, i+1] where values change sign, or None."""
    for i in range(len(values) - 1):
        if values[i] == 0.0 or values[i] * values[i + 1] < 0.0:
            return i
    # a zero at the last point has no bracket to its right
    if len(values) and values[-1] == 0.0:
        return len(values) - 1
    return None


def find_root(fn, lo, hi, tol):
    """Bisection on a bracketing interval; returns the root and the interval width achieved."""
    if fn(lo) == 0.0:
        return lo, 0.0
    if fn(hi) == 0.0:
        return hi, 0.0
    root = bisect(fn, lo, hi, xtol=tol)
    return float(root), tol


def competitor_root(name, tol=1e-10):
    """Sign change of a competitor curve on [0, 1], or None."""
    grid = np.linspace(0.0, 1.0, 201)
    values = [competitor_curves(name, x) for x in grid]
    i = locate_sign_change(values)
    if i is None:
        return None
    if i == len(grid) - 1:
        return float(grid[i])
    root, _ = find_root(lambda x: competitor_curves(name, x), grid[i], grid[i + 1], tol)
    return root


def scan_family(family, bases, spec, grid, tol, competitors=()):
    """
    Tabulate the criterion over the grid and bisect the first sign change.

    Args:
        family (NoisyStateFamily): States rho(x)
        bases (sequence): One COBasis per subsystem
        spec (CriterionSpec): Criterion
        grid (numpy.ndarray): Strictly increasing values in [0, 1]
        tol (float): Bisection tolerance, at least MIN_BISECTION_TOL
        competitors (sequence): Competitor curve names to tabulate

    Returns:
        ScanResult: Table plus threshold (None when the margin never changes sign)
    """
    if tol < MIN_BISECTION_TOL:
        raise ParameterError(f"bisection tolerance must be at least {MIN_BISECTION_TOL:.0e}, got {tol}")
    grid = np.asarray(grid, dtype=float)
    if grid.size < 2 or np.any(np.diff(grid) <= 0):
        raise ParameterError("grid must be strictly increasing with at least two points")
    if grid[0] < 0.0 or grid[-1] > 1.0:
        raise ParameterError("grid must lie inside [0, 1]")

    report_at = margin_function(family, bases, spec)
    # coarse table first, then refine inside the first bracket
    reports = [report_at(x) for x in grid]
    statistics = np.array([r.statistic for r in reports])
    bounds = np.array([r.bound for r in reports])
    margins = statistics - bounds

    result = ScanResult(
        parameter=family.noise_parameter_name,
        grid=grid,
        statistics=statistics,
        bounds=bounds,
        margins=margins,
        competitors={name: np.array([competitor_curves(name, x) for x in grid]) for name in competitors},
        competitor_roots={name: competitor_root(name) for name in competitors},
    )

    i = locate_sign_change(margins)
    if i is None:
        logging.warning(f"{spec.criterion}: margin does not change sign on "
                        f"[{grid[0]:g}, {grid[-1]:g}]; threshold absent")
        return result

    # margin vanishes exactly at the last grid point
    if i == grid.size - 1:
        result.threshold, result.achieved_tol = float(grid[i]), 0.0
    else:
        result.threshold, result.achieved_tol = find_root(
            lambda x: report_at(x).margin, grid[i], grid[i + 1], tol
        )
    # entanglement sits on the side where the margin is positive
    result.detected_side = "below" if margins[0] > 0 or (margins[0] == 0 and margins[-1] < 0) else "above"
    logging.info(f"{spec.criterion}: threshold {result.threshold:.6f} "
                 f"(detected {result.detected_side}, tol {result.achieved_tol:.0e})")
    return result
