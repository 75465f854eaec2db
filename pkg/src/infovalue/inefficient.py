"""Inefficient value of information U(eta).

U(eta) is the worst expected decision value among Bayes-plausible
distributions carrying at least eta.  When the prior sits strictly inside a
decision region, U stays at V(prior) up to the region's flat threshold.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .efficient import CurvePoint, _check_anchor, _check_etas, _point, _sweep, solve_grid_program
from .errors import InfeasibleBudgetError
from .grid import PosteriorGrid, default_grid

FLAT_TOL = 1e-7


def inefficient_value(problem, measure, eta: float, grid: PosteriorGrid | None = None,
                      backend=None) -> CurvePoint:
    """U(eta) on ``grid``; raises :class:`InfeasibleBudgetError` past the grid's largest amount."""
    _check_anchor(problem, measure)
    grid = default_grid(problem) if grid is None else grid
    sol, pts, vals = solve_grid_program(problem, measure, eta, grid, "min", backend)
    if sol.status == "infeasible":
        raise InfeasibleBudgetError(
            f"no distribution on the grid carries amount {eta:g}; the largest attainable "
            "amount is that of the vertex-supported distribution"
        )
    if not sol.optimal:
        raise RuntimeError(f"inefficient program is {sol.status} at eta={eta}")
    return _point(sol, measure, eta, pts, vals)


def inefficient_curve(problem, measure, eta_list, grid=None, *, workers: int = 1, backend=None) -> list:
    etas = _check_etas(eta_list)
    grid = default_grid(problem) if grid is None else grid
    return _sweep(lambda e: inefficient_value(problem, measure, e, grid, backend), etas, workers)


def max_grid_amount(problem, measure, grid) -> float:
    """Largest amount any Bayes-plausible distribution on ``grid`` carries."""
    from .geometry import max_amount_on

    return measure.phi_of(max_amount_on(grid.points, measure, problem.prior))


@dataclass(frozen=True)
class FlatnessReport:
    applicable: bool
    flat: bool
    max_deviation: float
    n_checked: int
    reason: str = ""

    def __bool__(self) -> bool:
        return self.applicable and self.flat


def check_flat_at_zero(curve, eta_hat: float | None, tol: float = FLAT_TOL) -> FlatnessReport:
    """Is U constant at U(0) on every sampled eta <= eta_hat?

    ``eta_hat=None`` marks a prior on a region boundary, where no positive
    threshold exists and the check does not apply.
    """
    if eta_hat is None:
        return FlatnessReport(False, False, float("nan"), 0, "prior on a decision-region boundary")
    etas = np.array([pt.eta for pt in curve])
    vals = np.array([pt.value for pt in curve])
    zero = np.flatnonzero(etas == 0.0)
    if zero.size == 0:
        raise ValueError("curve must contain eta = 0")
    inside = etas <= eta_hat
    dev = float(np.max(np.abs(vals[inside] - vals[zero[0]])))
    return FlatnessReport(True, dev <= tol, dev, int(inside.sum()))
