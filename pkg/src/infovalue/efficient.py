"""Efficient value of information W(eta).

W(eta) is the best expected decision value over Bayes-plausible
distributions of posteriors whose amount of information is at most eta.
On a posterior grid this is a linear program in the grid weights: the
budget D(F) <= eta becomes the single row  sum_j p_j c(x_j) <= phi^-1(eta).
"""

from __future__ import annotations

import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import BudgetCapError
from .geometry import require_nonaffine, values
from .grid import PosteriorGrid, default_grid, make_grid  # noqa: F401  (re-export)
from .lp import LinearProgram, solve_lp
from .model import DecisionProblem, InformationMeasure, PosteriorDistribution

CONCAVITY_SLACK = 1e-4


@dataclass(frozen=True, eq=False)
class CurvePoint:
    """One sample of W, U or the max-min value."""

    eta: float
    value: float
    realized_amount: float
    support_size: int
    solution: PosteriorDistribution | None = None
    channel: object = None
    certified: str | None = None


def _check_anchor(problem, measure):
    if measure.reference.size != problem.n_states or np.max(np.abs(measure.reference - problem.prior)) > 1e-12:
        raise ValueError("the information measure must be anchored at the problem prior")


def _column_data(problem, measure, grid):
    pts = grid.points
    return pts, values(problem, pts), np.asarray(measure.cost(pts), dtype=float)


def _mean_rows(pts, mu):
    n = pts.shape[1]
    # the last mean row is implied by the total-mass row
    A = np.vstack([pts[:, : n - 1].T, np.ones(len(pts))])
    b = np.append(np.asarray(mu, dtype=float)[: n - 1], 1.0)
    return A, b


def _point(sol, measure, eta, pts, vals):
    p = sol.values
    keep = np.flatnonzero(p > 0)
    F = PosteriorDistribution(pts[keep], p[keep])
    inner = float(p[keep] @ np.asarray(measure.cost(pts[keep])))
    realized = measure.phi_of(max(inner, 0.0))
    return CurvePoint(float(eta), float(p @ vals), realized, int(keep.size), F)


def solve_grid_program(problem, measure, eta, grid, sense, backend=None):
    """Shared LP for W (sense='max', cost <= budget) and U (sense='min', cost >= budget).

    Returns ``(LpSolution, pts, vals)``.
    """
    pts, vals, cost = _column_data(problem, measure, grid)
    A_eq, b_eq = _mean_rows(pts, problem.prior)
    budget = measure.phi_inverse(eta)
    if sense == "max":
        lp = LinearProgram(vals, A_eq, b_eq, cost[None, :], [budget], sense="max")
    else:
        lp = LinearProgram(vals, A_eq, b_eq, -cost[None, :], [-budget], sense="min")
    return solve_lp(lp, backend), pts, vals


def efficient_value(problem: DecisionProblem, measure: InformationMeasure, eta: float,
                    grid: PosteriorGrid | None = None, backend: str | None = None) -> CurvePoint:
    """W(eta) on ``grid`` (default resolution when omitted)."""
    _check_anchor(problem, measure)
    grid = default_grid(problem) if grid is None else grid
    sol, pts, vals = solve_grid_program(problem, measure, eta, grid, "max", backend)
    if not sol.optimal:  # point mass at the prior is always feasible
        raise RuntimeError(f"efficient program unexpectedly {sol.status} at eta={eta}")
    return _point(sol, measure, eta, pts, vals)


def min_full_info_cost(problem: DecisionProblem, measure: InformationMeasure,
                       grid: PosteriorGrid | None = None, backend: str | None = None) -> float:
    """Smallest amount of any grid distribution attaining the full-information value.

    Budgets must stay at or below this cap.
    """
    _check_anchor(problem, measure)
    require_nonaffine(problem)
    grid = default_grid(problem) if grid is None else grid
    pts, vals, cost = _column_data(problem, measure, grid)
    A_eq, b_eq = _mean_rows(pts, problem.prior)
    A_eq = np.vstack([A_eq, vals])
    b_eq = np.append(b_eq, problem.full_info_value())
    sol = solve_lp(LinearProgram(cost, A_eq, b_eq, sense="min"), backend)
    if not sol.optimal:
        raise RuntimeError(f"full-information cost program is {sol.status}")
    return measure.phi_of(max(sol.objective_value, 0.0))


def _sweep(fn, etas, workers):
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, etas))
    return [fn(eta) for eta in etas]


def _check_etas(eta_list):
    etas = [float(e) for e in eta_list]
    if any(e < 0 for e in etas):
        raise ValueError("information amounts must be nonnegative")
    if any(b < a for a, b in zip(etas, etas[1:])):
        raise ValueError("eta_list must be sorted ascending")
    return etas


def efficient_curve(problem, measure, eta_list, grid=None, *, eta_bar=None,
                    workers: int = 1, backend=None) -> list:
    """W at every eta in ``eta_list``; rejects budgets above the full-information cap."""
    etas = _check_etas(eta_list)
    grid = default_grid(problem) if grid is None else grid
    if eta_bar is None:
        eta_bar = min_full_info_cost(problem, measure, grid, backend)
    too_big = [e for e in etas if e > eta_bar]
    if too_big:
        raise BudgetCapError(
            f"eta={too_big[0]:g} exceeds the cap {eta_bar:.6g}: budgets must stay below the "
            "smallest amount that already yields the full-information value"
        )
    return _sweep(lambda e: efficient_value(problem, measure, e, grid, backend), etas, workers)


@dataclass(frozen=True)
class BindingReport:
    binds: bool | None
    residual: float
    skipped: bool = False

    def __bool__(self) -> bool:
        return bool(self.binds)


def check_binding(point: CurvePoint, tol: float | None = None,
                  eta_bar_limit: float | None = None) -> BindingReport:
    """Does the realized amount equal the budget (|D(F*) - eta| <= tol)?"""
    if eta_bar_limit is not None and point.eta > eta_bar_limit:
        warnings.warn(f"eta={point.eta:g} is above the cap {eta_bar_limit:g}; binding check skipped")
        return BindingReport(None, float("nan"), skipped=True)
    tol = 1e-6 * max(1.0, point.eta) if tol is None else tol
    residual = abs(point.realized_amount - point.eta)
    return BindingReport(residual <= tol, residual)


@dataclass(frozen=True)
class ConcavityReport:
    is_concave: bool
    worst_violation: float
    strictness_margin: float
    margins: tuple

    @property
    def max_margin(self) -> float:
        return max(self.margins) if self.margins else float("nan")


def _curve_arrays(curve):
    if isinstance(curve, tuple) and len(curve) == 2:
        return np.asarray(curve[0], float), np.asarray(curve[1], float)
    return (np.array([pt.eta for pt in curve], dtype=float),
            np.array([pt.value for pt in curve], dtype=float))


def check_concavity(curve, slack: float = CONCAVITY_SLACK) -> ConcavityReport:
    """Midpoint concavity over consecutive triples.

    The margin of a triple is value_mid minus the chord through its ends
    evaluated at eta_mid (the plain average when the etas are equally spaced).
    """
    etas, vals = _curve_arrays(curve)
    if etas.size < 3:
        raise ValueError("concavity needs at least three curve points")
    margins = []
    for i in range(1, etas.size - 1):
        lo, mid, hi = etas[i - 1], etas[i], etas[i + 1]
        w = (mid - lo) / (hi - lo)
        chord = (1 - w) * vals[i - 1] + w * vals[i + 1]
        margins.append(float(vals[i] - chord))
    worst = min(margins)
    return ConcavityReport(worst >= -slack, max(0.0, -worst), worst, tuple(margins))


@dataclass(frozen=True)
class SlopeReport:
    slope: float
    infinite: bool
    quotients: tuple


def marginal_value_at_zero(curve) -> SlopeReport:
    """Forward difference of the curve at its smallest positive eta.

    ``infinite`` flags difference quotients that keep growing as eta shrinks.
    """
    etas, vals = _curve_arrays(curve)
    zero = np.flatnonzero(etas == 0.0)
    if zero.size == 0:
        raise ValueError("curve must contain eta = 0")
    base = vals[zero[0]]
    pos = np.flatnonzero(etas > 0)
    if pos.size < 2:
        raise ValueError("need at least two positive etas")
    pos = pos[np.argsort(etas[pos])]
    q = (vals[pos] - base) / etas[pos]
    growing = bool(q[0] > q[1] * (1 + 1e-9) and np.all(np.diff(q) <= 0))
    return SlopeReport(float(q[0]), growing, tuple(float(v) for v in q))
