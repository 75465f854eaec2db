"""Value function, undominated actions and the decision-region partition.

V(x) = max_a E_x u(a, .) is piecewise affine; projecting its pieces onto the
simplex gives one polytope per undominated action.  A prior strictly inside
its polytope carries a positive "flat threshold": every distribution over
posteriors supported on that polytope leaves the decision value unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import AffineValueError, BoundaryPriorError, UnsupportedError
from .lp import LinearProgram, solve_lp
from .model import FEAS_TOL, DecisionProblem, InformationMeasure, check_belief

MAX_VERTEX_STATES = 4
STRICT_TOL = 1e-9
DEDUP_TOL = 1e-8


def value_function(problem: DecisionProblem, x, tol: float = FEAS_TOL):
    """Return ``(V(x), argmax)`` where argmax holds every action within ``tol`` of the max."""
    x = check_belief(x, tol=1e-9)
    if x.size != problem.n_states:
        raise ValueError(f"belief has {x.size} states, problem has {problem.n_states}")
    payoffs = problem.expected_payoffs(x)
    best = float(payoffs.max())
    return best, tuple(int(a) for a in np.flatnonzero(payoffs >= best - tol))


def values(problem: DecisionProblem, points) -> np.ndarray:
    """V at each row of ``points`` (no validation; hot path for grids)."""
    return problem.expected_payoffs(points).max(axis=1)


def _distinct_actions(problem: DecisionProblem) -> list:
    # identical payoff rows are never strictly optimal; keep the first copy
    keep = []
    for a in range(problem.n_actions):
        if not any(np.array_equal(problem.utility[a], problem.utility[b]) for b in keep):
            keep.append(a)
    return keep


def _strict_margin(problem, action, rivals, floor_states=False):
    """max delta s.t. E_x(u_action - u_j) >= delta for j in rivals, x in the simplex.

    With ``floor_states`` also x(s) >= delta, giving a full-support interior point.
    Returns (delta, x).  delta is shifted by +bound so the LP variable stays >= 0.
    """
    u = problem.utility
    n = problem.n_states
    rows = [u[j] - u[action] for j in rivals]
    if floor_states:
        rows.extend(-np.eye(n))
    bound = 1.0 + float(np.abs(u).max()) * 2
    # variables: x (n), d = delta + bound >= 0
    A_ub = np.hstack([np.asarray(rows), np.ones((len(rows), 1))])
    b_ub = np.full(len(rows), bound)
    A_eq = np.append(np.ones(n), 0.0)[None, :]
    objective = np.append(np.zeros(n), 1.0)
    # cap d so the LP stays bounded when there are no rivals
    A_ub = np.vstack([A_ub, np.append(np.zeros(n), 1.0)])
    b_ub = np.append(b_ub, 2 * bound)
    sol = solve_lp(LinearProgram(objective, A_eq, [1.0], A_ub, b_ub, sense="max"))
    return sol.objective_value - bound, sol.values[:n]


def undominated_actions(problem: DecisionProblem) -> tuple:
    """Actions strictly optimal at some belief (delta-LP optimum above 1e-9).

    The result may hold fewer than two actions; :func:`require_nonaffine`
    turns that into an error.
    """
    candidates = _distinct_actions(problem)
    out = []
    for a in candidates:
        rivals = [j for j in candidates if j != a]
        delta, _ = _strict_margin(problem, a, rivals)
        if delta > STRICT_TOL:
            out.append(a)
    return tuple(out)


def require_nonaffine(problem: DecisionProblem) -> tuple:
    acts = undominated_actions(problem)
    if len(acts) < 2:
        raise AffineValueError(
            "value function is affine: fewer than two undominated actions "
            f"(found {list(acts)})"
        )
    return acts


@dataclass(frozen=True, eq=False)
class DecisionRegion:
    """Beliefs where ``action`` is optimal: ``normal @ x >= offset`` for each halfspace."""

    action: int
    halfspaces: tuple
    vertices: np.ndarray | None
    center: np.ndarray

    def contains(self, x, tol: float = FEAS_TOL) -> bool:
        return all(float(nrm @ x) >= off - tol for nrm, off in self.halfspaces)

    def slacks(self, x) -> np.ndarray:
        return np.array([float(nrm @ x) - off for nrm, off in self.halfspaces])


def _enumerate_vertices(halfspaces, n):
    """Vertices of {x in simplex : normal @ x >= offset} by exhaustive active-set solving."""
    cons = [(np.asarray(nrm, float), float(off)) for nrm, off in halfspaces]
    cons += [(e, 0.0) for e in np.eye(n)]
    found = []
    for subset in combinations(range(len(cons)), n - 1):
        M = np.vstack([np.ones(n)] + [cons[i][0] for i in subset])
        rhs = np.array([1.0] + [cons[i][1] for i in subset])
        if abs(np.linalg.det(M)) < 1e-12:
            continue
        x = np.linalg.solve(M, rhs)
        if any(float(nrm @ x) < off - FEAS_TOL for nrm, off in cons):
            continue
        x = np.maximum(x, 0.0)
        x /= x.sum()
        if not any(np.max(np.abs(x - y)) <= DEDUP_TOL for y in found):
            found.append(x)
    found.sort(key=tuple)
    return np.array(found)


def decision_regions(problem: DecisionProblem) -> list:
    """One region per undominated action, ordered by action index.

    Vertices are enumerated for at most four states; beyond that regions are
    returned in halfspace form with ``vertices=None``.
    """
    acts = require_nonaffine(problem)
    u = problem.utility
    n = problem.n_states
    regions = []
    for a in acts:
        halfspaces = tuple((u[a] - u[j], 0.0) for j in acts if j != a)
        verts = _enumerate_vertices(halfspaces, n) if n <= MAX_VERTEX_STATES else None
        _, center = _strict_margin(problem, a, [j for j in acts if j != a], floor_states=True)
        regions.append(DecisionRegion(a, halfspaces, verts, center))
    return regions


@dataclass(frozen=True)
class Location:
    index: int
    action: int
    boundary: bool


def locate_region(regions, x, tol: float = FEAS_TOL) -> Location:
    """First region containing ``x``; ``boundary`` when some region halfspace is tight."""
    x = np.asarray(x, dtype=float)
    for i, region in enumerate(regions):
        s = region.slacks(x)
        if np.all(s >= -tol):
            return Location(i, region.action, bool(np.any(np.abs(s) <= tol)))
    # regions cover the simplex; only reachable through numerical noise
    worst = [region.slacks(x).min() for region in regions]
    i = int(np.argmax(worst))
    return Location(i, regions[i].action, True)


def max_amount_on(points, measure: InformationMeasure, mu) -> float:
    """Largest inner expected divergence of a distribution on ``points`` with mean ``mu``."""
    pts = np.asarray(points, dtype=float)
    n = pts.shape[1]
    A_eq = np.vstack([pts[:, : n - 1].T, np.ones(len(pts))])
    b_eq = np.append(np.asarray(mu, float)[: n - 1], 1.0)
    sol = solve_lp(LinearProgram(measure.cost(pts), A_eq, b_eq, sense="max"))
    if not sol.optimal:
        raise BoundaryPriorError("the prior is not in the convex hull of the given points")
    return sol.objective_value


def flat_threshold(problem: DecisionProblem, measure: InformationMeasure, regions=None) -> float:
    """Largest amount carried by a Bayes-plausible distribution on the prior's region.

    Below this amount the inefficient value of information equals V(prior).
    """
    mu = problem.prior
    if np.max(np.abs(measure.reference - mu)) > 1e-12:
        raise ValueError("measure must be anchored at the problem prior")
    regions = decision_regions(problem) if regions is None else regions
    loc = locate_region(regions, mu)
    if loc.boundary:
        raise BoundaryPriorError(
            "prior lies on a decision-region boundary; no positive flat threshold exists"
        )
    region = regions[loc.index]
    if region.vertices is None:
        raise UnsupportedError(f"vertex enumeration supports at most {MAX_VERTEX_STATES} states")
    return measure.phi_of(max_amount_on(region.vertices, measure, mu))


def interior_prior(regions, x, shrink: float = 0.5):
    """Pull ``x`` toward its region's center until it is off every boundary."""
    x = np.asarray(x, dtype=float)
    loc = locate_region(regions, x)
    while loc.boundary:
        x = (1 - shrink) * x + shrink * regions[loc.index].center
        loc = locate_region(regions, x)
    return x
