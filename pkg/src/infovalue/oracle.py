"""Brute-force references for the efficient, inefficient and max-min programs.

Nothing here calls the simplex solver.  The grid programs are solved by
enumerating every basis (square linear systems via ``numpy.linalg``) and the
max-min value of a two-state channel uses the minimax dual

    T(pi) = min over mu in M of  sum_s max_a E_mu[pi(s|.) u(a, .)],

which for two states is a convex piecewise-linear function of mu(state 1)
minimised at an endpoint of M or at a kink.
"""

from __future__ import annotations

from itertools import combinations
from math import comb

import numpy as np

from .errors import UnsupportedError
from .grid import PosteriorGrid

MAX_ORACLE_STATES = 3
MAX_ORACLE_POINTS = 200
MAX_SUBSETS = 3_000_000
_CHUNK = 200_000
_NEG_TOL = 1e-12
_DET_TOL = 1e-12


def _subsets(N, r):
    return np.fromiter((i for s in combinations(range(N), r) for i in s), dtype=np.intp,
                       count=comb(N, r) * r).reshape(-1, r)


def _best_basic(E, e, vals, cost, budget, sense):
    """Optimum of sense(vals @ p) over basic solutions of E p = e, cost-row slack or tight."""
    n, N = E.shape
    pick = np.max if sense == "max" else np.min
    best = []
    # bases containing the cost slack: n grid columns, cost row inactive
    # bases without it: n + 1 grid columns, cost row tight
    for r, tight in ((n, False), (n + 1, True)):
        if N < r:
            continue
        M_full = np.vstack([E, cost]) if tight else E
        rhs = np.append(e, budget) if tight else e
        subs = _subsets(N, r)
        for lo in range(0, len(subs), _CHUNK):
            idx = subs[lo:lo + _CHUNK]
            mats = np.transpose(M_full[:, idx], (1, 0, 2))
            ok = np.abs(np.linalg.det(mats)) > _DET_TOL
            if not ok.any():
                continue
            idx, mats = idx[ok], mats[ok]
            p = np.linalg.solve(mats, np.broadcast_to(rhs, (len(idx), r))[..., None])[..., 0]
            feas = np.all(p >= -_NEG_TOL, axis=1)
            if not tight:
                spent = np.einsum("br,br->b", p, cost[idx])
                feas &= spent <= budget + _NEG_TOL if sense == "max" else spent >= budget - _NEG_TOL
            if feas.any():
                best.append(pick(np.einsum("br,br->b", p[feas], vals[idx[feas]])))
    if not best:
        return None
    return float(pick(best))


def _grid_oracle(problem, measure, eta, grid: PosteriorGrid, sense):
    n = problem.n_states
    N = len(grid)
    if n > MAX_ORACLE_STATES or N > MAX_ORACLE_POINTS + 1:
        raise UnsupportedError(
            f"oracle supports at most {MAX_ORACLE_STATES} states and {MAX_ORACLE_POINTS} grid points"
        )
    if comb(N, n + 1) > MAX_SUBSETS:
        raise UnsupportedError("too many candidate bases for exhaustive enumeration")
    pts = grid.points
    vals = (pts @ problem.utility.T).max(axis=1)
    cost = np.asarray(measure.cost(pts), dtype=float)
    E = np.vstack([pts[:, : n - 1].T, np.ones(N)])
    e = np.append(problem.prior[: n - 1], 1.0)
    return _best_basic(E, e, vals, cost, measure.phi_inverse(eta), sense)


def oracle_efficient(problem, measure, eta: float, grid: PosteriorGrid) -> float:
    """Max of E_F V over Bayes-plausible grid distributions with amount <= eta."""
    return _grid_oracle(problem, measure, eta, grid, "max")


def oracle_inefficient(problem, measure, eta: float, grid: PosteriorGrid) -> float | None:
    """Min of E_F V with amount >= eta; None when no grid distribution is feasible."""
    return _grid_oracle(problem, measure, eta, grid, "min")


def dual_maxmin_two_state(utility, vertices, channels) -> np.ndarray:
    """Max-min value of each two-state channel in ``channels`` (shape G x 2 x S) via the dual."""
    u = np.asarray(utility, dtype=float)
    verts = np.asarray(vertices, dtype=float)
    pis = np.asarray(channels, dtype=float)
    if u.shape[1] != 2 or verts.shape[1] != 2 or pis.shape[1] != 2:
        raise UnsupportedError("the dual oracle handles two states only")
    t_lo, t_hi = verts[:, 0].min(), verts[:, 0].max()
    # line[g, s, a](t) = t * alpha + (1 - t) * beta
    alpha = pis[:, 0, :, None] * u[None, None, :, 0]
    beta = pis[:, 1, :, None] * u[None, None, :, 1]
    G, S, A = alpha.shape
    cands = [np.full(G, t_lo), np.full(G, t_hi)]
    for i, j in combinations(range(A), 2):
        da = alpha[:, :, i] - alpha[:, :, j]
        db = beta[:, :, i] - beta[:, :, j]
        denom = da - db
        with np.errstate(divide="ignore", invalid="ignore"):
            t = np.where(np.abs(denom) > 1e-15, -db / denom, t_lo)
        cands.extend(np.clip(t, t_lo, t_hi).T)
    ts = np.stack(cands, axis=1)  # G x C
    g = (ts[:, :, None, None] * alpha[:, None] + (1 - ts[:, :, None, None]) * beta[:, None]).max(axis=3).sum(axis=2)
    return g.min(axis=1)


class MaxminOracleTable:
    """Exhaustive two-parameter channel grid for two states and two signals.

    Values and costs are computed once; :meth:`best` filters by budget.
    """

    def __init__(self, problem, priors, measure, step: float = 0.01):
        if problem.n_states != 2:
            raise UnsupportedError("the channel-grid oracle handles two states and two signals")
        m = int(round(1.0 / step))
        if abs(m * step - 1.0) > 1e-9:
            raise ValueError("step must divide 1")
        a = np.arange(m + 1) / m
        A, B = np.meshgrid(a, a, indexing="ij")
        A, B = A.ravel(), B.ravel()
        self.channels = np.stack([np.stack([A, 1 - A], axis=1), np.stack([B, 1 - B], axis=1)], axis=1)
        self.values = dual_maxmin_two_state(problem.utility, priors.vertices, self.channels)
        ref = priors.reference
        joint = ref[None, :, None] * self.channels  # G x 2 x 2
        p = joint.sum(axis=1)  # G x S
        with np.errstate(divide="ignore", invalid="ignore"):
            post = np.where(p[:, None, :] > 0, joint / p[:, None, :], ref[None, :, None])
        c = np.asarray(measure.cost(np.transpose(post, (0, 2, 1))))  # G x S
        inner = np.maximum((p * c).sum(axis=1), 0.0)
        self.costs = measure.phi_of(inner)

    def best(self, eta: float) -> float:
        ok = self.costs <= eta + 1e-12
        return float(self.values[ok].max())

    def argbest(self, eta: float) -> np.ndarray:
        ok = np.flatnonzero(self.costs <= eta + 1e-12)
        return self.channels[ok[np.argmax(self.values[ok])]]


def oracle_maxmin(problem, priors, measure, eta: float, step: float = 0.01) -> float:
    """Best max-min value over the two-state, two-signal channel grid with amount <= eta."""
    return MaxminOracleTable(problem, priors, measure, step).best(eta)
