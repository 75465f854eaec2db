"""Max-min value of information for an ambiguity-averse decision maker.

The decision maker commits to a signal-contingent strategy and is evaluated
at the worst prior in a polytope M (given by its vertices).  The amount of
information in a channel is measured at a fixed reference prior.  The outer
program, the best max-min value over channels within a budget, is
nonconvex; it is attacked by seeded multistart pattern search.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .efficient import CurvePoint, _check_etas, check_concavity
from .errors import BudgetCapError, ProblemError
from .lp import LinearProgram, solve_lp
from .model import ARITH_TOL, DecisionProblem, InformationMeasure, PosteriorDistribution, check_belief

SIGNAL_DROP = 1e-15
MAXMIN_BINDING_TOL = 1e-3
MAXMIN_CONCAVITY_SLACK = 5e-3
CAP_TOL = 1e-6


def _stochastic(matrix, name, tol=ARITH_TOL):
    arr = np.atleast_2d(np.asarray(matrix, dtype=float))
    if arr.ndim != 2 or arr.shape[1] < 1:
        raise ProblemError(f"{name} must be a matrix with at least one column")
    if not np.all(np.isfinite(arr)) or np.any(arr < 0):
        raise ProblemError(f"{name} must have nonnegative finite entries")
    if np.any(np.abs(arr.sum(axis=1) - 1.0) > tol):
        raise ProblemError(f"every row of {name} must sum to 1")
    arr = arr.copy()
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Channel:
    """Experiment: ``matrix[state, signal]`` = probability of the signal in that state."""

    matrix: np.ndarray
    signal_labels: tuple = ()

    def __post_init__(self):
        arr = _stochastic(self.matrix, "channel")
        labels = tuple(self.signal_labels) or tuple(f"y{i + 1}" for i in range(arr.shape[1]))
        if len(labels) != arr.shape[1]:
            raise ProblemError("signal label count does not match channel columns")
        object.__setattr__(self, "matrix", arr)
        object.__setattr__(self, "signal_labels", labels)

    @property
    def n_states(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_signals(self) -> int:
        return self.matrix.shape[1]

    @classmethod
    def uninformative(cls, n_states: int, n_signals: int = 1) -> "Channel":
        return cls(np.full((n_states, n_signals), 1.0 / n_signals))

    @classmethod
    def fully_informative(cls, n_states: int) -> "Channel":
        return cls(np.eye(n_states))


@dataclass(frozen=True, eq=False)
class PriorSet:
    """Convex hull of ``vertices`` is the set M; ``reference`` anchors the cost of channels."""

    vertices: np.ndarray
    reference: np.ndarray

    def __post_init__(self):
        verts = np.atleast_2d(np.asarray(self.vertices, dtype=float))
        for v in verts:
            check_belief(v, name="prior-set vertex", tol=1e-9)
        ref = check_belief(self.reference, strict=True, name="reference prior", tol=1e-9)
        if ref.size != verts.shape[1]:
            raise ProblemError("reference prior and prior-set vertices differ in dimension")
        verts = verts.copy()
        verts.setflags(write=False)
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "reference", ref)

    def full_dimensional(self) -> bool:
        v = self.vertices
        return len(v) >= v.shape[1] and np.linalg.matrix_rank(v[1:] - v[0]) == v.shape[1] - 1


@dataclass(frozen=True, eq=False)
class Strategy:
    """``matrix[signal, action]`` = probability of the action after the signal."""

    matrix: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "matrix", _stochastic(self.matrix, "strategy", tol=1e-9))


def bayes_map(mu, pi: Channel) -> PosteriorDistribution:
    """Distribution over posteriors induced by prior ``mu`` and channel ``pi``."""
    mu = check_belief(mu, name="prior")
    if mu.size != pi.n_states:
        raise ProblemError("prior and channel disagree on the number of states")
    joint = mu[:, None] * pi.matrix
    p = joint.sum(axis=0)
    keep = np.flatnonzero(p > SIGNAL_DROP)
    post = (joint[:, keep] / p[keep]).T
    return PosteriorDistribution(post, p[keep] / p[keep].sum())


def channel_inner(pi: Channel, measure: InformationMeasure) -> float:
    """Expected divergence (before phi) of the posteriors the channel induces at the reference."""
    return measure.inner(bayes_map(measure.reference, pi))


def channel_cost(pi: Channel, priors: PriorSet, measure: InformationMeasure) -> float:
    if np.max(np.abs(measure.reference - priors.reference)) > 1e-12:
        raise ValueError("measure must be anchored at the prior set's reference prior")
    return measure.amount(bayes_map(priors.reference, pi))


@dataclass(frozen=True, eq=False)
class MaxminResult:
    value: float
    sigma: Strategy
    worst_vertex: int

    @property
    def T(self) -> float:
        return self.value


def _maxmin_lp(w, backend=None):
    """w[k, s, a] = sum_t mu_k(t) pi(s|t) u(a, t), with u shifted to be >= 0."""
    K, S, A = w.shape
    nv = S * A
    # nonnegative payoffs keep the value variable t >= 0, so no sign split
    wf = w.reshape(K, nv)
    A_ub = np.hstack([-wf, np.ones((K, 1))])
    A_eq = np.zeros((S, nv + 1))
    for s in range(S):
        A_eq[s, s * A:(s + 1) * A] = 1.0
    objective = np.zeros(nv + 1)
    objective[-1] = 1.0
    return solve_lp(LinearProgram(objective, A_eq, np.ones(S), A_ub, np.zeros(K), sense="max"), backend)


def maxmin_value(problem: DecisionProblem, priors: PriorSet, pi: Channel, backend=None) -> MaxminResult:
    """T(pi) = max over strategies of the minimum over M's vertices of expected utility.

    The inner minimum over the polytope is attained at a vertex because the
    payoff is linear in the prior.
    """
    if pi.n_states != problem.n_states or priors.vertices.shape[1] != problem.n_states:
        raise ProblemError("problem, prior set and channel disagree on the number of states")
    umin = float(problem.utility.min())
    shifted = problem.utility - umin
    w = np.einsum("kt,ts,at->ksa", priors.vertices, pi.matrix, shifted)
    sol = _maxmin_lp(w, backend)
    if not sol.optimal:
        raise RuntimeError(f"max-min program is {sol.status}")
    K, S, A = w.shape
    sigma = sol.values[: S * A].reshape(S, A)
    sigma = np.maximum(sigma, 0.0)
    sigma /= sigma.sum(axis=1, keepdims=True)
    payoffs = np.einsum("ksa,sa->k", w, sigma)
    worst = int(np.flatnonzero(payoffs <= payoffs.min() + 1e-9)[0])
    return MaxminResult(sol.objective_value + umin, Strategy(sigma), worst)


def mix_channels(pi1: Channel, pi2: Channel, lam: float) -> Channel:
    """Run ``pi1`` with probability lam and ``pi2`` otherwise, revealing which one ran.

    The alphabets are kept disjoint, so the induced distribution over
    posteriors is the lam-mixture of the two distributions.
    """
    if not 0.0 <= lam <= 1.0:
        raise ValueError("mixing weight must lie in [0, 1]")
    if pi1.n_states != pi2.n_states:
        raise ProblemError("channels must share the state space")
    mat = np.hstack([lam * pi1.matrix, (1.0 - lam) * pi2.matrix])
    labels = tuple(f"1:{s}" for s in pi1.signal_labels) + tuple(f"2:{s}" for s in pi2.signal_labels)
    return Channel(mat, labels)


@dataclass(frozen=True)
class SearchConfig:
    signal_count: int | None = None
    starts: int = 32
    seed: int = 0
    initial_step: float = 0.25
    min_step: float = 1e-4
    max_evals: int = 4000


class _Objective:
    """Budget projection and T evaluation for a fixed problem, prior set and budget."""

    def __init__(self, problem, priors, measure, eta, backend=None):
        self.problem = problem
        self.priors = priors
        self.measure = measure
        self.ref = priors.reference
        self.budget = measure.phi_inverse(eta)
        self.umin = float(problem.utility.min())
        self.shifted = problem.utility - self.umin
        self.backend = backend
        self.evals = 0

    def inner_along(self, pi):
        """Return f(lam) = inner cost of lam*pi + (1-lam)*uninformative."""
        joint = self.ref[:, None] * pi
        r = joint.sum(axis=0)
        keep = r > SIGNAL_DROP
        post = (joint[:, keep] / r[keep]).T
        r = r[keep]
        ref = self.ref
        cost = self.measure.cost

        def f(lam):
            return float(r @ np.atleast_1d(cost(lam * post + (1.0 - lam) * ref)))

        return f

    def project(self, pi):
        """Shrink ``pi`` toward the signal-marginal-preserving uninformative channel until feasible.

        Mixing with the uninformative channel is a garbling, so the cost is
        monotone along the segment and the boundary point is unique.
        """
        f = self.inner_along(pi)
        if f(1.0) <= self.budget:
            return pi
        r = self.ref @ pi
        noise = np.broadcast_to(r, pi.shape)
        if self.budget <= 0.0:
            return np.array(noise)
        lam = brentq(lambda t: f(t) - self.budget, 0.0, 1.0, xtol=1e-15, rtol=4 * np.finfo(float).eps)
        while f(lam) > self.budget and lam > 0.0:
            lam = np.nextafter(lam, 0.0)
        out = lam * pi + (1.0 - lam) * noise
        return out / out.sum(axis=1, keepdims=True)

    def value(self, pi) -> float:
        self.evals += 1
        w = np.einsum("kt,ts,at->ksa", self.priors.vertices, pi, self.shifted)
        sol = _maxmin_lp(w, self.backend)
        return sol.objective_value + self.umin

    def cost(self, pi) -> float:
        return self.measure.phi_of(max(self.inner_along(pi)(1.0), 0.0))


def _pattern_search(obj: _Objective, pi, config: SearchConfig):
    pi = obj.project(pi)
    best = obj.value(pi)
    n, S = pi.shape
    step = config.initial_step
    while step >= config.min_step and obj.evals < config.max_evals:
        cand_best, cand_pi = best, None
        for t in range(n):
            for s in range(S):
                d = min(step, pi[t, s])
                if d <= 0.0:
                    continue
                for s2 in range(S):
                    if s2 == s:
                        continue
                    trial = pi.copy()
                    trial[t, s] -= d
                    trial[t, s2] += d
                    trial = obj.project(trial)
                    v = obj.value(trial)
                    if v > cand_best + 1e-12:
                        cand_best, cand_pi = v, trial
        if cand_pi is None:
            step *= 0.5
        else:
            best, pi = cand_best, cand_pi
    return best, pi


@dataclass(frozen=True, eq=False)
class MaxminVoiResult:
    value: float
    channel: Channel
    realized_cost: float
    start: int
    evaluations: int

    @property
    def W_bar(self) -> float:
        return self.value


def maxmin_voi(problem: DecisionProblem, priors: PriorSet, measure: InformationMeasure, eta: float,
               config: SearchConfig | None = None, backend=None) -> MaxminVoiResult:
    """Best max-min value over channels whose amount is at most ``eta`` (heuristic search)."""
    config = config or SearchConfig()
    if eta < 0:
        raise ValueError("information amount must be nonnegative")
    if np.max(np.abs(measure.reference - priors.reference)) > 1e-12:
        raise ValueError("measure must be anchored at the prior set's reference prior")
    n = problem.n_states
    S = config.signal_count or problem.n_actions
    obj = _Objective(problem, priors, measure, eta, backend)
    seeds = np.random.SeedSequence(config.seed).spawn(config.starts)
    best = None
    total = 0
    for i, ss in enumerate(seeds):
        rng = np.random.default_rng(ss)
        start = rng.dirichlet(np.ones(S), size=n)
        obj.evals = 0
        val, pi = _pattern_search(obj, start, config)
        total += obj.evals
        # strict comparison keeps the lowest start index on ties
        if best is None or val > best[0]:
            best = (val, pi, i)
    val, pi, i = best
    t_full = maxmin_value(problem, priors, Channel.fully_informative(n), backend).value
    if val >= t_full - CAP_TOL:
        raise BudgetCapError(
            f"eta={eta:g} reaches the full-information max-min value {t_full:.6g}; budgets must stay "
            "below the smallest amount of any channel attaining it"
        )
    channel = Channel(pi)
    return MaxminVoiResult(val, channel, channel_cost(channel, priors, measure), i, total)


@dataclass(frozen=True)
class MaxminCurveReport:
    binding_residuals: tuple
    binds: bool
    concavity: object

    @property
    def ok(self) -> bool:
        return self.binds and self.concavity.is_concave


def maxmin_curve(problem, priors, measure, eta_list, config: SearchConfig | None = None, *,
                 binding_tol: float = MAXMIN_BINDING_TOL, slack: float = MAXMIN_CONCAVITY_SLACK,
                 certify: bool = False, backend=None):
    """Max-min value at each eta plus binding and midpoint-concavity diagnostics.

    With ``certify`` (two states, two signals) each point is compared with the
    exhaustive channel-grid oracle and tagged ``"oracle"`` when within 5e-3,
    ``"failed"`` otherwise; uncertified points are tagged ``"heuristic"``.
    """
    etas = _check_etas(eta_list)
    config = config or SearchConfig()
    oracle_table = None
    if certify:
        from .oracle import MaxminOracleTable

        oracle_table = MaxminOracleTable(problem, priors, measure)
    points = []
    for eta in etas:
        res = maxmin_voi(problem, priors, measure, eta, config, backend)
        tag = "heuristic"
        if oracle_table is not None:
            ref = oracle_table.best(eta)
            tag = "oracle" if res.value >= ref - 5e-3 else "failed"
        points.append(CurvePoint(eta, res.value, res.realized_cost, res.channel.n_signals,
                                 None, res.channel, tag))
    residuals = tuple(abs(pt.realized_amount - pt.eta) for pt in points if pt.eta > 0)
    conc = check_concavity(points, slack) if len(points) >= 3 else None
    binds = all(r <= binding_tol for r in residuals)
    return points, MaxminCurveReport(residuals, binds, conc)
