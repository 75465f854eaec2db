"""Property suite run by ``infovalue verify``.

Each check produces one report line with its measured margin.  The report
holds no timings or paths beyond what was passed in, so identical inputs and
seeds give byte-identical text.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import efficient as eff
from . import inefficient as ineff
from .errors import BoundaryPriorError, InfeasibleBudgetError, UnsupportedError
from .geometry import decision_regions, flat_threshold, locate_region, undominated_actions
from .grid import default_grid, make_grid
from .maxmin import MAXMIN_BINDING_TOL, MAXMIN_CONCAVITY_SLACK, SearchConfig, maxmin_curve
from .oracle import oracle_efficient, oracle_inefficient

SLOPE_FLOOR = 1e-3
ORACLE_TOL = 1e-8
ORACLE_GRID = {2: 60, 3: 8}


@dataclass(frozen=True)
class Check:
    name: str
    status: str  # PASS, FAIL or SKIP
    detail: str


@dataclass
class VerificationReport:
    header: list
    checks: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def add(self, name, passed, detail):
        self.checks.append(Check(name, "PASS" if passed else "FAIL", detail))

    def skip(self, name, detail):
        self.checks.append(Check(name, "SKIP", detail))

    @property
    def passed(self) -> bool:
        return all(c.status != "FAIL" for c in self.checks)

    def text(self) -> str:
        lines = list(self.header) + [""]
        width = max(len(c.name) for c in self.checks) if self.checks else 0
        for c in self.checks:
            lines.append(f"{c.status:4s}  {c.name:<{width}}  {c.detail}")
        counts = {s: sum(c.status == s for c in self.checks) for s in ("PASS", "FAIL", "SKIP")}
        lines.append("")
        lines.extend(f"note: {n}" for n in self.notes)
        lines.append(f"result: {'PASS' if self.passed else 'FAIL'} "
                     f"({counts['PASS']} passed, {counts['FAIL']} failed, {counts['SKIP']} skipped)")
        return "\n".join(lines) + "\n"


def _e(x) -> str:
    return f"{x:.3e}"


def run_verification(spec, *, grid_k: int | None = None, slack: float = eff.CONCAVITY_SLACK,
                     etas=None, seed: int | None = None, starts: int = 16,
                     maxmin_etas: int = 6) -> VerificationReport:
    problem, measure = spec.problem, spec.measure
    if spec.prior_set is not None:
        measure = measure.with_reference(problem.prior)
    seed = spec.seed if seed is None else seed
    grid = default_grid(problem, grid_k)
    rep = VerificationReport([
        "infovalue verification report",
        f"problem: {spec.source}",
        f"states: {problem.n_states}  actions: {problem.n_actions}  divergence: {measure.divergence}  "
        f"phi: {measure.phi}{'' if measure.phi == 'identity' else f'(p={measure.p:g})'}",
        f"grid: k={grid.resolution} ({len(grid)} points)  slack: {slack:g}  seed: {seed}",
    ])

    acts = undominated_actions(problem)
    rep.add("nonaffine-value", len(acts) >= 2,
            f"undominated actions: {[problem.action_labels[a] for a in acts]}")
    if len(acts) < 2:
        return rep

    cap = eff.min_full_info_cost(problem, measure, grid)
    rep.add("eta-cap", cap > 0, f"min full-information amount={_e(cap)}")
    eta_list = list(etas) if etas is not None else list(np.linspace(0.0, 0.8 * cap, 9))
    curve = eff.efficient_curve(problem, measure, eta_list, grid, eta_bar=cap)

    residuals = [eff.check_binding(pt).residual for pt in curve if 0 < pt.eta < cap]
    worst = max(residuals) if residuals else 0.0
    tol_ok = all(eff.check_binding(pt, eta_bar_limit=cap) for pt in curve if 0 < pt.eta < cap)
    rep.add("efficient-binding", tol_ok, f"max |D(F*)-eta|={_e(worst)} (tol 1e-6*max(1,eta))")

    vals = np.array([pt.value for pt in curve])
    rep.add("efficient-monotone", bool(np.all(np.diff(vals) >= -1e-12)),
            f"min step={_e(np.diff(vals).min() if vals.size > 1 else 0.0)}")
    support = max(pt.support_size for pt in curve)
    rep.add("support-bound", support <= problem.n_states + 1,
            f"max support={support} (bound {problem.n_states + 1})")

    if len(curve) >= 3:
        conc = eff.check_concavity(curve, slack)
        rep.add("efficient-concavity", conc.is_concave,
                f"worst violation={_e(conc.worst_violation)} min margin={_e(conc.strictness_margin)}")
        if len(acts) == 2:
            rep.add("efficient-strictness", conc.max_margin > slack,
                    f"max margin={_e(conc.max_margin)} (> {slack:g})")
        else:
            rep.skip("efficient-strictness", f"{len(acts)} undominated actions")
    else:
        rep.skip("efficient-concavity", "fewer than 3 curve points")

    if sum(pt.eta > 0 for pt in curve) >= 2 and any(pt.eta == 0 for pt in curve):
        slope = eff.marginal_value_at_zero(curve)
        rep.add("slope-at-zero", slope.slope > SLOPE_FLOOR,
                f"forward difference={_e(slope.slope)}{' (growing toward 0)' if slope.infinite else ''}")

    _flatness(rep, problem, measure, grid_k)
    _oracle(rep, problem, measure)
    if spec.prior_set is not None:
        _maxmin(rep, spec, seed, starts, maxmin_etas)
    return rep


def _flatness(rep, problem, measure, grid_k):
    try:
        regions = decision_regions(problem)
        eta_hat = flat_threshold(problem, measure, regions)
    except BoundaryPriorError:
        rep.skip("inefficient-flat", "prior on a decision-region boundary (no flat threshold)")
        return
    except UnsupportedError as exc:
        rep.skip("inefficient-flat", str(exc))
        return
    extra = np.vstack([r.vertices for r in regions])
    grid = default_grid(problem, grid_k, extra_points=extra)
    etas = list(np.linspace(0.0, eta_hat, 6))
    curve = ineff.inefficient_curve(problem, measure, etas, grid)
    flat = ineff.check_flat_at_zero(curve, eta_hat)
    loc = locate_region(regions, problem.prior)
    rep.add("inefficient-flat", bool(flat),
            f"eta_hat={_e(eta_hat)} (region {problem.action_labels[loc.action]}) "
            f"max |U-U(0)|={_e(flat.max_deviation)} on {flat.n_checked} etas")
    rep.notes.append("flatness is checked at this prior only; density over priors is not machine-checked")
    try:
        rise = ineff.inefficient_value(problem, measure, 1.05 * eta_hat, grid).value - curve[0].value
    except InfeasibleBudgetError:
        rep.add("inefficient-rise", False, "1.05*eta_hat exceeds the largest grid amount")
        return
    rep.add("inefficient-rise", rise > 1e-6, f"U(1.05*eta_hat)-U(0)={_e(rise)}")


def _oracle(rep, problem, measure):
    n = problem.n_states
    if n not in ORACLE_GRID:
        rep.skip("oracle-efficient", "oracle limited to 2-3 states")
        rep.skip("oracle-inefficient", "oracle limited to 2-3 states")
        return
    grid = make_grid(n, ORACLE_GRID[n], problem.prior)
    cap = eff.min_full_info_cost(problem, measure, grid)
    top = ineff.max_grid_amount(problem, measure, grid)
    worst_w = worst_u = 0.0
    for frac in (0.0, 0.3, 0.7):
        eta = frac * cap
        worst_w = max(worst_w, abs(eff.efficient_value(problem, measure, eta, grid).value
                                   - oracle_efficient(problem, measure, eta, grid)))
        eta = frac * top
        worst_u = max(worst_u, abs(ineff.inefficient_value(problem, measure, eta, grid).value
                                   - oracle_inefficient(problem, measure, eta, grid)))
    rep.add("oracle-efficient", worst_w <= ORACLE_TOL,
            f"max |LP-oracle|={_e(worst_w)} on {len(grid)}-point grid")
    rep.add("oracle-inefficient", worst_u <= ORACLE_TOL,
            f"max |LP-oracle|={_e(worst_u)} on {len(grid)}-point grid")


def _maxmin(rep, spec, seed, starts, count):
    from .errors import BudgetCapError
    from .maxmin import Channel, channel_cost

    problem, priors, measure = spec.problem, spec.prior_set, spec.measure
    full = channel_cost(Channel.fully_informative(problem.n_states), priors, measure)
    etas = list(np.linspace(0.0, 0.8 * full, count))
    config = SearchConfig(signal_count=spec.signal_count, starts=starts, seed=seed)
    certify = problem.n_states == 2 and (spec.signal_count or problem.n_actions) == 2
    try:
        points, report = maxmin_curve(problem, priors, measure, etas, config, certify=certify)
    except BudgetCapError as exc:
        rep.add("maxmin-binding", False, f"budget cap reached: {exc}")
        return
    rep.add("maxmin-binding", report.binds,
            f"max |C(pi*)-eta|={_e(max(report.binding_residuals, default=0.0))} (tol {MAXMIN_BINDING_TOL:g})")
    rep.add("maxmin-concavity", report.concavity.is_concave,
            f"worst violation={_e(report.concavity.worst_violation)} (slack {MAXMIN_CONCAVITY_SLACK:g})")
    if certify:
        failed = [pt.eta for pt in points if pt.certified != "oracle"]
        rep.add("maxmin-oracle", not failed,
                f"{len(points) - len(failed)}/{len(points)} points within 5e-3 of the channel-grid oracle")
    else:
        rep.skip("maxmin-oracle", "oracle limited to two states and two signals")
