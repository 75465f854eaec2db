"""Acceptance criteria 1-10, each printed as one PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines inline;
they are also collected in the terminal summary.
"""

import time
from pathlib import Path

import numpy as np
import pytest

from _problems import benchmark_priors, closed_form_w, random_problems, symmetric
from infovalue.cli import main as cli_main
from infovalue.efficient import (
    check_binding,
    check_concavity,
    efficient_curve,
    efficient_value,
    marginal_value_at_zero,
    min_full_info_cost,
)
from infovalue.geometry import decision_regions, flat_threshold, interior_prior, undominated_actions
from infovalue.grid import default_grid, make_grid
from infovalue.inefficient import check_flat_at_zero, inefficient_curve, inefficient_value, max_grid_amount
from infovalue.maxmin import (
    Channel,
    PriorSet,
    SearchConfig,
    channel_inner,
    maxmin_curve,
    maxmin_voi,
    mix_channels,
)
from infovalue.model import InformationMeasure, make_problem
from infovalue.oracle import MaxminOracleTable, oracle_efficient, oracle_inefficient

ROOT = Path(__file__).resolve().parents[1]
SYMMETRIC_FILE = ROOT / "problems" / "symmetric2x2.json"

RANDOM_SEED = 20240611
N_RANDOM = 25


@pytest.fixture(scope="module")
def random_curves():
    """25 random problems with W sampled at 0 and 5 equally spaced etas in (0, 0.8 * cap)."""
    out = []
    for problem, measure in random_problems(RANDOM_SEED, N_RANDOM, actions=(2, 3, 4),
                                            divergences=("quadratic", "kl", "entropy_reduction")):
        grid = default_grid(problem)
        cap = min_full_info_cost(problem, measure, grid)
        etas = np.linspace(0.0, 0.8 * cap, 6)
        out.append((problem, measure, cap, efficient_curve(problem, measure, etas, grid, eta_bar=cap)))
    return out


@pytest.fixture(scope="module")
def symmetric_curve():
    problem, measure = symmetric()
    grid = default_grid(problem, 1000)
    etas = np.linspace(0.0, 0.245, 20)
    t0 = time.perf_counter()
    curve = efficient_curve(problem, measure, etas, grid)
    return curve, time.perf_counter() - t0


def test_criterion_01_closed_form(symmetric_curve, acceptance):
    curve, elapsed = symmetric_curve
    etas = np.array([pt.eta for pt in curve])
    err = np.max(np.abs([pt.value for pt in curve] - closed_form_w(etas)))
    ok = len(curve) == 20 and err <= 2e-3 and elapsed < 5.0
    assert acceptance(1, ok, f"max |W - (0.5 + sqrt(eta/2))| = {err:.2e} (tol 2e-3), {elapsed:.2f} s (< 5 s)")


def test_criterion_02_binding(random_curves, acceptance):
    worst, failures, count = 0.0, 0, 0
    for _, _, cap, curve in random_curves:
        for pt in curve[1:]:
            count += 1
            res = abs(pt.realized_amount - pt.eta)
            worst = max(worst, res / max(1.0, pt.eta))
            failures += not check_binding(pt, eta_bar_limit=cap)
    ok = failures == 0 and count == 5 * N_RANDOM
    assert acceptance(2, ok, f"{count} points, max |D(F*) - eta|/max(1, eta) = {worst:.2e} (tol 1e-6), "
                             f"{failures} failures")


def _power2_curve():
    problem, measure = symmetric(phi="power", p=2.0)
    grid = default_grid(problem, 1000)
    return efficient_curve(problem, measure, np.linspace(0.0, 0.245, 10), grid)


def test_criterion_03_concavity(random_curves, symmetric_curve, acceptance):
    curves = [c for *_, c in random_curves] + [symmetric_curve[0]]
    worst = max(check_concavity(c, 1e-4).worst_violation for c in curves)
    all_concave = all(check_concavity(c, 1e-4).is_concave for c in curves)

    two_action = [c for p, _, _, c in random_curves if len(undominated_actions(p)) == 2]
    two_action.append(symmetric_curve[0])
    reports = [check_concavity(c, 1e-4) for c in two_action]
    strict_some = [r.max_margin > 1e-4 for r in reports]
    # reported so a failure shows how far the weakest curve falls short
    weakest = min(reports, key=lambda r: r.max_margin)

    power = check_concavity(_power2_curve(), 1e-4)
    power_all = power.strictness_margin > 1e-4

    ok = all_concave and all(strict_some) and power_all and power.is_concave
    assert acceptance(3, ok, f"{len(curves)} curves concave (worst violation {worst:.2e}, slack 1e-4); "
                             f"{sum(strict_some)}/{len(strict_some)} two-action curves strict on some triple "
                             f"(weakest best margin {weakest.max_margin:.2e}, all margins positive: "
                             f"{all(r.strictness_margin > 0 for r in reports)}); "
                             f"power(2) min margin {power.strictness_margin:.2e} (> 1e-4)")


def test_criterion_04_slope(random_curves, acceptance):
    problem, measure = symmetric()
    grid = default_grid(problem, 1000)
    bench = marginal_value_at_zero(efficient_curve(problem, measure, [0.0, 0.005, 0.01], grid))
    slopes = [marginal_value_at_zero(c).slope for *_, c in random_curves]
    ok = bench.slope >= 0.5 and min(slopes) > 1e-3
    assert acceptance(4, ok, f"benchmark forward difference over [0, 0.005] is {bench.slope:.3f} (>= 0.5); "
                             f"min slope over {len(slopes)} random problems {min(slopes):.3e} (> 1e-3)")


def test_criterion_05_flatness(acceptance):
    rng = np.random.default_rng(5)
    bases = [p for p, _ in random_problems(55, 5, states=(2, 3, 2, 3, 2), actions=(3,))]
    worst_dev, min_rise, failures, draws = 0.0, np.inf, 0, 0
    for base in bases:
        regions = decision_regions(base)
        for _ in range(4):
            prior = interior_prior(regions, rng.dirichlet(np.ones(base.n_states)))
            problem = base.with_prior(prior)
            measure = InformationMeasure("quadratic", problem.prior)
            eta_hat = flat_threshold(problem, measure, regions)
            grid = default_grid(problem, extra_points=np.vstack([r.vertices for r in regions]))
            curve = inefficient_curve(problem, measure, np.linspace(0.0, eta_hat, 6), grid)
            flat = check_flat_at_zero(curve, eta_hat, tol=1e-7)
            rise = inefficient_value(problem, measure, 1.05 * eta_hat, grid).value - curve[0].value
            draws += 1
            worst_dev = max(worst_dev, flat.max_deviation)
            min_rise = min(min_rise, rise)
            failures += not (flat and rise > 1e-6)
    problem, measure = symmetric(prior=(0.25, 0.75))
    bench = flat_threshold(problem, measure)
    ok = failures == 0 and draws == 20 and abs(bench - 0.125) <= 1e-9
    assert acceptance(5, ok, f"{draws} priors: max |U - U(0)| = {worst_dev:.2e} (tol 1e-7), "
                             f"min rise {min_rise:.2e} (> 1e-6); threshold at (0.25, 0.75) = {bench!r}")


def test_criterion_06_oracle(acceptance):
    rng = np.random.default_rng(6)
    problems = random_problems(66, 20, states=(2, 3), actions=(2, 3, 4),
                               divergences=("quadratic", "kl", "entropy_reduction"))
    worst_w = worst_u = 0.0
    for problem, measure in problems:
        k = 60 if problem.n_states == 2 else 8
        grid = make_grid(problem.n_states, k, problem.prior)
        assert len(grid) <= 201
        eta_w = rng.uniform(0.05, 0.95) * min_full_info_cost(problem, measure, grid)
        eta_u = rng.uniform(0.05, 0.95) * max_grid_amount(problem, measure, grid)
        worst_w = max(worst_w, abs(efficient_value(problem, measure, eta_w, grid).value
                                   - oracle_efficient(problem, measure, eta_w, grid)))
        worst_u = max(worst_u, abs(inefficient_value(problem, measure, eta_u, grid).value
                                   - oracle_inefficient(problem, measure, eta_u, grid)))
    ok = worst_w <= 1e-8 and worst_u <= 1e-8
    assert acceptance(6, ok, f"20 instances each: max |LP - oracle| efficient {worst_w:.2e}, "
                             f"inefficient {worst_u:.2e} (tol 1e-8)")


def test_criterion_07_bridge(acceptance):
    problem = make_problem([[1.0, 0.0], [0.2, 0.9]], [0.4, 0.6])
    measure = InformationMeasure("quadratic", problem.prior)
    priors = PriorSet([problem.prior], problem.prior)
    grid = default_grid(problem, 1000)
    cap = min_full_info_cost(problem, measure, grid)
    worst = 0.0
    for eta in np.linspace(0.1, 0.8, 5) * cap:
        w = efficient_value(problem, measure, eta, grid).value
        wbar = maxmin_voi(problem, priors, measure, eta, SearchConfig(seed=7)).value
        worst = max(worst, abs(w - wbar))
    assert acceptance(7, worst <= 5e-3, f"singleton M, 5 etas: max |W_bar - W| = {worst:.2e} (tol 5e-3)")


def test_criterion_08_maxmin_benchmark(acceptance):
    problem, _ = symmetric()
    priors = benchmark_priors()
    measure = InformationMeasure("quadratic", priors.reference)
    etas = np.linspace(0.0, 0.4, 10)
    t0 = time.perf_counter()
    points, report = maxmin_curve(problem, priors, measure, etas, SearchConfig(seed=0))
    table = MaxminOracleTable(problem, priors, measure, step=0.005)
    elapsed = time.perf_counter() - t0
    gaps = [abs(pt.value - table.best(pt.eta)) for pt in points]
    ok = report.binds and report.concavity.is_concave and max(gaps) <= 5e-3 and elapsed < 60.0
    assert acceptance(8, ok, f"binding residual {max(report.binding_residuals):.2e} (tol 1e-3), "
                             f"concavity violation {report.concavity.worst_violation:.2e} (slack 5e-3), "
                             f"max |W_bar - oracle| {max(gaps):.2e} (tol 5e-3), {elapsed:.1f} s (< 60 s)")


def test_criterion_09_mixture(acceptance):
    rng = np.random.default_rng(9)
    worst = 0.0
    kinds = ("quadratic", "kl", "entropy_reduction")
    for i in range(100):
        n = int(rng.integers(2, 5))
        ref = rng.dirichlet(np.ones(n))
        measure = InformationMeasure(kinds[i % 3], ref)
        pi1 = Channel(rng.dirichlet(np.ones(int(rng.integers(1, 5))), size=n))
        pi2 = Channel(rng.dirichlet(np.ones(int(rng.integers(1, 5))), size=n))
        lam = float(rng.uniform())
        mixed = channel_inner(mix_channels(pi1, pi2, lam), measure)
        affine = lam * channel_inner(pi1, measure) + (1 - lam) * channel_inner(pi2, measure)
        worst = max(worst, abs(mixed - affine))
    assert acceptance(9, worst <= 1e-12, f"100 channel pairs: max affinity error {worst:.2e} (tol 1e-12)")


def test_criterion_10_determinism(tmp_path, acceptance):
    outs = [tmp_path / "a.txt", tmp_path / "b.txt"]
    codes = [cli_main(["verify", str(SYMMETRIC_FILE), "--seed", "3", "--out", str(o)]) for o in outs]
    same = outs[0].read_bytes() == outs[1].read_bytes()
    ok = same and codes == [0, 0]
    assert acceptance(10, ok, f"two verify runs: exit codes {codes}, reports byte-identical: {same}")
