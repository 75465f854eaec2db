"""Compare the compiled simplex kernel with the pure-Python fallback.

    python3 benchmarks/bench_lp.py [--repeat 3]

Each case solves the same LPs on both backends, checks the objectives agree
bitwise and reports the best wall time of ``--repeat`` runs.
"""

import argparse
import time

import numpy as np

from infovalue.efficient import efficient_value, min_full_info_cost
from infovalue.grid import make_grid
from infovalue.lp import available_backends
from infovalue.maxmin import Channel, PriorSet, maxmin_value
from infovalue.model import InformationMeasure, make_problem


def grid_case(n, k, seed):
    rng = np.random.default_rng(seed)
    # identity plus a safe action, jittered so no two actions tie
    utility = np.vstack([np.eye(n), 0.6 * np.ones(n)]) + 0.1 * rng.uniform(size=(n + 1, n))
    problem = make_problem(utility, np.ones(n) / n)
    measure = InformationMeasure("quadratic", problem.prior)
    grid = make_grid(n, k, problem.prior)
    etas = np.linspace(0.05, 0.95, 10) * min_full_info_cost(problem, measure, grid)

    def run(backend):
        return [efficient_value(problem, measure, eta, grid, backend).value for eta in etas]
    return f"10 grid LPs n={n} k={k} ({len(grid.points)} cols)", run


def maxmin_case(count, seed):
    rng = np.random.default_rng(seed)
    problem = make_problem([[1, 0], [0, 1], [0.6, 0.6]], [0.5, 0.5])
    priors = PriorSet([[0.3, 0.7], [0.7, 0.3]], [0.5, 0.5])
    channels = [Channel(rng.dirichlet(np.ones(3), size=2)) for _ in range(count)]

    def run(backend):
        return [maxmin_value(problem, priors, pi, backend).value for pi in channels]
    return f"{count} max-min LPs (3 signals)", run


def best_time(fn, repeat):
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args(argv)
    backends = available_backends()
    if "compiled" not in backends:
        print("compiled kernel not built; only the python backend is available")
    cases = [grid_case(2, 2000, 0), grid_case(3, 120, 1), grid_case(4, 40, 2), grid_case(4, 80, 4), maxmin_case(2000, 3)]
    print(f"{'case':<40}" + "".join(f"{b:>12}" for b in backends) + f"{'speedup':>10}")
    for name, fn in cases:
        times, outs = [], []
        for b in backends:
            t, out = best_time(lambda: fn(b), args.repeat)
            times.append(t)
            outs.append(out)
        assert all(o == outs[0] for o in outs), f"backends disagree on {name}"
        speed = f"{times[0] / times[-1]:>9.1f}x" if len(times) > 1 else ""
        print(f"{name:<40}" + "".join(f"{t:>11.3f}s" for t in times) + speed)


if __name__ == "__main__":
    main()
