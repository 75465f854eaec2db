"""Command-line front end.

    infovalue regions PROBLEM
    infovalue curve PROBLEM --mode efficient|inefficient [--etas 0:0.2:20] [--grid K] [--out F.csv] [--svg F.svg]
    infovalue maxmin-curve PROBLEM [--etas ...] [--seed N] [--starts N] [--out F.csv] [--svg F.svg]
    infovalue verify PROBLEM [--seed N] [--slack S] [--grid K] [--out REPORT]

Exit codes: 0 success, 1 failed verification, 2 malformed problem,
3 budget above the full-information cap, 4 infeasible inefficient budget.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .errors import BudgetCapError, InfeasibleBudgetError, InfoValueError, ProblemError
from .files import curve_csv, load_problem, write_svg

EXIT_VERIFY = 1
EXIT_PROBLEM = 2
EXIT_CAP = 3
EXIT_INFEASIBLE = 4


def parse_etas(text: str) -> list:
    """``start:stop:count`` (linspace) or a comma list; 0 is always included."""
    try:
        if ":" in text:
            start, stop, count = text.split(":")
            etas = list(np.linspace(float(start), float(stop), int(count)))
        else:
            etas = sorted(float(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad eta list {text!r}; use start:stop:count or a,b,c") from None
    if any(e < 0 for e in etas):
        raise argparse.ArgumentTypeError("etas must be nonnegative")
    if not etas or etas[0] != 0.0:
        etas = [0.0] + etas
    return [float(e) for e in etas]


def _nonnegative(text: str) -> float:
    value = float(text)
    if not value >= 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return value


def _emit(text, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_regions(args):
    from .geometry import decision_regions

    spec = load_problem(args.problem)
    problem = spec.problem
    lines = []
    for r in decision_regions(problem):
        lines.append(f"region {problem.action_labels[r.action]} (action {r.action})")
        lines.append("  halfspaces (normal . x >= offset):")
        for normal, offset in r.halfspaces:
            coeffs = " ".join(f"{v:+.6f}" for v in normal)
            lines.append(f"    [{coeffs}] . x >= {offset:g}")
        if r.vertices is None:
            lines.append("  vertices: not enumerated (more than 4 states)")
        else:
            lines.append("  vertices:")
            for v in r.vertices:
                lines.append("    (" + ", ".join(f"{c:.6f}" for c in v) + ")")
    _emit("\n".join(lines) + "\n", None)
    return 0


def cmd_curve(args):
    from . import efficient as eff
    from . import inefficient as ineff
    from .grid import default_grid

    spec = load_problem(args.problem)
    problem, measure = spec.problem, spec.measure.with_reference(spec.problem.prior)
    grid = default_grid(problem, args.grid)
    if args.mode == "efficient":
        cap = eff.min_full_info_cost(problem, measure, grid)
        etas = args.etas or list(np.linspace(0.0, 0.95 * cap, 20))
        points = eff.efficient_curve(problem, measure, etas, grid, eta_bar=cap, workers=args.workers)
    else:
        top = ineff.max_grid_amount(problem, measure, grid)
        etas = args.etas or list(np.linspace(0.0, 0.95 * top, 20))
        points = ineff.inefficient_curve(problem, measure, etas, grid, workers=args.workers)
    _emit(curve_csv(points), args.out)
    if args.svg:
        label = "W (efficient)" if args.mode == "efficient" else "U (inefficient)"
        write_svg(args.svg, [(label, [p.eta for p in points], [p.value for p in points])],
                  title=f"{args.mode} value of information")
    return 0


def cmd_maxmin(args):
    from .maxmin import Channel, SearchConfig, channel_cost, maxmin_curve

    spec = load_problem(args.problem)
    if spec.prior_set is None:
        raise ProblemError('maxmin-curve needs "prior_set_vertices" in the problem file', 1, spec.source)
    problem, priors, measure = spec.problem, spec.prior_set, spec.measure
    full = channel_cost(Channel.fully_informative(problem.n_states), priors, measure)
    etas = args.etas or list(np.linspace(0.0, 0.8 * full, 10))
    seed = spec.seed if args.seed is None else args.seed
    config = SearchConfig(signal_count=spec.signal_count, starts=args.starts, seed=seed)
    certify = problem.n_states == 2 and (spec.signal_count or problem.n_actions) == 2
    points, report = maxmin_curve(problem, priors, measure, etas, config, certify=certify)
    _emit(curve_csv(points, certified=True), args.out)
    if args.svg:
        write_svg(args.svg, [("max-min value", [p.eta for p in points], [p.value for p in points])],
                  title="max-min value of information")
    if not report.ok:
        print(f"warning: binding ok={report.binds}, concavity ok={report.concavity.is_concave}",
              file=sys.stderr)
    return 0


def cmd_verify(args):
    from .verify import run_verification

    spec = load_problem(args.problem)
    report = run_verification(spec, grid_k=args.grid, slack=args.slack, etas=args.etas,
                              seed=args.seed, starts=args.starts)
    _emit(report.text(), args.out)
    return 0 if report.passed else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="infovalue", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("regions", help="print the decision-region partition")
    p.add_argument("problem")
    p.set_defaults(func=cmd_regions)

    p = sub.add_parser("curve", help="efficient or inefficient value-of-information curve as CSV")
    p.add_argument("problem")
    p.add_argument("--mode", choices=("efficient", "inefficient"), default="efficient")
    p.add_argument("--etas", type=parse_etas, default=None, help="start:stop:count or a,b,c")
    p.add_argument("--grid", type=int, default=None, help="lattice resolution k")
    p.add_argument("--out", default=None, help="CSV path (default stdout)")
    p.add_argument("--svg", default=None, help="also write an SVG chart")
    p.add_argument("--workers", type=int, default=1, help="threads for the eta sweep")
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("maxmin-curve", help="max-min value-of-information curve as CSV")
    p.add_argument("problem")
    p.add_argument("--etas", type=parse_etas, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--starts", type=int, default=32, help="multistart count")
    p.add_argument("--out", default=None)
    p.add_argument("--svg", default=None)
    p.set_defaults(func=cmd_maxmin)

    p = sub.add_parser("verify", help="run the property suite and print a pass/fail report")
    p.add_argument("problem")
    p.add_argument("--grid", type=int, default=None)
    p.add_argument("--etas", type=parse_etas, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--slack", type=_nonnegative, default=1e-4)
    p.add_argument("--starts", type=int, default=16)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ProblemError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PROBLEM
    except BudgetCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except InfeasibleBudgetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except InfoValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PROBLEM


if __name__ == "__main__":
    sys.exit(main())
