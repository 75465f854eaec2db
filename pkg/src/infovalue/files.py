"""Problem files, curve CSVs and SVG charts.

Problem file (JSON)::

    {
      "states":  ["rain", "sun"],
      "actions": ["umbrella", "none"],
      "utility": [[1, 0], [0, 1]],          # one row per action
      "prior":   [0.5, 0.5],
      "measure": {"divergence": "quadratic", "phi": "identity"},
      # optional, max-min section
      "prior_set_vertices": [[0.3, 0.7], [0.7, 0.3]],
      "reference_prior": [0.5, 0.5],
      "signal_count": 2,
      "seed": 0
    }

``measure.divergence`` is one of quadratic, kl, entropy_reduction;
``measure.phi`` is identity or power (then ``"p": 2`` etc.).  Every
invariant violation is reported as ``file:line: message``.
"""

from __future__ import annotations

import csv
import io
import json
import re
from dataclasses import dataclass
from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

from .errors import ProblemError
from .model import DecisionProblem, InformationMeasure

CSV_HEADER = ("eta", "value", "realized_amount", "support_size")
CERT_TAGS = ("oracle", "heuristic", "failed")


@dataclass(frozen=True, eq=False)
class ProblemSpec:
    problem: DecisionProblem
    measure: InformationMeasure
    prior_set: object = None
    signal_count: int | None = None
    seed: int = 0
    source: str = "<problem>"


def _line_of(text: str, key: str) -> int:
    m = re.search(r'"' + re.escape(key) + r'"\s*:', text)
    return text.count("\n", 0, m.start()) + 1 if m else 1


def parse_problem(text: str, source: str = "<problem>") -> ProblemSpec:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemError(f"invalid JSON: {exc.msg}", exc.lineno, source) from None
    if not isinstance(data, dict):
        raise ProblemError("top level must be a JSON object", 1, source)

    def fail(key, message):
        raise ProblemError(message, _line_of(text, key), source)

    def get(key, required=True):
        if key not in data:
            if required:
                raise ProblemError(f'missing required key "{key}"', 1, source)
            return None
        return data[key]

    def matrix(key, value):
        try:
            arr = np.array(value, dtype=float)
        except (TypeError, ValueError):
            fail(key, f'"{key}" must hold numbers')
        return arr

    states, actions = get("states"), get("actions")
    for key, labels in (("states", states), ("actions", actions)):
        if not isinstance(labels, list) or not all(isinstance(s, str) for s in labels):
            fail(key, f'"{key}" must be a list of strings')
        if len(set(labels)) != len(labels):
            fail(key, f'"{key}" has duplicate labels')
    utility = matrix("utility", get("utility"))
    if utility.ndim != 2 or utility.shape != (len(actions), len(states)):
        fail("utility", f'"utility" must have {len(actions)} rows (actions) of {len(states)} entries (states)')
    prior = matrix("prior", get("prior"))
    try:
        problem = DecisionProblem(utility, prior, tuple(states), tuple(actions))
    except ProblemError as exc:
        key = "prior" if "prior" in str(exc) else "utility"
        fail(key, str(exc))

    meas = get("measure")
    if not isinstance(meas, dict):
        fail("measure", '"measure" must be an object with "divergence" and "phi"')
    ref_raw = get("reference_prior", required=False)
    reference = problem.prior if ref_raw is None else matrix("reference_prior", ref_raw)
    try:
        measure = InformationMeasure(
            meas.get("divergence", ""), reference, meas.get("phi", "identity"), meas.get("p", 1.0)
        )
    except (ProblemError, TypeError, ValueError) as exc:
        fail("reference_prior" if "reference" in str(exc) else "measure", str(exc))

    prior_set = None
    verts = get("prior_set_vertices", required=False)
    if verts is not None:
        from .maxmin import PriorSet

        vmat = matrix("prior_set_vertices", verts)
        if vmat.ndim != 2 or vmat.shape[1] != len(states):
            fail("prior_set_vertices", f'"prior_set_vertices" must be a list of {len(states)}-entry beliefs')
        try:
            prior_set = PriorSet(vmat, reference)
        except ProblemError as exc:
            fail("prior_set_vertices", str(exc))
    elif ref_raw is not None and np.max(np.abs(reference - problem.prior)) > 1e-12:
        fail("reference_prior", '"reference_prior" differs from "prior" but no "prior_set_vertices" given')

    signal_count = get("signal_count", required=False)
    if signal_count is not None and (not isinstance(signal_count, int) or signal_count < 1):
        fail("signal_count", '"signal_count" must be a positive integer')
    seed = get("seed", required=False)
    if seed is None:
        seed = 0
    if not isinstance(seed, int) or isinstance(seed, bool) or seed < 0:
        fail("seed", '"seed" must be a nonnegative integer')
    return ProblemSpec(problem, measure, prior_set, signal_count, seed, source)


def load_problem(path) -> ProblemSpec:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ProblemError(f"cannot read problem file: {exc.strerror}", None, str(path)) from None
    return parse_problem(text, str(path))


def _fmt(x: float) -> str:
    return repr(float(x))


def curve_csv(points, certified: bool = False) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER + (("certified",) if certified else ()))
    for pt in points:
        row = [_fmt(pt.eta), _fmt(pt.value), _fmt(pt.realized_amount), str(pt.support_size)]
        if certified:
            row.append(pt.certified or "heuristic")
        w.writerow(row)
    return buf.getvalue()


def write_curve_csv(path, points, certified: bool = False) -> None:
    Path(path).write_text(curve_csv(points, certified))


@dataclass(frozen=True)
class CsvRow:
    eta: float
    value: float
    realized_amount: float
    support_size: int
    certified: str | None = None


def read_curve_csv(path, mode: str, n_states: int | None = None, tol: float = 1e-7) -> list:
    """Parse a curve CSV and re-check each row against its program's invariants.

    ``mode`` is efficient, inefficient or maxmin.  Raises :class:`ProblemError`
    anchored at the offending line.
    """
    source = str(path)
    lines = Path(path).read_text().splitlines()
    if not lines:
        raise ProblemError("empty curve file", 1, source)
    header = tuple(lines[0].split(","))
    if header not in (CSV_HEADER, CSV_HEADER + ("certified",)):
        raise ProblemError(f"unexpected header {lines[0]!r}", 1, source)
    rows = []
    for lineno, row in enumerate(csv.reader(lines[1:]), start=2):
        if len(row) != len(header):
            raise ProblemError("wrong number of fields", lineno, source)
        try:
            rec = CsvRow(float(row[0]), float(row[1]), float(row[2]), int(row[3]),
                         row[4] if len(row) > 4 else None)
        except ValueError:
            raise ProblemError("unparseable field", lineno, source) from None
        if rec.eta < 0 or not np.isfinite([rec.eta, rec.value, rec.realized_amount]).all():
            raise ProblemError("eta must be finite and nonnegative", lineno, source)
        if mode in ("efficient", "maxmin") and rec.realized_amount > rec.eta + tol:
            raise ProblemError("realized amount exceeds the budget", lineno, source)
        if mode == "inefficient" and rec.realized_amount < rec.eta - tol:
            raise ProblemError("realized amount falls short of the required amount", lineno, source)
        if rec.support_size < 1 or (n_states is not None and mode != "maxmin"
                                    and rec.support_size > n_states + 1):
            raise ProblemError("support size out of range", lineno, source)
        if rec.certified is not None and rec.certified not in CERT_TAGS:
            raise ProblemError(f"unknown certification tag {rec.certified!r}", lineno, source)
        if rows and rec.eta < rows[-1].eta:
            raise ProblemError("etas must be ascending", lineno, source)
        if rows and mode != "maxmin" and rec.value < rows[-1].value - 1e-9:
            raise ProblemError("curve values must be nondecreasing in eta", lineno, source)
        rows.append(rec)
    return rows


def _nice_ticks(lo, hi, count=5):
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / count
    mag = 10 ** np.floor(np.log10(raw))
    step = min((m * mag for m in (1, 2, 2.5, 5, 10) if m * mag >= raw), default=10 * mag)
    start = np.ceil(lo / step) * step
    return [float(t) for t in np.arange(start, hi + step * 1e-9, step)]


def svg_chart(series, title: str = "", xlabel: str = "eta", ylabel: str = "value",
              width: int = 640, height: int = 400) -> str:
    """Self-contained SVG line chart; ``series`` is a list of (label, xs, ys)."""
    colors = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd")
    ml, mr, mt, mb = 70, 20, 40, 50
    xs_all = np.concatenate([np.asarray(s[1], float) for s in series])
    ys_all = np.concatenate([np.asarray(s[2], float) for s in series])
    x0, x1 = float(xs_all.min()), float(xs_all.max())
    y0, y1 = float(ys_all.min()), float(ys_all.max())
    if x1 <= x0:
        x1 = x0 + 1.0
    pad = 0.05 * (y1 - y0 or 1.0)
    y0, y1 = y0 - pad, y1 + pad

    def sx(x):
        return ml + (x - x0) / (x1 - x0) * (width - ml - mr)

    def sy(y):
        return height - mb - (y - y0) / (y1 - y0) * (height - mt - mb)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2:.1f}" y="22" text-anchor="middle" font-size="14">{escape(title)}</text>',
        f'<line x1="{ml}" y1="{height - mb}" x2="{width - mr}" y2="{height - mb}" stroke="black"/>',
        f'<line x1="{ml}" y1="{mt}" x2="{ml}" y2="{height - mb}" stroke="black"/>',
    ]
    for t in _nice_ticks(x0, x1):
        out.append(f'<line x1="{sx(t):.2f}" y1="{height - mb}" x2="{sx(t):.2f}" y2="{height - mb + 5}" stroke="black"/>')
        out.append(f'<text x="{sx(t):.2f}" y="{height - mb + 18}" text-anchor="middle">{t:g}</text>')
    for t in _nice_ticks(y0, y1):
        out.append(f'<line x1="{ml - 5}" y1="{sy(t):.2f}" x2="{ml}" y2="{sy(t):.2f}" stroke="black"/>')
        out.append(f'<text x="{ml - 8}" y="{sy(t) + 4:.2f}" text-anchor="end">{t:g}</text>')
    out.append(f'<text x="{(ml + width - mr) / 2:.1f}" y="{height - 12}" text-anchor="middle">{escape(xlabel)}</text>')
    out.append(f'<text x="16" y="{(mt + height - mb) / 2:.1f}" text-anchor="middle" '
               f'transform="rotate(-90 16 {(mt + height - mb) / 2:.1f})">{escape(ylabel)}</text>')
    for i, (label, xs, ys) in enumerate(series):
        color = colors[i % len(colors)]
        pts = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in zip(xs, ys))
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="2" points="{pts}"/>')
        out.append(f'<text x="{width - mr - 5}" y="{mt + 16 * (i + 1)}" text-anchor="end" fill="{color}">{escape(label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_svg(path, series, **kwargs) -> None:
    Path(path).write_text(svg_chart(series, **kwargs))
