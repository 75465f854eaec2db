"""Barycentric lattice of candidate posteriors."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb

import numpy as np

from .errors import UnsupportedError
from .model import check_belief

DEFAULT_RESOLUTION = {2: 1000, 3: 120, 4: 40}
MAX_GRID_STATES = 4
DEFAULT_CAP = 200_000
MATCH_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class PosteriorGrid:
    resolution: int
    points: np.ndarray
    prior_index: int
    n_lattice: int

    def __len__(self) -> int:
        return self.points.shape[0]

    @property
    def n_states(self) -> int:
        return self.points.shape[1]


def lattice(n: int, k: int) -> np.ndarray:
    """All points of the simplex whose coordinates are multiples of 1/k, lexicographic."""
    # stars and bars: choose n-1 bar positions among k+n-1 slots
    rows = []
    for bars in combinations(range(k + n - 1), n - 1):
        edges = (-1,) + bars + (k + n - 1,)
        rows.append([edges[i + 1] - edges[i] - 1 for i in range(n)])
    counts = np.array(rows, dtype=float)
    pts = counts / k
    # sort descending on the first coordinate and onward so e_1 comes first
    order = np.lexsort(tuple(-pts[:, i] for i in reversed(range(n))))
    return pts[order]


def _find(points, x):
    hits = np.flatnonzero(np.max(np.abs(points - x), axis=1) <= MATCH_TOL)
    return int(hits[0]) if hits.size else -1


def make_grid(n: int, k: int, prior, *, extra_points=None, cap: int = DEFAULT_CAP) -> PosteriorGrid:
    """Lattice of resolution ``k`` plus the prior (and ``extra_points``) when off-lattice.

    A lattice point within 1e-12 of the prior is replaced by the prior itself,
    so the divergence at that column is exactly zero.
    """
    if k < 2:
        raise ValueError("grid resolution must be at least 2")
    if n > MAX_GRID_STATES:
        raise UnsupportedError(f"posterior grids support at most {MAX_GRID_STATES} states")
    size = comb(k + n - 1, n - 1)
    extras = [] if extra_points is None else list(np.atleast_2d(extra_points))
    if size + 1 + len(extras) > cap:
        raise ValueError(f"grid of {size} points exceeds the cap of {cap}")
    prior = check_belief(prior, name="prior")
    if prior.size != n:
        raise ValueError("prior dimension does not match the state count")

    pts = lattice(n, k)
    n_lattice = len(pts)
    added = []
    for idx, x in enumerate([prior] + extras):
        x = np.asarray(x, dtype=float)
        i = _find(pts, x)
        if i >= 0:
            if idx == 0:
                pts[i] = prior
            continue
        if any(np.max(np.abs(y - x)) <= MATCH_TOL for y in added):
            continue
        added.append(x)
    if added:
        pts = np.vstack([pts, np.asarray(added)])
    prior_index = _find(pts, prior)
    pts.setflags(write=False)
    return PosteriorGrid(k, pts, prior_index, n_lattice)


def default_grid(problem, k: int | None = None, extra_points=None) -> PosteriorGrid:
    n = problem.n_states
    if k is None:
        if n not in DEFAULT_RESOLUTION:
            raise UnsupportedError(f"no default grid for {n} states")
        k = DEFAULT_RESOLUTION[n]
    return make_grid(n, k, problem.prior, extra_points=extra_points)
