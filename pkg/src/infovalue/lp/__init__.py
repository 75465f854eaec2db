"""Dense two-phase primal simplex for small-row, many-column linear programs.

All variables are nonnegative.  The pivot loop runs in a compiled kernel
(``_kernel``, Cython) when it was built, else in the numpy fallback
``_kernel_py``; set ``INFOVALUE_PURE_PYTHON=1`` to force the fallback.
Both kernels pick pivots identically: Dantzig pricing with lowest-index
ties, switching to Bland's rule after ``5 * (rows + cols)`` iterations,
and a ratio test that breaks ties by the lowest basic-variable index.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from . import _kernel_py

try:
    if os.environ.get("INFOVALUE_PURE_PYTHON"):
        raise ImportError("pure-Python kernel forced")
    from . import _kernel as _compiled
except ImportError:
    _compiled = None

BACKENDS = {"python": _kernel_py}
if _compiled is not None:
    BACKENDS["compiled"] = _compiled
DEFAULT_BACKEND = "compiled" if _compiled is not None else "python"

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

REDUCED_COST_TOL = 1e-9
PIVOT_TOL = 1e-10
FEAS_TOL = 1e-9


def _as_matrix(a, ncols):
    if a is None:
        return np.zeros((0, ncols))
    a = np.asarray(a, dtype=float)
    if a.ndim == 1:
        a = a[None, :]
    return a


@dataclass(frozen=True, eq=False)
class LinearProgram:
    """``sense`` objective @ x  s.t.  eq_matrix @ x == eq_rhs, ub_matrix @ x <= ub_rhs, x >= 0."""

    objective: np.ndarray
    eq_matrix: np.ndarray | None = None
    eq_rhs: np.ndarray | None = None
    ub_matrix: np.ndarray | None = None
    ub_rhs: np.ndarray | None = None
    sense: str = "min"

    def __post_init__(self):
        c = np.asarray(self.objective, dtype=float).reshape(-1)
        n = c.size
        a_eq = _as_matrix(self.eq_matrix, n)
        a_ub = _as_matrix(self.ub_matrix, n)
        b_eq = np.asarray(self.eq_rhs if self.eq_rhs is not None else [], dtype=float).reshape(-1)
        b_ub = np.asarray(self.ub_rhs if self.ub_rhs is not None else [], dtype=float).reshape(-1)
        if a_eq.shape != (b_eq.size, n) or a_ub.shape != (b_ub.size, n):
            raise ValueError("constraint matrix and rhs dimensions are inconsistent")
        if self.sense not in ("min", "max"):
            raise ValueError("sense must be 'min' or 'max'")
        for arr in (c, a_eq, a_ub, b_eq, b_ub):
            if not np.all(np.isfinite(arr)):
                raise ValueError("linear program has non-finite entries")
        object.__setattr__(self, "objective", c)
        object.__setattr__(self, "eq_matrix", a_eq)
        object.__setattr__(self, "eq_rhs", b_eq)
        object.__setattr__(self, "ub_matrix", a_ub)
        object.__setattr__(self, "ub_rhs", b_ub)

    @property
    def n_vars(self) -> int:
        return self.objective.size

    @property
    def n_rows(self) -> int:
        return self.eq_rhs.size + self.ub_rhs.size


@dataclass(frozen=True, eq=False)
class LpSolution:
    status: str
    values: np.ndarray
    objective_value: float
    basis: tuple
    iterations: int = 0

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL


def _phase_cost_row(T, basis, cost):
    m = T.shape[0] - 1
    crow = np.append(cost, 0.0)
    T[m] = crow - cost[basis] @ T[:m]


def solve_lp(lp: LinearProgram, backend: str | None = None) -> LpSolution:
    """Solve ``lp`` by two-phase simplex; statuses replace exceptions for infeasible/unbounded."""
    kernel = BACKENDS[backend or DEFAULT_BACKEND]
    c = lp.objective if lp.sense == "min" else -lp.objective
    n = lp.n_vars
    m_eq, m_ub = lp.eq_rhs.size, lp.ub_rhs.size
    m = m_eq + m_ub
    n_real = n + m_ub

    A = np.zeros((m, n_real))
    A[:m_eq, :n] = lp.eq_matrix
    A[m_eq:, :n] = lp.ub_matrix
    A[m_eq:, n:] = np.eye(m_ub)
    b = np.concatenate([lp.eq_rhs, lp.ub_rhs])
    flip = b < 0
    A[flip] *= -1.0
    b[flip] *= -1.0

    need_art = np.ones(m, dtype=bool)
    need_art[m_eq:] = flip[m_eq:]
    art_rows = np.flatnonzero(need_art)
    n_art = art_rows.size

    T = np.zeros((m + 1, n_real + n_art + 1))
    T[:m, :n_real] = A
    T[:m, -1] = b
    basis = np.empty(m, dtype=np.intp)
    slack_rows = np.flatnonzero(~need_art)
    basis[slack_rows] = n + (slack_rows - m_eq)
    T[art_rows, n_real + np.arange(n_art)] = 1.0
    basis[art_rows] = n_real + np.arange(n_art)

    bland_after = 5 * (m + n_real)
    max_iter = 50 * (m + n_real) + 1000
    iterations = 0

    if n_art:
        phase1 = np.zeros(n_real + n_art)
        phase1[n_real:] = 1.0
        _phase_cost_row(T, basis, phase1)
        status, it = kernel.iterate(T, basis, n_real, bland_after, max_iter, REDUCED_COST_TOL, PIVOT_TOL)
        iterations += it
        if status == 2:
            raise RuntimeError("simplex phase 1 hit the iteration limit")
        infeasibility = -T[m, -1]
        if infeasibility > FEAS_TOL * max(1.0, float(np.abs(b).max(initial=0.0))):
            return LpSolution(INFEASIBLE, np.full(n, np.nan), np.nan, (), iterations)
        # drive zero-level artificials out of the basis; rows with nothing to
        # pivot on are redundant and keep their artificial at zero
        for r in np.flatnonzero(basis >= n_real):
            row = np.abs(T[r, :n_real])
            k = int(np.argmax(row))
            if row[k] > PIVOT_TOL:
                kernel.pivot(T, basis, int(r), k)

    cost = np.zeros(n_real + n_art)
    cost[:n] = c
    _phase_cost_row(T, basis, cost)
    status, it = kernel.iterate(T, basis, n_real, bland_after, max_iter, REDUCED_COST_TOL, PIVOT_TOL)
    iterations += it
    if status == 2:
        raise RuntimeError("simplex phase 2 hit the iteration limit")
    if status == 1:
        return LpSolution(UNBOUNDED, np.full(n, np.nan), np.inf if lp.sense == "max" else -np.inf,
                          tuple(int(j) for j in basis), iterations)

    x = np.zeros(n_real + n_art)
    x[basis] = np.maximum(T[:m, -1], 0.0)
    values = x[:n]
    return LpSolution(OPTIMAL, values, float(lp.objective @ values),
                      tuple(int(j) for j in basis if j < n_real), iterations)


def available_backends() -> tuple:
    return tuple(BACKENDS)
