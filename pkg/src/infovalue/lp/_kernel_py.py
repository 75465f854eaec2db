"""Pure numpy simplex kernel; fallback for the compiled ``_kernel`` module.

Pivoting rules and tie-breaks mirror ``_kernel.pyx`` exactly.
"""

import numpy as np

NAME = "python"

OPTIMAL = 0
UNBOUNDED = 1
ITERATION_LIMIT = 2


def pivot(T, basis, r, j):
    row = T[r] / T[r, j]
    col = T[:, j].copy()
    col[r] = 0.0
    T -= np.outer(col, row)
    T[r] = row
    T[:, j] = 0.0
    T[r, j] = 1.0
    basis[r] = j


def iterate(T, basis, n_enter, bland_after, max_iter, tol, piv_tol):
    m = T.shape[0] - 1
    it = 0
    while True:
        d = T[m, :n_enter]
        if it < bland_after:
            j = int(np.argmin(d)) if n_enter else -1
            if j >= 0 and not d[j] < -tol:
                j = -1
        else:
            cand = np.flatnonzero(d < -tol)
            j = int(cand[0]) if cand.size else -1
        if j < 0:
            return OPTIMAL, it
        if it >= max_iter:
            return ITERATION_LIMIT, it

        a = T[:m, j]
        rows = np.flatnonzero(a > piv_tol)
        if rows.size == 0:
            return UNBOUNDED, it
        b = np.maximum(T[rows, -1], 0.0)
        q = b / a[rows]
        minratio = q.min()
        window = minratio + 1e-12 * (1.0 if minratio < 1.0 else minratio)
        tied = rows[q <= window]
        r = int(tied[np.argmin(basis[tied])])
        pivot(T, basis, r, j)
        it += 1
