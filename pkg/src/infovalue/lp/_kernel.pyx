# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled simplex iteration kernel.

Operates in place on a dense tableau ``T`` of shape (m + 1, ncols + 1):
rows ``0..m-1`` are constraints, row ``m`` holds reduced costs of a
minimisation, the last column is the right-hand side.  Semantics are
identical to :mod:`infovalue.lp._kernel_py`.
"""

from libc.math cimport INFINITY

NAME = "compiled"

DEF OPTIMAL = 0
DEF UNBOUNDED = 1
DEF ITERATION_LIMIT = 2


cdef void _pivot(double[:, ::1] T, Py_ssize_t[::1] basis,
                 Py_ssize_t r, Py_ssize_t j) noexcept nogil:
    cdef Py_ssize_t rows = T.shape[0]
    cdef Py_ssize_t cols = T.shape[1]
    cdef Py_ssize_t i, k
    cdef double piv = T[r, j]
    cdef double f
    for k in range(cols):
        T[r, k] = T[r, k] / piv
    for i in range(rows):
        if i == r:
            continue
        f = T[i, j]
        if f != 0.0:
            for k in range(cols):
                T[i, k] = T[i, k] - f * T[r, k]
        T[i, j] = 0.0
    T[r, j] = 1.0
    basis[r] = j


def pivot(double[:, ::1] T, Py_ssize_t[::1] basis, Py_ssize_t r, Py_ssize_t j):
    with nogil:
        _pivot(T, basis, r, j)


def iterate(double[:, ::1] T, Py_ssize_t[::1] basis, Py_ssize_t n_enter,
            long bland_after, long max_iter, double tol, double piv_tol):
    """Run primal simplex pivots until optimal/unbounded; return (status, iterations)."""
    cdef Py_ssize_t m = T.shape[0] - 1
    cdef Py_ssize_t rhs = T.shape[1] - 1
    cdef Py_ssize_t i, k, j, r
    cdef long it = 0
    cdef int status = OPTIMAL
    cdef double best, a, b, q, minratio, window
    cdef Py_ssize_t best_basis

    with nogil:
        while True:
            j = -1
            if it < bland_after:
                best = -tol
                for k in range(n_enter):
                    if T[m, k] < best:
                        best = T[m, k]
                        j = k
            else:
                for k in range(n_enter):
                    if T[m, k] < -tol:
                        j = k
                        break
            if j < 0:
                status = OPTIMAL
                break
            if it >= max_iter:
                status = ITERATION_LIMIT
                break

            minratio = INFINITY
            for i in range(m):
                a = T[i, j]
                if a > piv_tol:
                    b = T[i, rhs]
                    if b < 0.0:
                        b = 0.0
                    q = b / a
                    if q < minratio:
                        minratio = q
            if minratio == INFINITY:
                status = UNBOUNDED
                break

            window = minratio + 1e-12 * (1.0 if minratio < 1.0 else minratio)
            r = -1
            best_basis = 0
            for i in range(m):
                a = T[i, j]
                if a > piv_tol:
                    b = T[i, rhs]
                    if b < 0.0:
                        b = 0.0
                    if b / a <= window and (r < 0 or basis[i] < best_basis):
                        r = i
                        best_basis = basis[i]
            _pivot(T, basis, r, j)
            it += 1
    return status, it
