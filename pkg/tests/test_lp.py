from itertools import combinations

import numpy as np
import pytest

from infovalue.lp import INFEASIBLE, OPTIMAL, UNBOUNDED, LinearProgram, available_backends, solve_lp


def bfs_optimum(lp):
    """Best objective over all basic feasible solutions of the standard form."""
    n = lp.n_vars
    A = np.vstack([np.hstack([lp.eq_matrix, np.zeros((lp.eq_rhs.size, lp.ub_rhs.size))]),
                   np.hstack([lp.ub_matrix, np.eye(lp.ub_rhs.size)])])
    b = np.concatenate([lp.eq_rhs, lp.ub_rhs])
    m, N = A.shape
    best = None
    for cols in combinations(range(N), m):
        B = A[:, cols]
        if abs(np.linalg.det(B)) < 1e-10:
            continue
        xb = np.linalg.solve(B, b)
        if xb.min() < -1e-9:
            continue
        x = np.zeros(N)
        x[list(cols)] = xb
        val = float(lp.objective @ x[:n])
        if best is None or (val > best if lp.sense == "max" else val < best):
            best = val
    return best


def random_lp(rng):
    """Feasible and bounded by construction: a known nonnegative point and a total-mass cap."""
    n = int(rng.integers(2, 13))
    m_eq = int(rng.integers(0, 3))
    m_ub = int(rng.integers(1, 7 - m_eq))
    x0 = rng.uniform(0, 1, n) * (rng.uniform(size=n) < 0.7)
    A_eq = rng.normal(size=(m_eq, n))
    A_ub = rng.normal(size=(m_ub, n))
    A_ub[0] = 1.0
    b_ub = A_ub @ x0 + rng.uniform(0, 1, m_ub)
    return LinearProgram(rng.normal(size=n), A_eq, A_eq @ x0, A_ub, b_ub,
                         sense="max" if rng.uniform() < 0.5 else "min")


class TestExamples:
    def test_max_on_segment(self, backend):
        sol = solve_lp(LinearProgram([1, 0], [[1, 1]], [1], sense="max"), backend)
        assert sol.status == OPTIMAL
        assert sol.objective_value == 1.0
        assert np.array_equal(sol.values, [1.0, 0.0])

    def test_lower_bound_as_ub_row(self, backend):
        sol = solve_lp(LinearProgram([1, 0], [[1, 1]], [1], [[-1, 0]], [-0.3], sense="min"), backend)
        assert sol.status == OPTIMAL
        assert sol.objective_value == pytest.approx(0.3, abs=1e-12)

    def test_infeasible(self, backend):
        sol = solve_lp(LinearProgram([1, 1], [[1, 1]], [-1]), backend)
        assert sol.status == INFEASIBLE

    def test_unbounded(self, backend):
        sol = solve_lp(LinearProgram([1, 0], [[1, -1]], [0], sense="max"), backend)
        assert sol.status == UNBOUNDED

    def test_redundant_equalities(self, backend):
        sol = solve_lp(LinearProgram([1, 2, 3], [[1, 1, 1], [2, 2, 2]], [1, 2], sense="min"), backend)
        assert sol.status == OPTIMAL and sol.objective_value == pytest.approx(1.0)


class TestValidation:
    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            LinearProgram([1, 2], [[1, 1, 1]], [1])

    def test_non_finite(self):
        with pytest.raises(ValueError):
            LinearProgram([1, np.nan], [[1, 1]], [1])

    def test_bad_sense(self):
        with pytest.raises(ValueError):
            LinearProgram([1], sense="maximize")


class TestRandom:
    def test_matches_bfs_enumeration(self, backend):
        rng = np.random.default_rng(123)
        worst = 0.0
        for _ in range(200):
            lp = random_lp(rng)
            sol = solve_lp(lp, backend)
            assert sol.status == OPTIMAL
            worst = max(worst, abs(sol.objective_value - bfs_optimum(lp)))
        assert worst <= 1e-8

    def test_optimal_solutions_are_basic_and_feasible(self, backend):
        rng = np.random.default_rng(7)
        for _ in range(100):
            lp = random_lp(rng)
            sol = solve_lp(lp, backend)
            assert np.count_nonzero(sol.values > 0) <= lp.n_rows
            x = sol.values
            assert x.min() >= 0
            assert np.all(np.abs(lp.eq_matrix @ x - lp.eq_rhs) <= 1e-9 * np.maximum(1, np.abs(lp.eq_rhs)))
            assert np.all(lp.ub_matrix @ x <= lp.ub_rhs + 1e-9 * np.maximum(1, np.abs(lp.ub_rhs)))

    def test_backends_agree_bitwise(self):
        if len(available_backends()) < 2:
            pytest.skip("compiled kernel not built")
        rng = np.random.default_rng(99)
        for _ in range(50):
            lp = random_lp(rng)
            a, b = (solve_lp(lp, name) for name in ("python", "compiled"))
            assert a.basis == b.basis
            assert np.array_equal(a.values, b.values)

    def test_reproducible(self, backend):
        rng = np.random.default_rng(5)
        lp = random_lp(rng)
        first, second = solve_lp(lp, backend), solve_lp(lp, backend)
        assert first.basis == second.basis and np.array_equal(first.values, second.values)

    def test_degenerate_cycling_example(self, backend):
        # Beale's example cycles under textbook Dantzig pricing without anti-cycling
        c = [-0.75, 20, -0.5, 6]
        A = [[0.25, -8, -1, 9], [0.5, -12, -0.5, 3], [0, 0, 1, 0]]
        sol = solve_lp(LinearProgram(c, ub_matrix=A, ub_rhs=[0, 0, 1]), backend)
        assert sol.status == OPTIMAL
        assert sol.objective_value == pytest.approx(-1.25)

    def test_many_columns(self, backend):
        rng = np.random.default_rng(11)
        n = 20000
        pts = rng.dirichlet(np.ones(3), size=n)
        A = np.vstack([pts[:, :2].T, np.ones(n)])
        sol = solve_lp(LinearProgram(rng.uniform(size=n), A, [0.3, 0.3, 1.0], sense="max"), backend)
        assert sol.status == OPTIMAL
        assert np.count_nonzero(sol.values) <= 3
