import numpy as np
import pytest

from _problems import THREE_ACTION, random_problem, symmetric, three_action
from infovalue.errors import AffineValueError, BoundaryPriorError
from infovalue.geometry import (
    decision_regions,
    flat_threshold,
    interior_prior,
    locate_region,
    undominated_actions,
    value_function,
    values,
)
from infovalue.lp import LinearProgram, solve_lp
from infovalue.model import InformationMeasure, make_problem


class TestValueFunction:
    def test_identity(self):
        problem, _ = symmetric()
        assert value_function(problem, [0.7, 0.3]) == (pytest.approx(0.7), (0,))

    def test_vertices(self):
        problem = make_problem([[3, -1, 0], [0, 2, 5], [1, 1, 1]], [0.3, 0.3, 0.4])
        for t in range(3):
            v, _ = value_function(problem, np.eye(3)[t])
            assert v == problem.utility[:, t].max()

    def test_three_action_midpoint(self):
        problem, _ = three_action()
        v, arg = value_function(problem, [0.5, 0.5])
        assert v == pytest.approx(0.6) and arg == (2,)

    def test_ties_return_full_argmax(self):
        problem, _ = symmetric()
        assert value_function(problem, [0.5, 0.5])[1] == (0, 1)

    def test_vectorised_matches_pointwise(self):
        problem, _ = three_action()
        pts = np.random.default_rng(0).dirichlet([1, 1], size=50)
        assert np.allclose(values(problem, pts), [value_function(problem, x)[0] for x in pts])


class TestUndominated:
    def test_identity(self):
        assert undominated_actions(symmetric()[0]) == (0, 1)

    def test_three_action_all(self):
        assert undominated_actions(three_action()[0]) == (0, 1, 2)

    def test_dominated_safe_action(self):
        problem = make_problem([[1, 0], [0, 1], [0.4, 0.4]], [0.5, 0.5])
        assert undominated_actions(problem) == (0, 1)

    def test_weakly_optimal_only_at_a_point_is_dropped(self):
        # action 3 ties the envelope at (0.5, 0.5) but is never strictly best
        problem = make_problem([[1, 0], [0, 1], [0.5, 0.5]], [0.5, 0.5])
        assert undominated_actions(problem) == (0, 1)

    def test_duplicate_rows_keep_one(self):
        problem = make_problem([[1, 0], [1, 0], [0, 1]], [0.5, 0.5])
        assert undominated_actions(problem) == (0, 2)

    def test_delta_lp_margin(self):
        # independent check of the 0.6 action: max delta with x in the simplex
        u = np.array(THREE_ACTION)
        d1, d2 = u[2] - u[0], u[2] - u[1]
        # variables x1, x2, delta ; -d.x + delta <= 0
        lp = LinearProgram([0, 0, 1], [[1, 1, 0]], [1], [np.append(-d1, 1), np.append(-d2, 1)], [0, 0], "max")
        assert solve_lp(lp).objective_value == pytest.approx(0.1)

    def test_affine_value_rejected(self):
        problem = make_problem([[1, 1], [0, 0]], [0.5, 0.5])
        with pytest.raises(AffineValueError):
            decision_regions(problem)


class TestRegions:
    def test_identity_segments(self):
        regions = decision_regions(symmetric()[0])
        assert [r.action for r in regions] == [0, 1]
        assert np.allclose(regions[0].vertices, [[0.5, 0.5], [1.0, 0.0]])
        assert np.allclose(regions[1].vertices, [[0.0, 1.0], [0.5, 0.5]])

    def test_three_action_breakpoints(self):
        regions = decision_regions(three_action()[0])
        breaks = sorted({round(v[1], 12) for r in regions for v in r.vertices} - {0.0, 1.0})
        assert breaks == pytest.approx([0.4, 0.6], abs=1e-12)
        safe = regions[2]
        assert np.allclose(sorted(safe.vertices[:, 1]), [0.4, 0.6])

    def test_identity3_quadrilaterals_meet_at_barycenter(self):
        problem = make_problem(np.eye(3), np.ones(3) / 3)
        regions = decision_regions(problem)
        center = np.ones(3) / 3
        for r in regions:
            assert len(r.vertices) == 4
            assert any(np.allclose(v, center) for v in r.vertices)

    @pytest.mark.parametrize("n, a, seed", [(2, 4, 0), (3, 3, 1), (3, 5, 2), (4, 4, 3)])
    def test_invariants_on_random_problems(self, n, a, seed):
        rng = np.random.default_rng(seed)
        problem, _ = random_problem(rng, n, a)
        regions = decision_regions(problem)
        u = problem.utility
        for r in regions:
            assert r.contains(r.center, tol=0) and np.all(r.slacks(r.center) > 0)
            for v in r.vertices:
                assert np.all(r.slacks(v) >= -1e-9)
                assert v.min() >= 0 and abs(v.sum() - 1) <= 1e-12
                # the owning action's affine piece reproduces V at each vertex
                assert abs(u[r.action] @ v - value_function(problem, v)[0]) <= 1e-9
        pts = rng.dirichlet(np.ones(n), size=1000)
        env = values(problem, pts)
        pieces = np.max([pts @ u[r.action] for r in regions], axis=0)
        assert np.max(np.abs(env - pieces)) <= 1e-10
        for x in pts:
            assert any(r.contains(x) for r in regions)

    def test_five_states_keeps_halfspaces_only(self):
        problem = make_problem(np.eye(5), np.ones(5) / 5)
        regions = decision_regions(problem)
        assert all(r.vertices is None for r in regions)
        assert all(len(r.halfspaces) == 4 for r in regions)


class TestLocate:
    def test_identity_interior(self):
        loc = locate_region(decision_regions(symmetric()[0]), [0.75, 0.25])
        assert (loc.action, loc.boundary) == (0, False)

    def test_identity_boundary(self):
        assert locate_region(decision_regions(symmetric()[0]), [0.5, 0.5]).boundary

    def test_three_action_middle(self):
        loc = locate_region(decision_regions(three_action()[0]), [0.5, 0.5])
        assert (loc.action, loc.boundary) == (2, False)

    def test_interior_prior_moves_off_boundary(self):
        regions = decision_regions(symmetric()[0])
        x = interior_prior(regions, [0.5, 0.5])
        assert not locate_region(regions, x).boundary


class TestFlatThreshold:
    def test_quarter_prior(self):
        problem, measure = symmetric(prior=(0.25, 0.75))
        assert abs(flat_threshold(problem, measure) - 0.125) <= 1e-9

    def test_tenth_prior_matches_vertex_weights(self):
        problem, measure = symmetric(prior=(0.1, 0.9))
        # weights (0.2, 0.8) on (0.5, 0.5) and (0, 1)
        expected = 0.2 * measure.cost([0.5, 0.5]) + 0.8 * measure.cost([0.0, 1.0])
        assert flat_threshold(problem, measure) == pytest.approx(expected, abs=1e-12)

    def test_boundary_prior_rejected(self):
        problem, measure = symmetric()
        with pytest.raises(BoundaryPriorError):
            flat_threshold(problem, measure)

    def test_power_phi_applied(self):
        problem, _ = symmetric(prior=(0.25, 0.75))
        measure = InformationMeasure("quadratic", problem.prior, "power", 2)
        assert flat_threshold(problem, measure) == pytest.approx(0.125 ** 2, abs=1e-12)

    def test_positive_for_random_interior_priors(self):
        rng = np.random.default_rng(4)
        problem = make_problem(np.eye(3) + 0.1 * rng.uniform(size=(3, 3)), np.ones(3) / 3)
        regions = decision_regions(problem)
        for _ in range(10):
            mu = interior_prior(regions, rng.dirichlet(np.ones(3)))
            p = problem.with_prior(mu)
            for kind in ("quadratic", "kl", "entropy_reduction"):
                assert flat_threshold(p, InformationMeasure(kind, mu), regions) > 0

    def test_reference_must_match_prior(self):
        problem, _ = symmetric(prior=(0.25, 0.75))
        with pytest.raises(ValueError):
            flat_threshold(problem, InformationMeasure("quadratic", [0.5, 0.5]))

