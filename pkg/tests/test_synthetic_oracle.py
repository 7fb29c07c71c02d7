"""
Tests for the synthetic quadratic generator and its two independent oracles.
"""
import unittest

import numpy as np

from src.data.synthetic import SyntheticQuadratic, grid_search_solve, synth_oracle_solve
from src.exceptions import AssumptionViolationError
from src.schemas.fairness_schemas import ELConfig
from src.services.fairness.el_algorithms import optimal_gamma_el


class TestSyntheticQuadratic(unittest.TestCase):

    def test_rejects_indefinite_curvature(self):
        with self.assertRaises(ValueError):
            SyntheticQuadratic([[[1.0]], [[-1.0]]], [[0.0], [1.0]])

    def test_rejects_bad_weights(self):
        with self.assertRaises(ValueError):
            SyntheticQuadratic.scalar(1.0, -1.0, group_weights=(0.7, 0.7))

    def test_random_instances_respect_the_margin(self):
        rng = np.random.default_rng(0)
        for dim in (1, 2, 3):
            problem = SyntheticQuadratic.random(dim, rng, min_margin=0.3)
            self.assertEqual(problem.dim, dim)
            self.assertGreater(min(problem.assumption_margins()), 0.3)

    def test_pareto_endpoints(self):
        problem = SyntheticQuadratic.random(2, np.random.default_rng(1))
        p0, p1 = problem.group_weights
        np.testing.assert_allclose(problem.pareto_point(-p0), problem.group_optimum(1))
        np.testing.assert_allclose(problem.pareto_point(p1), problem.group_optimum(0))

    def test_batch_losses_match_pointwise(self):
        problem = SyntheticQuadratic.random(2, np.random.default_rng(2))
        points = np.random.default_rng(3).normal(size=(5, 2))
        l0, l1 = problem.batch_losses(points)
        for k, point in enumerate(points):
            expected = problem.group_losses(point)
            self.assertAlmostEqual(l0[k], expected[0])
            self.assertAlmostEqual(l1[k], expected[1])


class TestOracleFixtures(unittest.TestCase):

    def test_symmetric_pair(self):
        w, loss = synth_oracle_solve(SyntheticQuadratic.scalar(1.0, -1.0), 0.0)
        self.assertAlmostEqual(float(w[0]), 0.0, places=10)
        self.assertAlmostEqual(loss, 1.0, places=10)

    def test_weighted_pair(self):
        problem = SyntheticQuadratic.scalar(1.0, -1.0, group_weights=(0.75, 0.25))
        w, loss = synth_oracle_solve(problem, 1.0)
        self.assertAlmostEqual(float(w[0]), 0.25, places=8)
        self.assertAlmostEqual(loss, 0.8125, places=8)
        w_grid, loss_grid = grid_search_solve(problem, 1.0)
        self.assertAlmostEqual(float(w_grid[0]), 0.25, places=3)
        self.assertAlmostEqual(loss_grid, 0.8125, places=4)

    def test_assumption_violation(self):
        problem = SyntheticQuadratic.scalar(0.0, 0.0, offsets=(0.0, 5.0))
        with self.assertRaises(AssumptionViolationError):
            synth_oracle_solve(problem, 1.0)

    def test_grid_search_dimension_limit(self):
        problem = SyntheticQuadratic.random(3, np.random.default_rng(4))
        with self.assertRaises(ValueError):
            grid_search_solve(problem, 0.1)


class TestOracleAgreement(unittest.TestCase):

    def test_closed_form_matches_grid_search(self):
        for seed in range(20):
            rng = np.random.default_rng(seed)
            dim = 1 + seed % 2
            for gamma in (0.0, 0.1, 1.0):
                problem = SyntheticQuadratic.random(dim, rng, min_margin=gamma + 0.05)
                _, oracle_loss = synth_oracle_solve(problem, gamma)
                _, grid_loss = grid_search_solve(problem, gamma)
                self.assertLessEqual(abs(oracle_loss - grid_loss), 1e-3, f"seed {seed}, gamma {gamma}")

    def test_two_dimensional_el_against_grid(self):
        rng = np.random.default_rng(99)
        for index in range(5):
            problem = SyntheticQuadratic.random(2, rng, min_margin=0.15)
            report = optimal_gamma_el(problem, ELConfig(gamma=0.1, epsilon=1e-6))
            _, grid_loss = grid_search_solve(problem, 0.1)
            self.assertLessEqual(abs(report.train.loss - grid_loss), 1e-3, f"instance {index}")


if __name__ == "__main__":
    unittest.main()
