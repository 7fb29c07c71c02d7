"""
Tests for the equalized-loss algorithms on hand-derived 1-D fixtures and on
random two-group quadratics checked against the independent oracle.
"""
import unittest

import numpy as np

from src.data.synthetic import SyntheticQuadratic, synth_oracle_solve
from src.exceptions import AssumptionViolationError
from src.schemas.fairness_schemas import ELConfig, LossSummary, SolveReport
from src.services.fairness.el_algorithms import (
    bgl_report,
    check_assumption2,
    el_minimizer,
    group_optima,
    optimal_gamma_el,
    segment_curves,
    suboptimal_gamma_el,
)


BETAS = [round(0.05 * k, 2) for k in range(21)]


def _symmetric(group_weights=(0.5, 0.5)) -> SyntheticQuadratic:
    """L_0 = (w - 1)^2, L_1 = (w + 1)^2."""
    return SyntheticQuadratic.scalar(1.0, -1.0, group_weights=group_weights)


def _random_instances(count: int, min_margin: float, seed: int):
    rng = np.random.default_rng(seed)
    return [SyntheticQuadratic.random(1 + k % 3, rng, min_margin=min_margin) for k in range(count)]


class TestGroupOptima(unittest.TestCase):

    def test_symmetric_pair(self):
        w_g0, w_g1, w_o = group_optima(_symmetric())
        self.assertAlmostEqual(float(w_g0[0]), 1.0, places=10)
        self.assertAlmostEqual(float(w_g1[0]), -1.0, places=10)
        self.assertAlmostEqual(float(w_o[0]), 0.0, places=10)

    def test_weighted_overall_optimum(self):
        _, _, w_o = group_optima(_symmetric((0.75, 0.25)))
        self.assertAlmostEqual(float(w_o[0]), 0.5, places=10)


class TestCheckAssumption2(unittest.TestCase):

    def test_symmetric_pair_holds(self):
        check = check_assumption2(np.array([1.0]), np.array([-1.0]), _symmetric())
        self.assertTrue(check.holds)
        self.assertEqual(check.margins, (4.0, 4.0))

    def test_identical_groups_sit_on_the_boundary(self):
        problem = SyntheticQuadratic.scalar(0.0, 0.0)
        check = check_assumption2(np.zeros(1), np.zeros(1), problem)
        self.assertTrue(check.holds)
        self.assertEqual(check.margins, (0.0, 0.0))

    def test_constant_offset_fails(self):
        problem = SyntheticQuadratic.scalar(0.0, 0.0, offsets=(0.0, 5.0))
        check = check_assumption2(np.zeros(1), np.zeros(1), problem)
        self.assertFalse(check.holds)
        self.assertEqual(check.margins, (5.0, -5.0))


class TestELMinimizer(unittest.TestCase):
    def setUp(self):
        self.w_g0 = np.array([1.0])
        self.w_g1 = np.array([-1.0])

    def test_symmetric_crossing(self):
        report = el_minimizer(self.w_g0, self.w_g1, 1e-8, 0.0, _symmetric())
        self.assertAlmostEqual(float(report.w[0]), 0.0, places=6)
        self.assertAlmostEqual(report.train.loss, 1.0, places=6)

    def test_positive_gamma_side(self):
        report = el_minimizer(self.w_g0, self.w_g1, 1e-8, 1.0, _symmetric((0.75, 0.25)))
        self.assertAlmostEqual(float(report.w[0]), -0.25, places=5)
        self.assertAlmostEqual(report.train.loss, 1.3125, places=5)

    def test_intervals_halve_and_nest(self):
        report = el_minimizer(self.w_g0, self.w_g1, 1e-3, 0.0, _symmetric())
        steps = report.trace.iterations
        self.assertEqual(steps[0].start, 0.0)
        self.assertEqual(steps[0].end, 4.0)
        for previous, current in zip(steps, steps[1:]):
            self.assertAlmostEqual(current.end - current.start, 0.5 * (previous.end - previous.start), places=12)
            self.assertGreaterEqual(current.start, previous.start)
            self.assertLessEqual(current.end, previous.end)
        low, high = report.final_bracket
        self.assertLessEqual(high - low, 1e-3)

    def test_gamma_outside_the_margins(self):
        with self.assertRaises(AssumptionViolationError):
            el_minimizer(self.w_g0, self.w_g1, 1e-3, 5.0, _symmetric())

    def test_epsilon_must_be_positive(self):
        with self.assertRaises(ValueError):
            el_minimizer(self.w_g0, self.w_g1, 0.0, 0.0, _symmetric())


class TestOptimalGammaEL(unittest.TestCase):
    def setUp(self):
        self.problem = _symmetric((0.75, 0.25))

    def test_cheaper_branch_wins(self):
        report = optimal_gamma_el(self.problem, ELConfig(gamma=1.0, epsilon=1e-8))
        self.assertAlmostEqual(float(report.w[0]), 0.25, places=4)
        self.assertAlmostEqual(report.train.loss, 0.8125, places=4)
        self.assertEqual(report.extras["branch"], "-")
        self.assertAlmostEqual(report.extras["branch_losses"]["+"], 1.3125, places=4)

    def test_feasible_unconstrained_optimum(self):
        report = optimal_gamma_el(self.problem, ELConfig(gamma=2.5, epsilon=1e-4))
        self.assertAlmostEqual(float(report.w[0]), 0.5, places=10)
        self.assertTrue(report.extras["unconstrained_feasible"])

    def test_symmetric_pair_at_zero_gamma(self):
        report = optimal_gamma_el(_symmetric(), ELConfig(gamma=0.0, epsilon=1e-8))
        self.assertAlmostEqual(float(report.w[0]), 0.0, places=6)
        self.assertAlmostEqual(report.train.loss, 1.0, places=6)

    def test_assumption_violation(self):
        problem = SyntheticQuadratic.scalar(0.0, 0.0, offsets=(0.0, 5.0))
        with self.assertRaises(AssumptionViolationError) as caught:
            optimal_gamma_el(problem, ELConfig(gamma=1.0))
        self.assertEqual(caught.exception.margins, (5.0, -5.0))

    def test_test_split_is_summarized(self):
        holdout = _symmetric((0.5, 0.5))
        report = optimal_gamma_el(self.problem, ELConfig(gamma=1.0, epsilon=1e-6), holdout)
        self.assertIsNotNone(report.test)
        self.assertAlmostEqual(report.test.loss, 0.5 * (0.75 ** 2 + 1.25 ** 2), places=4)


class TestSuboptimalGammaEL(unittest.TestCase):

    def test_matches_optimal_on_the_weighted_pair(self):
        report = suboptimal_gamma_el(_symmetric((0.75, 0.25)), ELConfig(gamma=1.0, epsilon=1e-8))
        self.assertAlmostEqual(float(report.w[0]), 0.25, places=4)
        self.assertAlmostEqual(report.extras["beta"], 1.0 / 6.0, places=6)
        self.assertEqual(report.extras["disadvantaged"], 1)

    def test_tie_goes_to_group_zero(self):
        report = suboptimal_gamma_el(_symmetric(), ELConfig(gamma=0.0))
        self.assertEqual(report.extras["disadvantaged"], 0)
        self.assertAlmostEqual(float(report.w[0]), 0.0, places=10)

    def test_segment_never_reaches_the_band(self):
        problem = SyntheticQuadratic.scalar(0.0, 0.0, offsets=(0.0, 5.0))
        with self.assertRaises(AssumptionViolationError):
            suboptimal_gamma_el(problem, ELConfig(gamma=1.0))


class TestTheoremProperties(unittest.TestCase):
    def setUp(self):
        self.instances = _random_instances(20, min_margin=0.0, seed=11)

    def test_segment_monotonicity(self):
        for index, problem in enumerate(self.instances):
            samples = segment_curves(problem, BETAS)
            gaps = [g for _, g, _ in samples]
            losses = [h for _, _, h in samples]
            for k in range(1, len(samples)):
                self.assertGreaterEqual(losses[k], losses[k - 1] - 1e-9, f"instance {index}, h at beta {BETAS[k]}")
                self.assertLessEqual(gaps[k], gaps[k - 1] + 1e-9, f"instance {index}, g at beta {BETAS[k]}")

    def test_suboptimal_loss_bound(self):
        for index, problem in enumerate(self.instances):
            w_o = problem.pareto_point(0.0)
            l0, l1, _ = problem.group_losses(w_o)
            for gamma in (0.0, 0.1, 0.5):
                report = suboptimal_gamma_el(problem, ELConfig(gamma=gamma, epsilon=1e-6))
                self.assertLessEqual(report.train.loss, max(l0, l1) + 1e-9, f"instance {index}, gamma {gamma}")

    def test_optimal_dominates_suboptimal(self):
        instances = _random_instances(10, min_margin=0.25, seed=5)
        for index, problem in enumerate(instances):
            for gamma in (0.0, 0.2):
                cfg = ELConfig(gamma=gamma, epsilon=1e-8)
                optimal = optimal_gamma_el(problem, cfg)
                suboptimal = suboptimal_gamma_el(problem, cfg)
                self.assertLessEqual(optimal.train.loss, suboptimal.train.loss + 1e-4, f"instance {index}")


class TestOracleEquivalence(unittest.TestCase):

    def test_fifty_random_instances(self):
        rng = np.random.default_rng(2023)
        for index in range(50):
            gamma = float(rng.choice([0.0, 0.05, 0.2]))
            problem = SyntheticQuadratic.random(1 + index % 3, rng, min_margin=gamma + 0.05)
            report = optimal_gamma_el(problem, ELConfig(gamma=gamma, epsilon=1e-6))
            _, oracle_loss = synth_oracle_solve(problem, gamma)
            self.assertLessEqual(abs(report.train.loss - oracle_loss), 1e-3, f"instance {index}")
            self.assertLessEqual(report.gap, gamma + 1e-3, f"instance {index}")


class TestFeasibilityTolerance(unittest.TestCase):

    def test_optimal_never_fails_on_valid_instances(self):
        for seed in range(5):
            rng = np.random.default_rng(seed)
            for index in range(40):
                gamma = float(rng.choice([0.0, 0.05, 0.2]))
                problem = SyntheticQuadratic.random(1 + index % 3, rng, min_margin=gamma + 0.05)
                report = optimal_gamma_el(problem, ELConfig(gamma=gamma))
                self.assertLessEqual(report.gap, gamma + 2.0 * report.tolerance + 1e-9, f"seed {seed}, instance {index}")

    def test_gap_within_reported_tolerance(self):
        for index, problem in enumerate(_random_instances(30, min_margin=0.8, seed=17)):
            for gamma in (0.0, 0.1, 0.3):
                cfg = ELConfig(gamma=gamma)
                for report in (optimal_gamma_el(problem, cfg), suboptimal_gamma_el(problem, cfg)):
                    self.assertGreaterEqual(report.tolerance, 0.0)
                    self.assertLessEqual(
                        report.gap, gamma + report.tolerance + 1e-8, f"{report.algorithm}, instance {index}, gamma {gamma}"
                    )

    def test_tolerance_of_the_level_bisection(self):
        report = el_minimizer(
            np.array([1.0]), np.array([-1.0]), 0.01, 0.0, _symmetric()
        )
        start, end = report.final_bracket
        self.assertLessEqual(end - start, 0.01)
        self.assertAlmostEqual(report.tolerance, (end - start) * (1.0 + report.extras["start_multiplier"]))
        self.assertLessEqual(report.gap, report.tolerance + 1e-9)


class TestBGL(unittest.TestCase):

    def _report(self, l0: float, l1: float) -> SolveReport:
        return SolveReport(w=np.zeros(1), algorithm="alg2", train=LossSummary(loss_g0=l0, loss_g1=l1, loss=0.5 * (l0 + l1)))

    def test_exact_equalized_loss(self):
        bgl = bgl_report(self._report(0.8, 0.8), 0.0)
        self.assertEqual((bgl.min_loss, bgl.max_loss, bgl.bgl_level_satisfied), (0.8, 0.8, 0.8))

    def test_level_is_the_larger_loss(self):
        self.assertEqual(bgl_report(self._report(0.3, 0.5), 0.2).bgl_level_satisfied, 0.5)

    def test_el_optimum_is_bounded_when_bgl_is_feasible(self):
        grid = np.linspace(-2.0, 2.0, 4001).reshape(-1, 1)
        checked = 0
        for p0 in (0.5, 0.7, 0.9):
            problem = SyntheticQuadratic.scalar(0.5, -0.5, group_weights=(p0, 1.0 - p0))
            l0_grid, l1_grid = problem.batch_losses(grid)
            for gamma in (0.26, 0.3, 0.5):
                if np.min(np.maximum(l0_grid, l1_grid)) > gamma:
                    continue
                bgl = bgl_report(optimal_gamma_el(problem, ELConfig(gamma=gamma, epsilon=1e-8)), gamma)
                self.assertLessEqual(bgl.min_loss, gamma + 1e-6)
                self.assertLessEqual(bgl.max_loss, 2.0 * gamma + 1e-6)
                checked += 1
        self.assertEqual(checked, 9)


if __name__ == "__main__":
    unittest.main()
