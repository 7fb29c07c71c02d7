"""
Tests for the trainer factory, the cell runner, result aggregation and the
input checks.
"""
import asyncio
import tempfile
import unittest
from pathlib import Path

import numpy as np
import pandas as pd

from src import constants
from src.config import settings
from src.exceptions import FeatureMapMismatchError
from src.preflight import check_inputs
from src.reporting.results import build_curves, format_summary, mean_std_cell, read_results, write_results
from src.schemas.core_schemas import FrozenFeatureMap, GroupedDataset, LossSpec
from src.schemas.fairness_schemas import LossSummary, SolveReport
from src.schemas.run_schemas import RunSpec
from src.services.runner import prepare_split, report_rows, run_cells
from src.services.trainers.trainer import FairBatchTrainer, OptimalELTrainer, PenaltyTrainer
from src.services.trainers.trainer_factory import get_trainer


def _row(algo: str, gamma: float, seed: int, split: str, loss: float, gap: float) -> dict:
    return {
        "algo": algo, "gamma": gamma, "seed": seed, "split": split,
        "loss": loss, "loss_g0": loss, "loss_g1": loss + gap, "gap": gap, "runtime_ms": 0,
    }


def _two_group_regression(n: int = 150) -> GroupedDataset:
    rng = np.random.default_rng(0)
    groups = (np.arange(n) % 4 == 0).astype(int)
    features = rng.normal(size=(n, 2))
    targets = np.where(groups == 1, -features[:, 0], 1.5 * features[:, 0]) + rng.normal(
        scale=np.where(groups == 1, 0.8, 0.2)
    )
    return GroupedDataset(features=features, targets=targets, groups=groups, numeric_columns=[0, 1])


class TestTrainerFactory(unittest.TestCase):

    def test_known_algorithms(self):
        self.assertIsInstance(get_trainer(constants.ALGO_OPTIMAL, 0.01, 0), OptimalELTrainer)
        for algo in constants.ALGORITHMS:
            self.assertEqual(get_trainer(algo, 0.01, 0).algorithm, algo)

    def test_fine_tuning_lowers_the_penalty_step(self):
        trainer = get_trainer(constants.ALGO_PENALTY, 0.01, 0, fine_tuned=True)
        self.assertIsInstance(trainer, PenaltyTrainer)
        self.assertEqual(trainer.cfg.lr, settings.penalty.fine_tune_lr)

    def test_fairbatch_takes_the_run_seed(self):
        trainer = get_trainer(constants.ALGO_FAIRBATCH, 0.01, 7)
        self.assertIsInstance(trainer, FairBatchTrainer)
        self.assertEqual(trainer.cfg.seed, 7)

    def test_unknown_algorithm(self):
        with self.assertRaises(ValueError):
            get_trainer("nope", 0.01, 0)


class TestRunner(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.run_spec = RunSpec(
            command=constants.COMMAND_SWEEP,
            algos=[constants.ALGO_OPTIMAL, constants.ALGO_LINEAR_RELAXATION],
            gammas=[0.1, 0.2],
            seeds=[0, 1],
            epsilon=1e-4,
            data=Path(self.tmp.name) / "unused.csv",
            schema_path=Path(self.tmp.name) / "unused.yaml",
            out=Path(self.tmp.name) / "results.csv",
        )

    def tearDown(self):
        self.tmp.cleanup()

    def test_one_train_and_one_test_row_per_cell(self):
        rows = asyncio.run(run_cells(self.run_spec, _two_group_regression()))
        self.assertEqual(len(rows), 2 * 2 * 2 * 2)
        keys = {(row["algo"], row["gamma"], row["seed"], row["split"]) for row in rows}
        self.assertEqual(len(keys), len(rows))

    def test_thread_count_does_not_change_results(self):
        data = _two_group_regression()
        serial = asyncio.run(run_cells(self.run_spec, data, threads=1))
        parallel = asyncio.run(run_cells(self.run_spec, data, threads=3))
        write_results(serial, Path(self.tmp.name) / "serial.csv")
        write_results(parallel, Path(self.tmp.name) / "parallel.csv")
        self.assertEqual(
            (Path(self.tmp.name) / "serial.csv").read_bytes(),
            (Path(self.tmp.name) / "parallel.csv").read_bytes(),
        )

    def test_runtime_is_zero_without_timing(self):
        report = SolveReport(
            w=np.zeros(1), algorithm="alg2", wallclock_ms=12,
            train=LossSummary(loss_g0=1.0, loss_g1=2.0, loss=1.5),
            test=LossSummary(loss_g0=1.0, loss_g1=1.5, loss=1.25),
        )
        rows = report_rows(report, "alg2", 0.1, 3, timing=False)
        self.assertEqual([row["runtime_ms"] for row in rows], [0, 0])
        self.assertEqual(report_rows(report, "alg2", 0.1, 3, timing=True)[0]["runtime_ms"], 12)
        self.assertEqual(rows[1]["gap"], 0.5)

    def test_feature_map_must_come_from_the_same_split(self):
        data = _two_group_regression()
        feature_map = FrozenFeatureMap(weights=np.ones((3, 2)), split_seed=0, train_ratio=0.7)
        train_problem, test_problem = prepare_split(data, LossSpec(), 0, 0.7, feature_map)
        self.assertEqual(train_problem.data.dim, feature_map.output_dim)
        self.assertEqual(test_problem.data.dim, feature_map.output_dim)
        with self.assertRaises(FeatureMapMismatchError):
            prepare_split(data, LossSpec(), 1, 0.7, feature_map)


class TestResults(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.rows = [
            _row("alg2", 0.1, 0, constants.SPLIT_TEST, 1.0, 0.1),
            _row("alg2", 0.1, 1, constants.SPLIT_TEST, 3.0, 0.3),
            _row("alg2", 0.2, 0, constants.SPLIT_TEST, 0.5, 0.2),
            _row("alg2", 0.1, 0, constants.SPLIT_TRAIN, 9.0, 0.9),
        ]

    def tearDown(self):
        self.tmp.cleanup()

    def test_mean_std_cell(self):
        self.assertEqual(mean_std_cell(pd.Series([1.0, 3.0])), "2.0000 ± 1.0000")

    def test_summary_groups_over_seeds(self):
        summary = format_summary(self.rows)
        self.assertIn("alg2 gamma=0.1 test (n=2): L=2.0000 ± 1.0000", summary)

    def test_curves_use_the_test_split(self):
        curve = build_curves(pd.DataFrame(self.rows))["alg2"]
        self.assertEqual(curve["gamma"].tolist(), [0.1, 0.2])
        self.assertAlmostEqual(curve["loss"].iloc[0], 2.0)
        self.assertAlmostEqual(curve["gap"].iloc[0], 0.2)
        self.assertEqual(curve["n_seeds"].tolist(), [2, 1])

    def test_duplicates_keep_the_last_file(self):
        first = write_results(self.rows, Path(self.tmp.name) / "first.csv")
        updated = [dict(self.rows[0], loss=5.0)]
        second = write_results(updated, Path(self.tmp.name) / "second.csv")
        merged = read_results([first, second])
        self.assertEqual(len(merged), len(self.rows))
        key = (merged["gamma"] == 0.1) & (merged["seed"] == 0) & (merged["split"] == constants.SPLIT_TEST)
        self.assertEqual(merged.loc[key, "loss"].tolist(), [5.0])


class TestPreflight(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.root = Path(self.tmp.name)
        (self.root / "data.csv").write_text("x\n1\n", encoding="utf-8")

    def tearDown(self):
        self.tmp.cleanup()

    def test_all_checks_pass(self):
        failures = check_inputs(constants.COMMAND_TRAIN, {
            "data": self.root / "data.csv", "schema": self.root / "data.csv",
            "feature_map": None, "out": self.root / "nested" / "results.csv",
        })
        self.assertEqual(failures, [])
        self.assertTrue((self.root / "nested").is_dir())

    def test_each_missing_file_is_reported(self):
        failures = check_inputs(constants.COMMAND_TRAIN, {
            "data": self.root / "absent.csv", "schema": self.root / "absent.yaml",
            "feature_map": self.root / "absent.npz", "out": self.root / "results.csv",
        })
        self.assertEqual(len(failures), 3)
        self.assertTrue(failures[0].startswith("dataset not found"))


if __name__ == "__main__":
    unittest.main()
