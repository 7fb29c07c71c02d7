"""
End-to-end tests for the command line: exit codes, result files, curve
reports and byte-identical reruns on the synthetic fixture.
"""
import contextlib
import io
import tempfile
import unittest
from pathlib import Path

import pandas as pd
from scipy.stats import spearmanr

import cli
from scripts.make_fixture import main as make_fixture
from src import constants
from src.core.feature_map import load_feature_map


SWEEP_GAMMAS = "0.025,0.05,0.1,0.15,0.2"


def _run(argv) -> tuple:
    """Run the CLI quietly; returns (exit code, captured stderr)."""
    stdout, stderr = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(stdout), contextlib.redirect_stderr(stderr):
        code = cli.main(["--log-level", "ERROR"] + list(argv))
    return code, stderr.getvalue()


class FixtureTestCase(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.root = Path(self.tmp.name)
        with contextlib.redirect_stdout(io.StringIO()):
            make_fixture(["--output", str(self.root / "fixture"), "--rows", "300", "--seed", "0"])
        self.csv = self.root / "fixture" / "fixture.csv"
        self.schema = self.root / "fixture" / "fixture.yaml"

    def tearDown(self):
        self.tmp.cleanup()

    def data_args(self):
        return ["--data", str(self.csv), "--schema", str(self.schema)]


class TestTrainCommand(FixtureTestCase):

    def test_alg2_row_is_fair(self):
        out = self.root / "alg2.csv"
        code, _ = _run(["train"] + self.data_args() + [
            "--algo", "alg2", "--gamma", "0", "--seeds", "0", "--epsilon", "1e-6", "--out", str(out)
        ])
        self.assertEqual(code, constants.EXIT_OK)
        results = pd.read_csv(out)
        self.assertEqual(list(results.columns), constants.RESULT_COLUMNS)
        self.assertEqual(sorted(results["split"]), [constants.SPLIT_TEST, constants.SPLIT_TRAIN])
        train = results[results["split"] == constants.SPLIT_TRAIN].iloc[0]
        self.assertEqual(train["algo"], "alg2")
        self.assertLessEqual(train["gap"], 1e-3)
        self.assertEqual(train["runtime_ms"], 0)

    def test_missing_dataset(self):
        code, stderr = _run(["train", "--data", str(self.root / "absent.csv"), "--schema", str(self.schema),
                             "--algo", "alg2", "--out", str(self.root / "out.csv")])
        self.assertEqual(code, constants.EXIT_INPUT_ERROR)
        self.assertIn("dataset not found", stderr)

    def test_unknown_algorithm_in_sweep(self):
        code, _ = _run(["sweep"] + self.data_args() + ["--algo", "alg2,nope", "--out", str(self.root / "out.csv")])
        self.assertEqual(code, constants.EXIT_INPUT_ERROR)

    def test_missing_required_flag(self):
        code, _ = _run(["train"] + self.data_args() + ["--out", str(self.root / "out.csv")])
        self.assertEqual(code, constants.EXIT_INPUT_ERROR)


class TestSweepAndReport(FixtureTestCase):

    def _sweep(self, out: Path, gammas: str, seeds: str) -> int:
        code, _ = _run(["sweep"] + self.data_args() + [
            "--algo", "alg2,alg3", "--gammas", gammas, "--seeds", seeds, "--epsilon", "1e-6", "--out", str(out)
        ])
        return code

    def test_reruns_are_byte_identical(self):
        first, second = self.root / "first.csv", self.root / "second.csv"
        self.assertEqual(self._sweep(first, "0.05,0.1", "0,1"), constants.EXIT_OK)
        self.assertEqual(self._sweep(second, "0.05,0.1", "0,1"), constants.EXIT_OK)
        self.assertEqual(first.read_bytes(), second.read_bytes())

    def test_report_writes_one_curve_per_algorithm(self):
        results = self.root / "sweep.csv"
        self.assertEqual(self._sweep(results, SWEEP_GAMMAS, "0"), constants.EXIT_OK)
        curves = self.root / "curves"
        # the same file twice exercises duplicate removal
        code, _ = _run(["report", str(results), str(results), "--out", str(curves)])
        self.assertEqual(code, constants.EXIT_OK)
        for algo in ("alg2", "alg3"):
            curve = pd.read_csv(curves / constants.CURVE_FILE_TEMPLATE.format(algo=algo))
            self.assertEqual(list(curve.columns), constants.CURVE_COLUMNS)
            self.assertEqual(len(curve), 5)
            self.assertTrue((curve["n_seeds"] == 1).all())

    def test_train_split_trade_off(self):
        results = self.root / "sweep.csv"
        self.assertEqual(self._sweep(results, SWEEP_GAMMAS, "0"), constants.EXIT_OK)
        frame = pd.read_csv(results)
        train = frame[frame["split"] == constants.SPLIT_TRAIN]
        for algo, block in train.groupby("algo"):
            block = block.sort_values("gamma")
            self.assertEqual(len(block), 5)
            self.assertLessEqual(spearmanr(block["gap"], block["loss"])[0], 0.0, algo)

    def test_report_rejects_foreign_columns(self):
        foreign = self.root / "foreign.csv"
        foreign.write_text("algo,gamma,loss\nalg2,0.1,0.5\n", encoding="utf-8")
        code, _ = _run(["report", str(foreign), "--out", str(self.root / "curves")])
        self.assertEqual(code, constants.EXIT_SCHEMA_ERROR)

    def test_report_missing_results(self):
        code, _ = _run(["report", str(self.root / "absent.csv"), "--out", str(self.root / "curves")])
        self.assertEqual(code, constants.EXIT_INPUT_ERROR)


class TestPretrainCommand(FixtureTestCase):

    def _pretrain(self, out: Path, seeds: str) -> int:
        code, _ = _run(["pretrain"] + self.data_args() + [
            "--seeds", seeds, "--hidden-units", "8", "--epochs", "50", "--out", str(out)
        ])
        return code

    def test_pretrained_map_feeds_training(self):
        feature_map = self.root / "map.npz"
        self.assertEqual(self._pretrain(feature_map, "0"), constants.EXIT_OK)
        self.assertTrue(feature_map.is_file())

        out = self.root / "mapped.csv"
        code, _ = _run(["train"] + self.data_args() + [
            "--algo", "alg3", "--gamma", "0.1", "--seeds", "0", "--feature-map", str(feature_map), "--out", str(out)
        ])
        self.assertEqual(code, constants.EXIT_OK)
        self.assertEqual(len(pd.read_csv(out)), 2)

    def test_fine_tuned_alg2_is_fair(self):
        feature_map = self.root / "map.npz"
        self.assertEqual(self._pretrain(feature_map, "0"), constants.EXIT_OK)
        out = self.root / "mapped.csv"
        code, _ = _run(["train"] + self.data_args() + [
            "--algo", "alg2", "--gamma", "0.1", "--seeds", "0", "--epsilon", "1e-4",
            "--feature-map", str(feature_map), "--out", str(out)
        ])
        self.assertEqual(code, constants.EXIT_OK)
        results = pd.read_csv(out)
        train = results[results["split"] == constants.SPLIT_TRAIN].iloc[0]
        self.assertLessEqual(train["gap"], 0.1 + 0.05)

    def test_one_map_per_seed(self):
        template = self.root / "maps" / "map_{seed}.npz"
        self.assertEqual(self._pretrain(template, "0,1"), constants.EXIT_OK)
        for seed in (0, 1):
            stored = load_feature_map(self.root / "maps" / f"map_{seed}.npz")
            self.assertEqual(stored.split_seed, seed)
            self.assertEqual(stored.train_ratio, 0.7)

        out = self.root / "mapped.csv"
        code, _ = _run(["train"] + self.data_args() + [
            "--algo", "alg3", "--gamma", "0.1", "--seeds", "0,1", "--feature-map", str(template), "--out", str(out)
        ])
        self.assertEqual(code, constants.EXIT_OK)
        self.assertEqual(sorted(pd.read_csv(out)["seed"].unique()), [0, 1])

    def test_map_of_another_seed_is_rejected(self):
        feature_map = self.root / "map.npz"
        self.assertEqual(self._pretrain(feature_map, "0"), constants.EXIT_OK)
        code, stderr = _run(["train"] + self.data_args() + [
            "--algo", "alg3", "--gamma", "0.1", "--seeds", "0,1", "--feature-map", str(feature_map),
            "--out", str(self.root / "mapped.csv")
        ])
        self.assertEqual(code, constants.EXIT_INPUT_ERROR)
        self.assertIn("seed=1", stderr)

    def test_several_seeds_need_a_template(self):
        self.assertEqual(self._pretrain(self.root / "map.npz", "0,1"), constants.EXIT_INPUT_ERROR)
        self.assertFalse((self.root / "map.npz").exists())


if __name__ == "__main__":
    unittest.main()
