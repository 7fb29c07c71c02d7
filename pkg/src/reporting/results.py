import logging
from pathlib import Path
from typing import Dict, Iterable, List, Union

import pandas as pd

from src import constants
from src.exceptions import SchemaError

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.12g"
_SUMMARY_METRICS = [("L", "loss"), ("L0", "loss_g0"), ("L1", "loss_g1"), ("gap", "gap")]


def results_frame(rows: List[Dict]) -> pd.DataFrame:
    frame = pd.DataFrame(rows, columns=constants.RESULT_COLUMNS)
    return frame.sort_values(constants.RESULT_KEY_COLUMNS, kind="mergesort").reset_index(drop=True)


def write_results(rows: List[Dict], path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    results_frame(rows).to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    logger.info(constants.LOG_RUN_COMPLETE.format(rows=len(rows), path=path))
    return path


def mean_std_cell(values: pd.Series) -> str:
    """Table cell 'mean ± std' with the population standard deviation."""
    return f"{values.mean():.4f} ± {values.std(ddof=0):.4f}"


def format_summary(rows: List[Dict]) -> str:
    """One line per (algo, gamma, split) with mean ± std of L, L0, L1 and gap over seeds."""
    frame = results_frame(rows)
    lines = []
    for (algo, gamma, split), block in frame.groupby(["algo", "gamma", "split"], sort=True):
        cells = "  ".join(f"{label}={mean_std_cell(block[column])}" for label, column in _SUMMARY_METRICS)
        lines.append(f"{algo} gamma={gamma:g} {split} (n={len(block)}): {cells}")
    return "\n".join(lines)


def read_results(paths: Iterable[Union[str, Path]]) -> pd.DataFrame:
    frames = []
    for path in paths:
        path = Path(path)
        if not path.is_file():
            raise FileNotFoundError(constants.ERROR_MESSAGE_RESULTS_NOT_FOUND.format(path=path))
        frame = pd.read_csv(path)
        if list(frame.columns) != constants.RESULT_COLUMNS:
            raise SchemaError(constants.ERROR_MESSAGE_RESULT_COLUMNS.format(
                path=path, actual=list(frame.columns), expected=constants.RESULT_COLUMNS
            ))
        frames.append(frame)
    merged = pd.concat(frames, ignore_index=True) if frames else pd.DataFrame(columns=constants.RESULT_COLUMNS)
    deduplicated = merged.drop_duplicates(subset=constants.RESULT_KEY_COLUMNS, keep="last")
    dropped = len(merged) - len(deduplicated)
    if dropped:
        logger.warning(constants.LOG_REPORT_DUPLICATES.format(count=dropped))
    return deduplicated.reset_index(drop=True)


def build_curves(results: pd.DataFrame) -> Dict[str, pd.DataFrame]:
    """Per algorithm: test-split gap (x) and loss (y) averaged over seeds at each gamma."""
    test = results[results["split"] == constants.SPLIT_TEST]
    curves = {}
    for algo, block in test.groupby("algo", sort=True):
        grouped = block.groupby("gamma", sort=True)
        curve = pd.DataFrame({
            "gamma": grouped["gap"].mean().index,
            "gap": grouped["gap"].mean().to_numpy(),
            "loss": grouped["loss"].mean().to_numpy(),
            "gap_std": grouped["gap"].std(ddof=0).to_numpy(),
            "loss_std": grouped["loss"].std(ddof=0).to_numpy(),
            "n_seeds": grouped["seed"].nunique().to_numpy(),
        })
        curves[str(algo)] = curve[constants.CURVE_COLUMNS]
    return curves


def run_report(paths: Iterable[Union[str, Path]], out_dir: Union[str, Path]) -> List[Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for algo, curve in build_curves(read_results(paths)).items():
        path = out_dir / constants.CURVE_FILE_TEMPLATE.format(algo=algo)
        curve.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
        logger.info(constants.LOG_REPORT_CURVE.format(rows=len(curve), path=path))
        written.append(path)
    return written
