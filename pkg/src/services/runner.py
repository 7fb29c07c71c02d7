import asyncio
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Dict, List, Optional, Tuple

from src import constants
from src.cell_context import cell_label, run_cell
from src.config import settings
from src.core.feature_map import apply_feature_map, check_feature_map_split
from src.core.losses import EmpiricalLossProblem
from src.data.splits import train_test_split
from src.schemas.core_schemas import FrozenFeatureMap, GroupedDataset, LossSpec
from src.schemas.fairness_schemas import LossSummary, SolveReport
from src.schemas.run_schemas import RunSpec
from src.services.trainers.trainer_factory import get_trainer

logger = logging.getLogger(__name__)

Row = Dict[str, Any]
SplitProblems = Tuple[EmpiricalLossProblem, EmpiricalLossProblem]


def prepare_split(
    data: GroupedDataset,
    spec: LossSpec,
    seed: int,
    ratio: float,
    feature_map: Optional[FrozenFeatureMap] = None,
) -> SplitProblems:
    """Split by seed, then lift both sides through the map pre-trained on that same train split."""
    train, test = train_test_split(data, ratio, seed)
    if feature_map is not None:
        check_feature_map_split(feature_map, seed, ratio)
        train, test = apply_feature_map(feature_map, train), apply_feature_map(feature_map, test)
    return EmpiricalLossProblem(train, spec), EmpiricalLossProblem(test, spec)


def _row(algo: str, gamma: float, seed: int, split: str, summary: LossSummary, runtime_ms: int) -> Row:
    return {
        "algo": algo,
        "gamma": gamma,
        "seed": seed,
        "split": split,
        "loss": summary.loss,
        "loss_g0": summary.loss_g0,
        "loss_g1": summary.loss_g1,
        "gap": summary.gap,
        "runtime_ms": runtime_ms,
    }


def report_rows(report: SolveReport, algo: str, gamma: float, seed: int, timing: bool) -> List[Row]:
    runtime_ms = report.wallclock_ms if timing else 0
    rows = [_row(algo, gamma, seed, constants.SPLIT_TRAIN, report.train, runtime_ms)]
    if report.test is not None:
        rows.append(_row(algo, gamma, seed, constants.SPLIT_TEST, report.test, runtime_ms))
    return rows


def run_one_cell(algo: str, gamma: float, seed: int, problems: SplitProblems, run_spec: RunSpec) -> List[Row]:
    train_problem, test_problem = problems
    with run_cell(cell_label(algo, gamma, seed)):
        trainer = get_trainer(algo, run_spec.epsilon, seed, fine_tuned=run_spec.feature_map is not None)
        report = trainer.train(train_problem, gamma, test_problem)
    return report_rows(report, algo, gamma, seed, run_spec.timing)


class ResultAppender:
    """Collects rows from finished cells; only the event loop thread appends."""

    def __init__(self):
        self.rows: List[Row] = []

    def append(self, rows: List[Row]) -> None:
        self.rows.extend(rows)


async def run_cells(
    run_spec: RunSpec,
    data: GroupedDataset,
    feature_maps: Optional[Dict[int, FrozenFeatureMap]] = None,
    threads: Optional[int] = None,
) -> List[Row]:
    """Run every (algo, gamma, seed) cell on a thread pool; splits are built once per seed, each with its own feature map."""
    loss_spec = LossSpec(kind=run_spec.loss, eta=run_spec.eta)
    feature_maps = feature_maps or {}
    splits = {
        seed: prepare_split(data, loss_spec, seed, run_spec.train_ratio, feature_maps.get(seed))
        for seed in run_spec.seeds
    }
    cells = [(algo, gamma, seed) for algo in run_spec.algos for gamma in run_spec.gammas for seed in run_spec.seeds]
    threads = threads or settings.threads
    logger.info(constants.LOG_RUN_START.format(cells=len(cells), threads=threads))

    appender = ResultAppender()
    loop = asyncio.get_running_loop()
    with ThreadPoolExecutor(max_workers=threads) as executor:
        futures = [
            loop.run_in_executor(executor, run_one_cell, algo, gamma, seed, splits[seed], run_spec)
            for algo, gamma, seed in cells
        ]
        for finished in asyncio.as_completed(futures):
            appender.append(await finished)
    return appender.rows
