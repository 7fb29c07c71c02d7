import logging
import time
from typing import List, Optional, Tuple

import numpy as np
import torch
from torch.utils.data import WeightedRandomSampler

from src import constants
from src.core.losses import EmpiricalLossProblem, mean_loss_gradient
from src.core.objectives import LossProblem
from src.exceptions import DivergenceError
from src.schemas.fairness_schemas import FairBatchConfig, SolveReport
from src.services.fairness.el_algorithms import summarize

from .optim import AdamStepper

logger = logging.getLogger(__name__)


def clip_sampling_rates(rates: np.ndarray) -> np.ndarray:
    clipped = np.clip(np.asarray(rates, dtype=float), constants.SR_FLOOR, constants.SR_CEILING)
    return clipped / clipped.sum()


def update_sampling_rates(rates: np.ndarray, loss_0: float, loss_1: float, gamma: float, alpha: float) -> np.ndarray:
    """Shift alpha of sampling mass toward the group whose loss exceeds the other's by more than gamma."""
    rates = np.array(rates, dtype=float)
    if loss_0 - loss_1 > gamma:
        rates += (alpha, -alpha)
    elif loss_1 - loss_0 > gamma:
        rates += (-alpha, alpha)
    return clip_sampling_rates(rates)


def _row_weights(groups: np.ndarray, rates: np.ndarray, counts: Tuple[int, int]) -> torch.Tensor:
    # a row of group a is drawn with probability SR_a / n_a
    per_group = np.array([rates[0] / counts[0], rates[1] / counts[1]])
    return torch.tensor(per_group[groups], dtype=torch.float64)


def fairbatch_train(
    problem: LossProblem,
    gamma: float,
    cfg: Optional[FairBatchConfig] = None,
    holdout: Optional[LossProblem] = None,
) -> SolveReport:
    """
    Mini-batch Adam where each batch row is drawn from group a with probability SR_a.

    After every epoch SR moves by ``cfg.alpha`` toward the group that is
    worse off by more than gamma. Stops when the overall loss changes by less
    than ``cfg.stop_delta`` between epochs or after ``cfg.max_epochs``.
    """
    if not isinstance(problem, EmpiricalLossProblem):
        raise TypeError(constants.ERROR_MESSAGE_REQUIRES_DATA.format(algo=constants.ALGO_FAIRBATCH))
    cfg = cfg or FairBatchConfig()
    started = time.perf_counter()

    features, targets, groups = problem.augmented, problem.data.targets, problem.data.groups
    counts = (problem.data.n_0, problem.data.n_1)
    n = problem.data.n
    batches = max(1, n // cfg.batch_size)
    generator = torch.Generator().manual_seed(cfg.seed)

    rates = clip_sampling_rates(np.array([counts[0] / n, counts[1] / n]))
    rate_trace: List[Tuple[float, float]] = [(float(rates[0]), float(rates[1]))]
    loss_trace: List[Tuple[float, float, float]] = []
    stepper = AdamStepper(problem.zero_weights(), cfg.lr)
    w = stepper.w
    previous_loss = None

    epoch = 0
    for epoch in range(1, cfg.max_epochs + 1):
        sampler = WeightedRandomSampler(
            _row_weights(groups, rates, counts),
            num_samples=batches * cfg.batch_size,
            replacement=True,
            generator=generator,
        )
        drawn = np.fromiter(iter(sampler), dtype=np.int64).reshape(batches, cfg.batch_size)
        for batch in drawn:
            w = stepper.step(mean_loss_gradient(w, features[batch], targets[batch], problem.spec.kind, problem.spec.eta))

        l0, l1, loss = problem.group_losses(w)
        if not (np.all(np.isfinite(w)) and np.isfinite(loss)):
            raise DivergenceError(
                constants.ERROR_MESSAGE_DIVERGED.format(algo=constants.ALGO_FAIRBATCH, iteration=epoch),
                trace=rate_trace,
            )
        loss_trace.append((l0, l1, loss))
        rates = update_sampling_rates(rates, l0, l1, gamma, cfg.alpha)
        rate_trace.append((float(rates[0]), float(rates[1])))
        logger.debug(constants.LOG_FAIRBATCH_EPOCH.format(
            epoch=epoch, l0=l0, l1=l1, loss=loss, sr0=rates[0], sr1=rates[1]
        ))
        if previous_loss is not None and abs(loss - previous_loss) < cfg.stop_delta:
            break
        previous_loss = loss

    logger.info(constants.LOG_FAIRBATCH_STOPPED.format(epochs=epoch))
    return SolveReport(
        w=w,
        algorithm=constants.ALGO_FAIRBATCH,
        train=summarize(problem, w),
        test=summarize(holdout, w) if holdout is not None else None,
        wallclock_ms=int(round((time.perf_counter() - started) * 1000.0)),
        extras={"sampling_rates": rate_trace, "epoch_losses": loss_trace, "epochs": epoch},
    )
