import logging
import time
from typing import Dict, List, Optional

import numpy as np

from src import constants
from src.core.objectives import LossProblem
from src.exceptions import DivergenceError
from src.schemas.fairness_schemas import PenaltyConfig, SolveReport
from src.services.fairness.el_algorithms import summarize

from .optim import AdamStepper

logger = logging.getLogger(__name__)


def _penalized(loss: float, gap: float, gamma: float, t: float) -> float:
    return loss + t * max(0.0, abs(gap) - gamma) ** 2


def penalty_train(
    problem: LossProblem,
    gamma: float,
    cfg: Optional[PenaltyConfig] = None,
    holdout: Optional[LossProblem] = None,
) -> SolveReport:
    """
    Adam on L(w) + t * max(0, |L_0(w) - L_1(w)| - gamma)^2 starting from w = 0.

    t starts at ``cfg.t0`` and is multiplied by ``cfg.growth`` every
    ``cfg.grow_every`` iterations. The run stops once both L and the gap move
    by less than ``cfg.stop_delta`` between two consecutive stage ends.
    """
    cfg = cfg or PenaltyConfig()
    started = time.perf_counter()
    loss_0, loss_1 = problem.group_objective(0), problem.group_objective(1)
    p0, p1 = problem.group_weights

    stepper = AdamStepper(problem.zero_weights(), cfg.lr)
    w = stepper.w
    t = cfg.t0
    stages: List[Dict[str, float]] = []
    l0, l1, loss = problem.group_losses(w)
    stage_start = _penalized(loss, l0 - l1, gamma, t)
    previous_end = None

    iteration = 0
    for iteration in range(1, cfg.max_iters + 1):
        gap = l0 - l1
        gradient = p0 * loss_0.gradient(w) + p1 * loss_1.gradient(w)
        violation = max(0.0, abs(gap) - gamma)
        if violation > 0.0:
            gradient = gradient + 2.0 * t * violation * np.sign(gap) * (loss_0.gradient(w) - loss_1.gradient(w))
        w = stepper.step(gradient)

        l0, l1, loss = problem.group_losses(w)
        if not (np.all(np.isfinite(w)) and np.isfinite(loss)):
            raise DivergenceError(
                constants.ERROR_MESSAGE_DIVERGED.format(algo=constants.ALGO_PENALTY, iteration=iteration),
                trace=stages,
            )

        if iteration % cfg.grow_every == 0:
            stage_end = _penalized(loss, l0 - l1, gamma, t)
            stages.append({"t": t, "start": stage_start, "end": stage_end, "loss": loss, "gap": abs(l0 - l1)})
            logger.debug(constants.LOG_PENALTY_STAGE.format(t=t, start=stage_start, end=stage_end, gap=abs(l0 - l1)))
            if previous_end is not None \
                    and abs(loss - previous_end[0]) < cfg.stop_delta \
                    and abs(abs(l0 - l1) - previous_end[1]) < cfg.stop_delta:
                break
            previous_end = (loss, abs(l0 - l1))
            t *= cfg.growth
            stage_start = _penalized(loss, l0 - l1, gamma, t)

    logger.info(constants.LOG_PENALTY_STOPPED.format(iterations=iteration, t=t))
    return SolveReport(
        w=w,
        algorithm=constants.ALGO_PENALTY,
        train=summarize(problem, w),
        test=summarize(holdout, w) if holdout is not None else None,
        wallclock_ms=int(round((time.perf_counter() - started) * 1000.0)),
        extras={"stages": stages, "iterations": iteration, "final_t": t},
    )
