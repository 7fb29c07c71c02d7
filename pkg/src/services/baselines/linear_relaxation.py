import logging
import math
import time
from typing import Optional

import numpy as np

from src import constants
from src.core.losses import EmpiricalLossProblem
from src.core.objectives import AffineObjective, LossProblem
from src.schemas.fairness_schemas import SolveReport
from src.schemas.solver_schemas import SolverConfig
from src.services.fairness.el_algorithms import summarize
from src.services.solver.level_constrained import minimize_level_constrained
from src.services.solver.newton import minimize_unconstrained

logger = logging.getLogger(__name__)


def relaxed_residual(problem: EmpiricalLossProblem) -> AffineObjective:
    """
    Linear surrogate r(w) of the group loss difference.

    Regression: mean residual of group 0 minus mean residual of group 1.
    Classification: difference of the group means of (y - 0.5) * w.x.
    """
    x0, y0 = problem.group_rows(0)
    x1, y1 = problem.group_rows(1)
    if problem.spec.kind == constants.LOSS_SQUARED_ERROR:
        return AffineObjective(x1.mean(axis=0) - x0.mean(axis=0), float(y0.mean() - y1.mean()))
    margin_0 = ((y0 - 0.5)[:, None] * x0).mean(axis=0)
    margin_1 = ((y1 - 0.5)[:, None] * x1).mean(axis=0)
    return AffineObjective(margin_0 - margin_1, 0.0)


def linear_relaxation_train(
    problem: LossProblem,
    gamma: float,
    cfg: Optional[SolverConfig] = None,
    holdout: Optional[LossProblem] = None,
) -> SolveReport:
    """min L(w) s.t. -gamma <= r(w) <= gamma; at most one side can bind since the two half-spaces are parallel."""
    if not isinstance(problem, EmpiricalLossProblem):
        raise TypeError(constants.ERROR_MESSAGE_REQUIRES_DATA.format(algo=constants.ALGO_LINEAR_RELAXATION))
    cfg = cfg or SolverConfig()
    started = time.perf_counter()
    objective = problem.overall_objective()
    residual = relaxed_residual(problem)

    w_o = minimize_unconstrained(objective, problem.zero_weights(), cfg)
    r_o = residual.value(w_o)
    if abs(r_o) <= gamma:
        logger.info(constants.LOG_LINRE_INACTIVE.format(residual=r_o, gamma=gamma))
        w, side, multiplier = w_o, None, 0.0
    else:
        side = "upper" if r_o > gamma else "lower"
        constraint = residual if side == "upper" else AffineObjective(-residual.slope, -residual.intercept)
        solution = minimize_level_constrained(objective, constraint, gamma, cfg, con_floor=-math.inf, start=w_o)
        w, multiplier = solution.w, solution.multiplier
        logger.info(constants.LOG_LINRE_ACTIVE.format(side=side, residual=residual.value(w), gamma=gamma))

    return SolveReport(
        w=np.asarray(w),
        algorithm=constants.ALGO_LINEAR_RELAXATION,
        train=summarize(problem, w),
        test=summarize(holdout, w) if holdout is not None else None,
        wallclock_ms=int(round((time.perf_counter() - started) * 1000.0)),
        extras={"relaxed_residual": residual.value(w), "active_side": side, "multiplier": multiplier},
    )
