import logging
from typing import Optional, Tuple

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from src import constants
from src.core.objectives import Objective
from src.exceptions import ConvergenceError, NonFiniteObjectiveError
from src.schemas.solver_schemas import SolverConfig

logger = logging.getLogger(__name__)

_MAX_BACKTRACKS = 60
# predicted decreases below this many ulps of f are not resolvable by comparing values
_VALUE_RESOLUTION = 64.0 * np.finfo(float).eps


def _newton_direction(hessian: np.ndarray, gradient: np.ndarray) -> Optional[np.ndarray]:
    try:
        factor = cho_factor(hessian, check_finite=True)
    except (LinAlgError, ValueError):
        return None
    return -cho_solve(factor, gradient)


def _below_resolution(value: float, gradient: np.ndarray, direction: np.ndarray) -> bool:
    return -float(gradient @ direction) <= _VALUE_RESOLUTION * max(1.0, abs(value))


def _backtrack(
    objective: Objective,
    w: np.ndarray,
    value: float,
    gradient: np.ndarray,
    direction: np.ndarray,
    cfg: SolverConfig,
) -> Optional[Tuple[np.ndarray, float, float]]:
    """Armijo backtracking; only a strict decrease of f at a moved point counts as progress."""
    slope = float(gradient @ direction)
    if slope >= 0.0:
        return None
    step = 1.0
    for _ in range(_MAX_BACKTRACKS):
        candidate = w + step * direction
        if np.array_equal(candidate, w):
            return None
        candidate_value = objective.value(candidate)
        if (
            np.isfinite(candidate_value)
            and candidate_value < value
            and candidate_value <= value + cfg.line_search.sufficient_decrease * step * slope
        ):
            return candidate, candidate_value, step
        step *= cfg.line_search.shrink
    return None


def _gradient_shrinking_step(objective: Objective, w: np.ndarray, direction: np.ndarray, grad_norm: float) -> Optional[np.ndarray]:
    candidate = w + direction
    candidate_grad = objective.gradient(candidate)
    if np.all(np.isfinite(candidate_grad)) and np.max(np.abs(candidate_grad), initial=0.0) < grad_norm:
        return candidate
    return None


def minimize_unconstrained(objective: Objective, start: np.ndarray, cfg: Optional[SolverConfig] = None) -> np.ndarray:
    """
    Damped Newton with Armijo backtracking; a gradient step is tried whenever
    the Newton step fails to decrease f. Once the decrease predicted by the
    Newton step is below the resolution of f, the full step is taken when it
    shrinks the gradient instead.
    """
    cfg = cfg or SolverConfig()
    w = np.array(start, dtype=float, copy=True)
    value = objective.value(w)
    if not np.isfinite(value):
        raise NonFiniteObjectiveError(constants.ERROR_MESSAGE_NON_FINITE_START)

    grad_norm = np.inf
    for iteration in range(cfg.max_newton_iters):
        gradient = objective.gradient(w)
        grad_norm = float(np.max(np.abs(gradient))) if gradient.size else 0.0
        if grad_norm <= cfg.grad_tol:
            logger.debug(constants.LOG_NEWTON_CONVERGED.format(iterations=iteration, grad_norm=grad_norm))
            return w

        newton = _newton_direction(objective.hessian(w), gradient)
        if newton is not None and _below_resolution(value, gradient, newton):
            candidate = _gradient_shrinking_step(objective, w, newton, grad_norm)
            if candidate is None:
                raise ConvergenceError(
                    constants.ERROR_MESSAGE_NEWTON_STALLED.format(iteration=iteration, grad_norm=grad_norm),
                    best_iterate=w,
                )
            logger.debug(constants.LOG_NEWTON_FLAT_STEP.format(iteration=iteration, grad_norm=grad_norm))
            w = candidate
            value = objective.value(w)
            continue

        result = None
        if newton is not None:
            result = _backtrack(objective, w, value, gradient, newton, cfg)
        if result is None:
            logger.debug(constants.LOG_NEWTON_GRADIENT_FALLBACK.format(iteration=iteration))
            result = _backtrack(objective, w, value, gradient, -gradient, cfg)
        if result is None:
            candidate = _gradient_shrinking_step(objective, w, newton, grad_norm) if newton is not None else None
            if candidate is None:
                raise ConvergenceError(
                    constants.ERROR_MESSAGE_NEWTON_STALLED.format(iteration=iteration, grad_norm=grad_norm),
                    best_iterate=w,
                )
            w = candidate
            value = objective.value(w)
            continue
        w, value, step = result
        logger.debug(constants.LOG_NEWTON_ITERATION.format(
            iteration=iteration, value=value, grad_norm=grad_norm, step=step
        ))

    gradient = objective.gradient(w)
    grad_norm = float(np.max(np.abs(gradient))) if gradient.size else 0.0
    if grad_norm <= cfg.grad_tol:
        return w
    raise ConvergenceError(
        constants.ERROR_MESSAGE_NEWTON_BUDGET.format(budget=cfg.max_newton_iters, grad_norm=grad_norm),
        best_iterate=w,
    )
