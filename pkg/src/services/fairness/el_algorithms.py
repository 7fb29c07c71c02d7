"""
Equalized-loss training for convex models.

``el_minimizer`` bisects over a loss level lambda; each step solves
min L~_1(w) s.t. L_0(w) <= lambda with L~_1 = L_1 + gamma.
``optimal_gamma_el`` runs it on both sides of the gamma band and keeps the
cheaper solution. ``suboptimal_gamma_el`` only searches the segment between
the overall optimum and the disadvantaged group's optimum.
"""
import logging
import time
from typing import List, Optional, Tuple

import numpy as np

from src import constants
from src.core.objectives import LossProblem, ShiftedObjective
from src.exceptions import SOLVER_ERRORS, AssumptionViolationError, BranchFailureError
from src.schemas.fairness_schemas import (
    AssumptionCheck,
    BGLReport,
    BisectionStep,
    BisectionTrace,
    ELConfig,
    LossSummary,
    SolveReport,
)
from src.schemas.solver_schemas import SolverConfig
from src.services.solver.level_constrained import LevelConstrainedSolver
from src.services.solver.newton import minimize_unconstrained

logger = logging.getLogger(__name__)

# slack on the reported gap before a branch counts as infeasible, in units of its tolerance
_BRANCH_FEASIBILITY_FACTOR = 2.0
_BRANCH_FEASIBILITY_FLOOR = 1e-9


def summarize(problem: LossProblem, w: np.ndarray) -> LossSummary:
    l0, l1, loss = problem.group_losses(w)
    return LossSummary(loss_g0=l0, loss_g1=l1, loss=loss)


def _elapsed_ms(started: float) -> int:
    return int(round((time.perf_counter() - started) * 1000.0))


def _report(
    problem: LossProblem,
    w: np.ndarray,
    algorithm: str,
    started: float,
    holdout: Optional[LossProblem] = None,
    **fields,
) -> SolveReport:
    return SolveReport(
        w=w,
        algorithm=algorithm,
        train=summarize(problem, w),
        test=summarize(holdout, w) if holdout is not None else None,
        wallclock_ms=_elapsed_ms(started),
        **fields,
    )


def group_optima(problem: LossProblem, cfg: Optional[SolverConfig] = None) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(w_G0, w_G1, w_O): minimizers of L_0, L_1 and L = p_0 L_0 + p_1 L_1."""
    cfg = cfg or SolverConfig()
    start = problem.zero_weights()
    w_g0 = minimize_unconstrained(problem.group_objective(0), start, cfg)
    w_g1 = minimize_unconstrained(problem.group_objective(1), start, cfg)
    w_o = minimize_unconstrained(problem.overall_objective(), start, cfg)
    logger.info(constants.LOG_EL_GROUP_OPTIMA.format(
        l0_g0=problem.group_objective(0).value(w_g0),
        l1_g1=problem.group_objective(1).value(w_g1),
        l_o=problem.overall_objective().value(w_o),
    ))
    return w_g0, w_g1, w_o


def check_assumption2(w_g0: np.ndarray, w_g1: np.ndarray, problem: LossProblem) -> AssumptionCheck:
    """Margins (L_1(w_G0) - L_0(w_G0), L_0(w_G1) - L_1(w_G1)); each group is best off at its own optimum iff both >= 0."""
    l0_g0, l1_g0, _ = problem.group_losses(w_g0)
    l0_g1, l1_g1, _ = problem.group_losses(w_g1)
    margins = (l1_g0 - l0_g0, l0_g1 - l1_g1)
    holds = margins[0] >= 0.0 and margins[1] >= 0.0
    logger.info(constants.LOG_EL_ASSUMPTION.format(m0=margins[0], m1=margins[1], holds=holds))
    return AssumptionCheck(holds=holds, margins=margins)


def el_minimizer(
    w_g0: np.ndarray,
    w_g1: np.ndarray,
    epsilon: float,
    gamma: float,
    problem: LossProblem,
    cfg: Optional[SolverConfig] = None,
    holdout: Optional[LossProblem] = None,
) -> SolveReport:
    """
    Bisection on lambda for min L(w) s.t. L_0(w) = L_1(w) + gamma.

    ``gamma`` is signed: +gamma targets L_0 - L_1 = gamma, -gamma targets
    L_0 - L_1 = -gamma. The lambda interval starts at [L_0(w_G0), L_0(w_G1)]
    and halves until its width is at most ``epsilon``.
    """
    if epsilon <= 0.0:
        raise ValueError("epsilon must be positive")
    started = time.perf_counter()
    cfg = cfg or SolverConfig()
    loss_0 = problem.group_objective(0)
    shifted_1 = ShiftedObjective(problem.group_objective(1), gamma)

    low_margin = loss_0.value(w_g0) - shifted_1.value(w_g0)
    high_margin = loss_0.value(w_g1) - shifted_1.value(w_g1)
    if not (low_margin < 0.0 and high_margin > 0.0):
        detail = "L_0(w_G0) - L_1(w_G0) must be below gamma" if low_margin >= 0.0 \
            else "L_0(w_G1) - L_1(w_G1) must exceed gamma"
        margins = (-(low_margin + gamma), high_margin + gamma)
        raise AssumptionViolationError(
            constants.ERROR_MESSAGE_ASSUMPTION.format(detail=detail, m0=margins[0], m1=margins[1], gamma=gamma),
            margins=margins,
        )

    lambda_start = loss_0.value(w_g0)
    lambda_end = loss_0.value(w_g1)
    # L_0 never drops below its value at w_G0, so that is the level floor
    solver = LevelConstrainedSolver(shifted_1, loss_0, cfg, con_floor=lambda_start, start=w_g1)
    trace = BisectionTrace(variable="lambda")
    # multiplier at lambda_start: the steepest slope of the convex lambda-map on the bracket
    start_multiplier = None
    solution = None
    iteration = 0
    while solution is None or lambda_end - lambda_start > epsilon:
        lambda_mid = 0.5 * (lambda_start + lambda_end)
        solution = solver.solve(lambda_mid)
        value = shifted_1.value(solution.w)
        trace.iterations.append(BisectionStep(start=lambda_start, end=lambda_end, mid=lambda_mid, value=value))
        logger.debug(constants.LOG_EL_ITERATION.format(
            algo=constants.ALGO_EL_MINIMIZER, iteration=iteration,
            start=lambda_start, end=lambda_end, mid=lambda_mid, value=value,
        ))
        if lambda_end - lambda_start <= epsilon:
            break
        if value >= lambda_mid:
            lambda_start = lambda_mid
            start_multiplier = solution.multiplier
        else:
            lambda_end = lambda_mid
        iteration += 1

    width = lambda_end - lambda_start
    # |L_0 - L~_1| <= width * (1 + slope); without a solve at lambda_start the last multiplier stands in
    slope = start_multiplier if start_multiplier is not None else solution.multiplier
    return _report(
        problem,
        solution.w,
        constants.ALGO_EL_MINIMIZER,
        started,
        holdout,
        trace=trace,
        final_bracket=(lambda_start, lambda_end),
        tolerance=width * (1.0 + slope),
        extras={"gamma": gamma, "multiplier": solution.multiplier, "start_multiplier": start_multiplier},
    )


def _assumption_error(detail: str, margins: Tuple[float, float], gamma: float) -> AssumptionViolationError:
    return AssumptionViolationError(
        constants.ERROR_MESSAGE_ASSUMPTION.format(detail=detail, m0=margins[0], m1=margins[1], gamma=gamma),
        margins=margins,
    )


def optimal_gamma_el(problem: LossProblem, cfg: ELConfig, holdout: Optional[LossProblem] = None) -> SolveReport:
    started = time.perf_counter()
    gamma = cfg.gamma
    w_g0, w_g1, w_o = group_optima(problem, cfg.solver)

    l0, l1, _ = problem.group_losses(w_o)
    if abs(l0 - l1) <= gamma:
        logger.info(constants.LOG_EL_UNCONSTRAINED_FEASIBLE.format(gamma=gamma, gap=abs(l0 - l1)))
        return _report(problem, w_o, constants.ALGO_OPTIMAL, started, holdout, extras={"unconstrained_feasible": True})

    margins = check_assumption2(w_g0, w_g1, problem).margins
    if not margins[0] > gamma:
        raise _assumption_error("L_1(w_G0) - L_0(w_G0) must exceed gamma", margins, gamma)
    if not margins[1] > gamma:
        raise _assumption_error("L_0(w_G1) - L_1(w_G1) must exceed gamma", margins, gamma)

    signs = ("+", "-") if gamma > 0.0 else ("+",)
    candidates: List[Tuple[str, SolveReport]] = []
    failures: List[Tuple[str, object]] = []
    for sign in signs:
        signed_gamma = gamma if sign == "+" else -gamma
        try:
            branch = el_minimizer(w_g0, w_g1, cfg.epsilon, signed_gamma, problem, cfg.solver, holdout)
        except SOLVER_ERRORS as e:
            logger.warning(constants.LOG_EL_BRANCH_FAILED.format(sign=sign, error=e))
            failures.append((sign, e))
            continue
        logger.info(constants.LOG_EL_BRANCH_DONE.format(
            sign=sign, loss=branch.train.loss, gap=branch.gap, tolerance=branch.tolerance
        ))
        slack = _BRANCH_FEASIBILITY_FACTOR * branch.tolerance + _BRANCH_FEASIBILITY_FLOOR
        if branch.gap > gamma + slack:
            failures.append((sign, branch))
            continue
        candidates.append((sign, branch))

    if not candidates:
        raise BranchFailureError(constants.ERROR_MESSAGE_BRANCHES_FAILED, branches=failures)

    sign, best = min(candidates, key=lambda item: item[1].train.loss)
    logger.info(constants.LOG_EL_BRANCH_CHOSEN.format(sign=sign, loss=best.train.loss))
    return best.model_copy(update={
        "algorithm": constants.ALGO_OPTIMAL,
        "wallclock_ms": _elapsed_ms(started),
        "extras": {
            **best.extras,
            "branch": sign,
            "margins": margins,
            "branch_losses": {s: r.train.loss for s, r in candidates},
        },
    })


def _segment_point(w_o: np.ndarray, w_target: np.ndarray, beta: float) -> np.ndarray:
    return (1.0 - beta) * w_o + beta * w_target


def _segment_gap(problem: LossProblem, disadvantaged: int, w: np.ndarray) -> float:
    l0, l1, _ = problem.group_losses(w)
    return l1 - l0 if disadvantaged == 1 else l0 - l1


def suboptimal_gamma_el(problem: LossProblem, cfg: ELConfig, holdout: Optional[LossProblem] = None) -> SolveReport:
    """
    Bisection on beta along w(beta) = (1 - beta) w_O + beta w_G_a, where a is
    the group with the larger loss at w_O (group 0 on ties).
    """
    started = time.perf_counter()
    gamma = cfg.gamma
    w_o = minimize_unconstrained(problem.overall_objective(), problem.zero_weights(), cfg.solver)
    l0, l1, _ = problem.group_losses(w_o)
    disadvantaged = 1 if l1 > l0 else 0
    w_target = minimize_unconstrained(problem.group_objective(disadvantaged), w_o, cfg.solver)

    def g(beta: float) -> float:
        return _segment_gap(problem, disadvantaged, _segment_point(w_o, w_target, beta))

    g_start = g(0.0)
    logger.info(constants.LOG_EL_DISADVANTAGED.format(group=disadvantaged, g0=g_start))
    if g_start <= gamma:
        logger.info(constants.LOG_EL_UNCONSTRAINED_FEASIBLE.format(gamma=gamma, gap=abs(g_start)))
        return _report(
            problem, w_o, constants.ALGO_SUBOPTIMAL, started, holdout,
            extras={"unconstrained_feasible": True, "disadvantaged": disadvantaged},
        )

    g_end = g(1.0)
    if g_end > gamma:
        raise AssumptionViolationError(
            constants.ERROR_MESSAGE_SEGMENT_ASSUMPTION.format(g1=g_end, gamma=gamma),
            margins=(g_start, g_end),
        )

    beta_start, beta_end = 0.0, 1.0
    trace = BisectionTrace(variable="beta")
    beta_mid = None
    iteration = 0
    while beta_mid is None or beta_end - beta_start > cfg.epsilon:
        beta_mid = 0.5 * (beta_start + beta_end)
        value = g(beta_mid)
        trace.iterations.append(BisectionStep(start=beta_start, end=beta_end, mid=beta_mid, value=value))
        logger.debug(constants.LOG_EL_ITERATION.format(
            algo=constants.ALGO_SUBOPTIMAL, iteration=iteration,
            start=beta_start, end=beta_end, mid=beta_mid, value=value,
        ))
        if beta_end - beta_start <= cfg.epsilon:
            break
        if value - gamma >= 0.0:
            beta_start = beta_mid
        else:
            beta_end = beta_mid
        iteration += 1

    return _report(
        problem,
        _segment_point(w_o, w_target, beta_mid),
        constants.ALGO_SUBOPTIMAL,
        started,
        holdout,
        trace=trace,
        final_bracket=(beta_start, beta_end),
        tolerance=abs(g(beta_start) - g(beta_end)),
        extras={"beta": beta_mid, "disadvantaged": disadvantaged},
    )


def segment_curves(
    problem: LossProblem,
    betas: List[float],
    cfg: Optional[SolverConfig] = None,
) -> List[Tuple[float, float, float]]:
    """(beta, g(beta), h(beta)) samples along the segment searched by ``suboptimal_gamma_el``."""
    cfg = cfg or SolverConfig()
    w_o = minimize_unconstrained(problem.overall_objective(), problem.zero_weights(), cfg)
    l0, l1, _ = problem.group_losses(w_o)
    disadvantaged = 1 if l1 > l0 else 0
    w_target = minimize_unconstrained(problem.group_objective(disadvantaged), w_o, cfg)
    samples = []
    for beta in betas:
        w = _segment_point(w_o, w_target, float(beta))
        samples.append((float(beta), _segment_gap(problem, disadvantaged, w), problem.group_losses(w)[2]))
    return samples


def bgl_report(report: SolveReport, gamma: float) -> BGLReport:
    """The solution is c-BGL for c = max group loss; c <= 2 gamma whenever a gamma-BGL predictor exists."""
    losses = (report.train.loss_g0, report.train.loss_g1)
    return BGLReport(min_loss=min(losses), max_loss=max(losses), bgl_level_satisfied=max(losses))
