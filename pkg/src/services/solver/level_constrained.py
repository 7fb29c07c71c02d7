"""
Level-constrained convex minimization: min obj(w) s.t. con(w) <= level.

When the constraint binds, the optimum sits on con(w) = level and is the
Lagrangian minimizer w(mu) = argmin obj + mu * con for a single mu >= 0.
con(w(mu)) is nonincreasing in mu, so mu is found by bisection.
"""
import logging
from typing import List, Optional, Tuple

import numpy as np

from src import constants
from src.core.objectives import CombinedObjective, Objective
from src.exceptions import DualBracketError, InfeasibleLevelError
from src.schemas.solver_schemas import ConstrainedSolution, SolverConfig

from .newton import minimize_unconstrained

logger = logging.getLogger(__name__)

_BRACKET_GROWTH = 10.0
_RELATIVE_BRACKET_FLOOR = 1e-15


class LevelConstrainedSolver:
    """
    Solves a family of level-constrained problems sharing (obj, con).

    Keeps the unconstrained minimizer of obj, the minimum of con and the
    last Lagrangian minimizer between calls, so a sequence of nearby levels
    is warm-started. Not reentrant; use one instance per thread.
    """

    def __init__(
        self,
        obj: Objective,
        con: Objective,
        cfg: Optional[SolverConfig] = None,
        con_floor: Optional[float] = None,
        start: Optional[np.ndarray] = None,
    ):
        self.obj = obj
        self.con = con
        self.cfg = cfg or SolverConfig()
        self._con_floor = con_floor
        self._start = np.zeros(obj.dim) if start is None else np.asarray(start, dtype=float)
        self._warm: Optional[np.ndarray] = None
        self._free_minimizer: Optional[np.ndarray] = None

    def free_minimizer(self) -> np.ndarray:
        """Unconstrained minimizer of obj, computed once."""
        if self._free_minimizer is None:
            self._free_minimizer = minimize_unconstrained(self.obj, self._start, self.cfg)
        return self._free_minimizer

    def constraint_floor(self) -> float:
        """min_w con(w), computed once unless supplied."""
        if self._con_floor is None:
            w_con = minimize_unconstrained(self.con, self._start, self.cfg)
            self._con_floor = self.con.value(w_con)
        return self._con_floor

    def lagrangian_minimizer(self, mu: float, start: np.ndarray) -> np.ndarray:
        # (obj + mu * con) / (1 + mu) keeps the gradient tolerance meaningful for large mu
        scale = 1.0 / (1.0 + mu)
        lagrangian = CombinedObjective([self.obj, self.con], [scale, mu * scale])
        return minimize_unconstrained(lagrangian, start, self.cfg)

    def solve(self, level: float, warm_start: Optional[np.ndarray] = None) -> ConstrainedSolution:
        level = float(level)
        hint = warm_start if warm_start is not None else self._warm
        floor = self.constraint_floor()
        if level < floor:
            raise InfeasibleLevelError(constants.ERROR_MESSAGE_INFEASIBLE_LEVEL.format(level=level, floor=floor))

        w_free = self.free_minimizer()
        con_free = self.con.value(w_free)
        if con_free <= level:
            logger.debug(constants.LOG_DUAL_INACTIVE.format(level=level, con=con_free))
            return ConstrainedSolution(
                w=w_free.copy(),
                objective_value=self.obj.value(w_free),
                constraint_value=con_free,
                multiplier=0.0,
                active=False,
                level=level,
            )

        samples: List[Tuple[float, float]] = []
        start = w_free if hint is None else np.asarray(hint, dtype=float)

        mu_low = 0.0
        mu_high = 1.0
        expansions = 0
        while True:
            w_high = self.lagrangian_minimizer(mu_high, start)
            con_high = self.con.value(w_high)
            samples.append((mu_high, con_high))
            logger.debug(constants.LOG_DUAL_SAMPLE.format(mu=mu_high, con=con_high, level=level))
            if con_high <= level:
                break
            if mu_high >= self.cfg.dual_mu_max:
                raise DualBracketError(constants.ERROR_MESSAGE_DUAL_BRACKET.format(
                    mu_max=self.cfg.dual_mu_max, con=con_high, level=level
                ))
            mu_low = mu_high
            start = w_high
            mu_high = min(mu_high * _BRACKET_GROWTH, self.cfg.dual_mu_max)
            expansions += 1
        logger.debug(constants.LOG_DUAL_BRACKET.format(level=level, mu_high=mu_high, expansions=expansions))

        iterations = 0
        for iterations in range(1, self.cfg.max_dual_iters + 1):
            if level - con_high <= self.cfg.dual_tol:
                break
            if mu_high - mu_low <= _RELATIVE_BRACKET_FLOOR * (1.0 + mu_high):
                break
            mu_mid = 0.5 * (mu_low + mu_high)
            w_mid = self.lagrangian_minimizer(mu_mid, w_high)
            con_mid = self.con.value(w_mid)
            samples.append((mu_mid, con_mid))
            logger.debug(constants.LOG_DUAL_SAMPLE.format(mu=mu_mid, con=con_mid, level=level))
            if con_mid > level:
                mu_low = mu_mid
            else:
                mu_high, w_high, con_high = mu_mid, w_mid, con_mid

        self._warm = w_high
        logger.debug(constants.LOG_DUAL_DONE.format(level=level, mu=mu_high, con=con_high, iterations=iterations))
        return ConstrainedSolution(
            w=w_high.copy(),
            objective_value=self.obj.value(w_high),
            constraint_value=con_high,
            multiplier=mu_high,
            active=True,
            level=level,
            dual_samples=samples,
        )


def minimize_level_constrained(
    obj: Objective,
    con: Objective,
    level: float,
    cfg: Optional[SolverConfig] = None,
    con_floor: Optional[float] = None,
    start: Optional[np.ndarray] = None,
) -> ConstrainedSolution:
    """One-shot solve of min obj s.t. con <= level. Pass con_floor=-inf for affine constraints."""
    return LevelConstrainedSolver(obj, con, cfg, con_floor=con_floor, start=start).solve(level)
