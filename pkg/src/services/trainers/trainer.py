from abc import ABC, abstractmethod
import logging
from typing import Optional

from src import constants
from src.core.objectives import LossProblem
from src.schemas.fairness_schemas import ELConfig, FairBatchConfig, PenaltyConfig, SolveReport
from src.schemas.solver_schemas import SolverConfig
from src.services.baselines.fairbatch import fairbatch_train
from src.services.baselines.linear_relaxation import linear_relaxation_train
from src.services.baselines.penalty import penalty_train
from src.services.fairness.el_algorithms import optimal_gamma_el, suboptimal_gamma_el

logger = logging.getLogger(__name__)


class Trainer(ABC):
    """One fairness-constrained training method behind a common call."""

    algorithm: str = ""

    @abstractmethod
    def train(self, problem: LossProblem, gamma: float, holdout: Optional[LossProblem] = None) -> SolveReport:
        raise NotImplementedError


class _ELTrainer(Trainer):

    def __init__(self, epsilon: float, solver: SolverConfig):
        self.epsilon = epsilon
        self.solver = solver

    def _config(self, gamma: float) -> ELConfig:
        return ELConfig(gamma=gamma, epsilon=self.epsilon, solver=self.solver)


class OptimalELTrainer(_ELTrainer):
    algorithm = constants.ALGO_OPTIMAL

    def train(self, problem: LossProblem, gamma: float, holdout: Optional[LossProblem] = None) -> SolveReport:
        return optimal_gamma_el(problem, self._config(gamma), holdout)


class SuboptimalELTrainer(_ELTrainer):
    algorithm = constants.ALGO_SUBOPTIMAL

    def train(self, problem: LossProblem, gamma: float, holdout: Optional[LossProblem] = None) -> SolveReport:
        return suboptimal_gamma_el(problem, self._config(gamma), holdout)


class PenaltyTrainer(Trainer):
    algorithm = constants.ALGO_PENALTY

    def __init__(self, cfg: PenaltyConfig):
        self.cfg = cfg

    def train(self, problem: LossProblem, gamma: float, holdout: Optional[LossProblem] = None) -> SolveReport:
        return penalty_train(problem, gamma, self.cfg, holdout)


class LinearRelaxationTrainer(Trainer):
    algorithm = constants.ALGO_LINEAR_RELAXATION

    def __init__(self, solver: SolverConfig):
        self.solver = solver

    def train(self, problem: LossProblem, gamma: float, holdout: Optional[LossProblem] = None) -> SolveReport:
        return linear_relaxation_train(problem, gamma, self.solver, holdout)


class FairBatchTrainer(Trainer):
    algorithm = constants.ALGO_FAIRBATCH

    def __init__(self, cfg: FairBatchConfig):
        self.cfg = cfg

    def train(self, problem: LossProblem, gamma: float, holdout: Optional[LossProblem] = None) -> SolveReport:
        return fairbatch_train(problem, gamma, self.cfg, holdout)
