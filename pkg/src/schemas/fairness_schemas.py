from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from .solver_schemas import SolverConfig


class ELConfig(BaseModel):
    gamma: float = Field(0.0, ge=0.0)
    epsilon: float = Field(1e-2, gt=0.0, description="Width at which the lambda / beta bisection stops.")
    solver: SolverConfig = SolverConfig()


class BisectionStep(BaseModel):
    start: float
    end: float
    mid: float
    value: float


class BisectionTrace(BaseModel):
    """Level bisection records (start, end, mid, lambda); segment bisection records beta in place of lambda and g as the value."""

    variable: str = "lambda"
    iterations: List[BisectionStep] = []

    @property
    def widths(self) -> List[float]:
        return [step.end - step.start for step in self.iterations]


class LossSummary(BaseModel):
    loss_g0: float
    loss_g1: float
    loss: float

    @property
    def gap(self) -> float:
        return abs(self.loss_g0 - self.loss_g1)


class SolveReport(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    w: np.ndarray
    algorithm: str
    train: LossSummary
    test: Optional[LossSummary] = None
    trace: BisectionTrace = BisectionTrace()
    final_bracket: Optional[Tuple[float, float]] = None
    tolerance: float = 0.0
    wallclock_ms: int = 0
    extras: Dict[str, Any] = {}

    @property
    def gap(self) -> float:
        return self.train.gap


class AssumptionCheck(BaseModel):
    holds: bool
    margins: Tuple[float, float]


class BGLReport(BaseModel):
    min_loss: float
    max_loss: float
    bgl_level_satisfied: float


class PenaltyConfig(BaseModel):
    t0: float = Field(0.1, gt=0.0)
    growth: float = Field(2.0, gt=1.0)
    grow_every: int = Field(100, gt=0)
    lr: float = Field(0.005, gt=0.0)
    fine_tune_lr: float = Field(0.001, gt=0.0, description="Step size when training on a frozen feature map.")
    max_iters: int = Field(2000, gt=0)
    stop_delta: float = Field(1e-6, gt=0.0)


class FairBatchConfig(BaseModel):
    alpha: float = Field(0.005, gt=0.0)
    batch_size: int = Field(100, ge=2)
    lr: float = Field(0.005, gt=0.0)
    max_epochs: int = Field(100, gt=0)
    stop_delta: float = Field(1e-6, gt=0.0)
    seed: int = 0
