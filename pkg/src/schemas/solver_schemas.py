from typing import List, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field


class LineSearchConfig(BaseModel):
    shrink: float = Field(0.5, gt=0.0, lt=1.0)
    sufficient_decrease: float = Field(1e-4, gt=0.0, lt=1.0)


class SolverConfig(BaseModel):
    grad_tol: float = Field(1e-8, gt=0.0)
    max_newton_iters: int = Field(200, gt=0)
    dual_tol: float = Field(1e-9, gt=0.0)
    dual_mu_max: float = Field(1e8, gt=0.0)
    max_dual_iters: int = Field(200, gt=0)
    line_search: LineSearchConfig = LineSearchConfig()


class ConstrainedSolution(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    w: np.ndarray
    objective_value: float
    constraint_value: float
    multiplier: float = Field(..., ge=0.0)
    active: bool
    level: float
    # (mu, con(w(mu))) for every dual sample, in evaluation order
    dual_samples: List[Tuple[float, float]] = []
