from typing import Any, List, Optional, Tuple

import numpy as np


class LossBalanceError(Exception):
    """Base class for every error raised by the package."""


class DimensionMismatchError(LossBalanceError, ValueError):
    pass


class EmptyGroupError(LossBalanceError, ValueError):
    pass


class NonFiniteObjectiveError(LossBalanceError, ArithmeticError):
    pass


class ConvergenceError(LossBalanceError, RuntimeError):

    def __init__(self, message: str, best_iterate: Optional[np.ndarray] = None):
        super().__init__(message)
        self.best_iterate = best_iterate


class InfeasibleLevelError(LossBalanceError, ValueError):
    pass


class DualBracketError(LossBalanceError, RuntimeError):
    pass


class AssumptionViolationError(LossBalanceError, ValueError):

    def __init__(self, message: str, margins: Tuple[float, float]):
        super().__init__(message)
        self.margins = margins


class BranchFailureError(LossBalanceError, RuntimeError):

    def __init__(self, message: str, branches: List[Any]):
        super().__init__(message)
        self.branches = branches


class DivergenceError(LossBalanceError, RuntimeError):

    def __init__(self, message: str, trace: List[Any]):
        super().__init__(message)
        self.trace = trace


class DatasetError(LossBalanceError, ValueError):

    def __init__(self, message: str, row: Optional[int] = None, column: Optional[str] = None):
        super().__init__(message)
        self.row = row
        self.column = column


class FeatureMapMismatchError(LossBalanceError, ValueError):
    """A frozen feature map was pre-trained on a different train split than the one it is applied to."""


class SchemaError(LossBalanceError, ValueError):
    pass


SOLVER_ERRORS = (
    NonFiniteObjectiveError,
    ConvergenceError,
    InfeasibleLevelError,
    DualBracketError,
    AssumptionViolationError,
    BranchFailureError,
    DivergenceError,
)
