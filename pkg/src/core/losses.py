import logging
from typing import Tuple, Union

import numpy as np
from scipy.special import expit

from src import constants
from src.core.objectives import LossProblem, Objective
from src.exceptions import DimensionMismatchError, EmptyGroupError
from src.schemas.core_schemas import GroupedDataset, LossSpec

logger = logging.getLogger(__name__)

Group = Union[int, str]


def as_weight_vector(values, dim: int) -> np.ndarray:
    w = np.asarray(values, dtype=float).reshape(-1)
    if w.size != dim:
        raise DimensionMismatchError(constants.ERROR_MESSAGE_DIMENSION.format(expected=dim, actual=w.size))
    if not np.all(np.isfinite(w)):
        raise ValueError(constants.ERROR_MESSAGE_NON_FINITE_WEIGHTS)
    return w


def with_bias_column(features: np.ndarray) -> np.ndarray:
    return np.hstack([features, np.ones((features.shape[0], 1))])


def predict_score(w: np.ndarray, x: np.ndarray) -> float:
    """Affine score w . [x, 1]; the logistic link is applied by callers that need probabilities."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    w = np.asarray(w, dtype=float)
    if x.size + 1 != w.size:
        raise DimensionMismatchError(constants.ERROR_MESSAGE_DIMENSION.format(expected=w.size - 1, actual=x.size))
    return float(x @ w[:-1] + w[-1])


def pointwise_loss(scores: np.ndarray, targets: np.ndarray, kind: str) -> np.ndarray:
    if kind == constants.LOSS_SQUARED_ERROR:
        return (scores - targets) ** 2
    # max(s, 0) - s*y + log(1 + exp(-|s|)) stays finite for any score
    return np.maximum(scores, 0.0) - scores * targets + np.log1p(np.exp(-np.abs(scores)))


def mean_loss_gradient(w: np.ndarray, augmented: np.ndarray, targets: np.ndarray, kind: str, eta: float) -> np.ndarray:
    """Gradient of mean pointwise loss + eta ||w||^2 over the given rows (features already carry the bias column)."""
    scores = augmented @ w
    if kind == constants.LOSS_SQUARED_ERROR:
        residual = 2.0 * (scores - targets)
    else:
        residual = expit(scores) - targets
    return augmented.T @ residual / augmented.shape[0] + 2.0 * eta * w


class EmpiricalGroupLoss(Objective):
    """L-bar_a(w) = mean loss over one group's rows + eta ||w||^2."""

    def __init__(self, augmented: np.ndarray, targets: np.ndarray, kind: str, eta: float):
        self.features = augmented
        self.targets = targets
        self.kind = kind
        self.eta = float(eta)
        self.count = augmented.shape[0]
        self._ridge = 2.0 * self.eta * np.eye(augmented.shape[1])
        self._squared_hessian = None
        if kind == constants.LOSS_SQUARED_ERROR:
            self._squared_hessian = 2.0 * (augmented.T @ augmented) / self.count + self._ridge

    @property
    def dim(self) -> int:
        return self.features.shape[1]

    def scores(self, w: np.ndarray) -> np.ndarray:
        return self.features @ w

    def value(self, w: np.ndarray) -> float:
        losses = pointwise_loss(self.scores(w), self.targets, self.kind)
        return float(losses.mean() + self.eta * (w @ w))

    def gradient(self, w: np.ndarray) -> np.ndarray:
        return mean_loss_gradient(w, self.features, self.targets, self.kind, self.eta)

    def hessian(self, w: np.ndarray) -> np.ndarray:
        if self._squared_hessian is not None:
            return self._squared_hessian
        p = expit(self.scores(w))
        curvature = p * (1.0 - p)
        return (self.features.T * curvature) @ self.features / self.count + self._ridge


class EmpiricalLossProblem(LossProblem):

    def __init__(self, data: GroupedDataset, spec: LossSpec):
        if spec.kind == constants.LOSS_BINARY_CROSS_ENTROPY and not np.all(np.isin(data.targets, (0.0, 1.0))):
            raise ValueError(constants.ERROR_MESSAGE_BCE_TARGETS)
        self.data = data
        self.spec = spec
        self.augmented = with_bias_column(data.features)
        self._groups = []
        for group in (0, 1):
            mask = data.groups == group
            if not mask.any():
                raise EmptyGroupError(constants.ERROR_MESSAGE_EMPTY_GROUP.format(group=group))
            self._groups.append(EmpiricalGroupLoss(self.augmented[mask], data.targets[mask], spec.kind, spec.eta))
        if spec.group_weights is not None:
            self._weights = (float(spec.group_weights[0]), float(spec.group_weights[1]))
        else:
            self._weights = (data.n_0 / data.n, data.n_1 / data.n)

    @property
    def dim(self) -> int:
        return self.augmented.shape[1]

    @property
    def group_weights(self) -> Tuple[float, float]:
        return self._weights

    def group_objective(self, group: int) -> EmpiricalGroupLoss:
        return self._groups[group]

    def group_rows(self, group: int) -> Tuple[np.ndarray, np.ndarray]:
        loss = self._groups[group]
        return loss.features, loss.targets


def _objective_for(data: GroupedDataset, spec: LossSpec, group: Group) -> Tuple[Objective, int]:
    problem = EmpiricalLossProblem(data, spec)
    if group == constants.GROUP_ALL:
        return problem.overall_objective(), problem.dim
    return problem.group_objective(int(group)), problem.dim


def empirical_loss(w: np.ndarray, data: GroupedDataset, spec: LossSpec, group: Group = constants.GROUP_ALL) -> float:
    objective, dim = _objective_for(data, spec, group)
    return objective.value(as_weight_vector(w, dim))


def loss_gradient(w: np.ndarray, data: GroupedDataset, spec: LossSpec, group: Group = constants.GROUP_ALL) -> np.ndarray:
    objective, dim = _objective_for(data, spec, group)
    return objective.gradient(as_weight_vector(w, dim))


def loss_hessian(w: np.ndarray, data: GroupedDataset, spec: LossSpec, group: Group = constants.GROUP_ALL) -> np.ndarray:
    objective, dim = _objective_for(data, spec, group)
    return objective.hessian(as_weight_vector(w, dim))
