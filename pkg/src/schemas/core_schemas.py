from typing import List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src import constants


class LossSpec(BaseModel):
    kind: Literal[constants.LOSS_SQUARED_ERROR, constants.LOSS_BINARY_CROSS_ENTROPY] = constants.LOSS_SQUARED_ERROR
    eta: float = Field(0.0, ge=0.0, description="Coefficient of the ||w||^2 regularizer (bias included).")
    group_weights: Optional[Tuple[float, float]] = Field(
        None, description="(p0, p1); defaults to the empirical shares n_a / n."
    )

    @field_validator("group_weights")
    @classmethod
    def _weights_form_distribution(cls, value):
        if value is None:
            return value
        p0, p1 = value
        if not (0.0 <= p0 <= 1.0 and 0.0 <= p1 <= 1.0) or abs(p0 + p1 - 1.0) > 1e-12:
            raise ValueError(f"group_weights must be a distribution over two groups; got {value}")
        return value


class GroupedDataset(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    features: np.ndarray
    targets: np.ndarray
    groups: np.ndarray
    feature_names: List[str] = []
    numeric_columns: List[int] = Field(
        default_factory=list, description="Feature indices standardized with train statistics."
    )

    @field_validator("features", mode="before")
    @classmethod
    def _as_matrix(cls, value):
        matrix = np.asarray(value, dtype=float)
        if matrix.ndim == 1:
            matrix = matrix.reshape(-1, 1)
        if matrix.ndim != 2:
            raise ValueError("features must be a 2-D matrix")
        return matrix

    @field_validator("targets", mode="before")
    @classmethod
    def _as_target_vector(cls, value):
        return np.asarray(value, dtype=float).reshape(-1)

    @field_validator("groups", mode="before")
    @classmethod
    def _as_group_vector(cls, value):
        return np.asarray(value).reshape(-1).astype(int)

    @model_validator(mode="after")
    def _check_shapes_and_groups(self):
        n = self.features.shape[0]
        if self.targets.shape[0] != n or self.groups.shape[0] != n:
            raise ValueError(
                f"features, targets and groups disagree on n: {n}, {self.targets.shape[0]}, {self.groups.shape[0]}"
            )
        if not np.all(np.isin(self.groups, (0, 1))):
            raise ValueError("groups must only contain 0 and 1")
        if not (np.all(np.isfinite(self.features)) and np.all(np.isfinite(self.targets))):
            raise ValueError("features and targets must be finite")
        n1 = int(self.groups.sum())
        if n1 == 0 or n1 == n:
            raise ValueError(f"both groups must be present (n0={n - n1}, n1={n1})")
        if self.feature_names and len(self.feature_names) != self.features.shape[1]:
            raise ValueError("feature_names length does not match the feature dimension")
        return self

    @property
    def n(self) -> int:
        return int(self.features.shape[0])

    @property
    def n_1(self) -> int:
        return int(self.groups.sum())

    @property
    def n_0(self) -> int:
        return self.n - self.n_1

    @property
    def dim(self) -> int:
        return int(self.features.shape[1])

    def subset(self, indices: np.ndarray) -> "GroupedDataset":
        return GroupedDataset(
            features=self.features[indices],
            targets=self.targets[indices],
            groups=self.groups[indices],
            feature_names=list(self.feature_names),
            numeric_columns=list(self.numeric_columns),
        )


class FrozenFeatureMap(BaseModel):
    """Hidden layer W~ of a pre-trained network; maps x to [1, act(W~ x)]."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    weights: np.ndarray
    activation: Literal[constants.ACTIVATION_SIGMOID, constants.ACTIVATION_IDENTITY] = constants.ACTIVATION_SIGMOID
    # train split the network was fitted on; None for maps built by hand
    split_seed: Optional[int] = None
    train_ratio: Optional[float] = None

    @field_validator("weights", mode="before")
    @classmethod
    def _finite_matrix(cls, value):
        matrix = np.asarray(value, dtype=float)
        if matrix.ndim != 2:
            raise ValueError("feature map weights must be an m x d matrix")
        if not np.all(np.isfinite(matrix)):
            raise ValueError("feature map weights must be finite")
        return matrix

    @property
    def input_dim(self) -> int:
        return int(self.weights.shape[1])

    @property
    def output_dim(self) -> int:
        return int(self.weights.shape[0]) + 1


class DatasetSchema(BaseModel):
    target_column: str
    group_column: str
    group_positive_value: str = Field(..., description="Group value mapped to A=1.")
    group_negative_value: Optional[str] = Field(
        None, description="Group value mapped to A=0; when unset every other value is A=0."
    )
    target_positive_value: Optional[str] = Field(
        None, description="When set, targets become 1 for this value and 0 otherwise."
    )
    categorical_columns: List[str] = []
    numeric_columns: List[str] = []
    drop_missing: bool = True
    missing_markers: List[str] = ["?"]

    @model_validator(mode="after")
    def _columns_disjoint(self):
        features = set(self.categorical_columns) | set(self.numeric_columns)
        if self.target_column == self.group_column:
            raise ValueError("target_column and group_column must differ")
        overlap = features & {self.target_column, self.group_column}
        if overlap:
            raise ValueError(f"target/group columns also listed as features: {sorted(overlap)}")
        if set(self.categorical_columns) & set(self.numeric_columns):
            raise ValueError("a column cannot be both categorical and numeric")
        return self
