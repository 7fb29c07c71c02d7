import logging
from typing import List, Tuple

import numpy as np

from src import constants
from src.exceptions import DatasetError
from src.schemas.core_schemas import GroupedDataset

logger = logging.getLogger(__name__)


class Standardizer:
    """Zero-mean / unit-variance scaling of selected columns, fitted once."""

    def __init__(self, columns: List[int]):
        self.columns = list(columns)
        self.mean = np.zeros(len(self.columns))
        self.scale = np.ones(len(self.columns))

    def fit(self, features: np.ndarray) -> "Standardizer":
        if self.columns:
            block = features[:, self.columns]
            self.mean = block.mean(axis=0)
            std = block.std(axis=0)
            self.scale = np.where(std > 0.0, std, 1.0)
        return self

    def transform(self, data: GroupedDataset) -> GroupedDataset:
        if not self.columns:
            return data
        features = data.features.copy()
        features[:, self.columns] = (features[:, self.columns] - self.mean) / self.scale
        return data.model_copy(update={"features": features})


def train_test_split(
    data: GroupedDataset,
    ratio: float,
    seed: int,
    standardize: bool = True,
) -> Tuple[GroupedDataset, GroupedDataset]:
    """
    Seeded permutation split; ``round(ratio * n)`` rows go to train.

    Numeric columns of both halves are standardized with the train mean and
    standard deviation when ``standardize`` is set.
    """
    if not 0.0 < ratio < 1.0:
        raise ValueError(constants.ERROR_MESSAGE_SPLIT_RATIO.format(ratio=ratio))
    order = np.random.default_rng(seed).permutation(data.n)
    n_train = int(round(ratio * data.n))
    if n_train == 0 or n_train == data.n:
        raise DatasetError(constants.ERROR_MESSAGE_DEGENERATE_SPLIT.format(ratio=ratio, seed=seed, what="rows"))

    train_rows, test_rows = order[:n_train], order[n_train:]
    for rows in (train_rows, test_rows):
        present = np.unique(data.groups[rows])
        if present.size < 2:
            raise DatasetError(constants.ERROR_MESSAGE_DEGENERATE_SPLIT.format(ratio=ratio, seed=seed, what="both groups"))

    train, test = data.subset(train_rows), data.subset(test_rows)
    if standardize:
        scaler = Standardizer(data.numeric_columns).fit(train.features)
        train, test = scaler.transform(train), scaler.transform(test)
    logger.info(constants.LOG_DATA_SPLIT.format(seed=seed, n_train=train.n, n_test=test.n))
    return train, test
