import logging
from pathlib import Path
from typing import Union

import numpy as np
import torch
from scipy.special import expit
from torch import nn

from src import constants
from src.exceptions import DimensionMismatchError, FeatureMapMismatchError
from src.schemas.core_schemas import FrozenFeatureMap, GroupedDataset

logger = logging.getLogger(__name__)


def apply_feature_map(feature_map: FrozenFeatureMap, data: GroupedDataset) -> GroupedDataset:
    """Replace features by [1, act(W~ x)] so a linear model on the result fine-tunes the output layer."""
    if feature_map.input_dim != data.dim:
        raise DimensionMismatchError(
            constants.ERROR_MESSAGE_FEATURE_MAP_INPUT.format(expected=feature_map.input_dim, actual=data.dim)
        )
    hidden = data.features @ feature_map.weights.T
    if feature_map.activation == constants.ACTIVATION_SIGMOID:
        hidden = expit(hidden)
    mapped = np.hstack([np.ones((data.n, 1)), hidden])
    names = ["const"] + [f"h{i}" for i in range(hidden.shape[1])]
    return GroupedDataset(features=mapped, targets=data.targets, groups=data.groups, feature_names=names)


def save_feature_map(feature_map: FrozenFeatureMap, path: Union[str, Path]) -> None:
    arrays = {"weights": feature_map.weights, "activation": np.array(feature_map.activation)}
    if feature_map.split_seed is not None:
        arrays["split_seed"] = np.array(feature_map.split_seed)
    if feature_map.train_ratio is not None:
        arrays["train_ratio"] = np.array(feature_map.train_ratio)
    np.savez(path, **arrays)
    logger.info(constants.LOG_FEATURE_MAP_SAVED.format(path=path))


def load_feature_map(path: Union[str, Path]) -> FrozenFeatureMap:
    with np.load(path, allow_pickle=False) as archive:
        return FrozenFeatureMap(
            weights=archive["weights"],
            activation=str(archive["activation"]),
            split_seed=int(archive["split_seed"]) if "split_seed" in archive.files else None,
            train_ratio=float(archive["train_ratio"]) if "train_ratio" in archive.files else None,
        )


def feature_map_path(template: Union[str, Path], seed: int) -> Path:
    """Per-seed map file; ``{seed}`` in the template is replaced, other paths are used as is."""
    return Path(str(template).replace(constants.FEATURE_MAP_SEED_PLACEHOLDER, str(seed)))


def check_feature_map_split(feature_map: FrozenFeatureMap, seed: int, train_ratio: float) -> None:
    """A map may only be applied to the split whose train rows it was fitted on."""
    if feature_map.split_seed != seed or feature_map.train_ratio is None \
            or not np.isclose(feature_map.train_ratio, train_ratio):
        raise FeatureMapMismatchError(constants.ERROR_MESSAGE_FEATURE_MAP_SPLIT.format(
            map_seed=feature_map.split_seed, map_ratio=feature_map.train_ratio, seed=seed, ratio=train_ratio
        ))


def train_feature_map(
    data: GroupedDataset,
    loss_kind: str,
    hidden_units: int = 125,
    activation: str = constants.ACTIVATION_SIGMOID,
    lr: float = 0.001,
    epochs: int = 2000,
    seed: int = 0,
) -> FrozenFeatureMap:
    """Train a one-hidden-layer network without fairness constraints by full-batch Adam; keep its hidden layer."""
    logger.info(constants.LOG_FEATURE_MAP_TRAINING.format(
        hidden_units=hidden_units, activation=activation, epochs=epochs, lr=lr
    ))
    generator = torch.Generator().manual_seed(seed)
    hidden = nn.Linear(data.dim, hidden_units, bias=False, dtype=torch.float64)
    output = nn.Linear(hidden_units, 1, dtype=torch.float64)
    with torch.no_grad():
        bound = 1.0 / np.sqrt(max(data.dim, 1))
        hidden.weight.uniform_(-bound, bound, generator=generator)
        out_bound = 1.0 / np.sqrt(hidden_units)
        output.weight.uniform_(-out_bound, out_bound, generator=generator)
        output.bias.zero_()
    act = nn.Sigmoid() if activation == constants.ACTIVATION_SIGMOID else nn.Identity()
    network = nn.Sequential(hidden, act, output)

    inputs = torch.from_numpy(np.ascontiguousarray(data.features, dtype=np.float64))
    targets = torch.from_numpy(np.ascontiguousarray(data.targets, dtype=np.float64)).reshape(-1, 1)
    criterion = nn.MSELoss() if loss_kind == constants.LOSS_SQUARED_ERROR else nn.BCEWithLogitsLoss()
    optimizer = torch.optim.Adam(network.parameters(), lr=lr)

    loss = torch.tensor(float("nan"))
    for _ in range(epochs):
        optimizer.zero_grad()
        loss = criterion(network(inputs), targets)
        loss.backward()
        optimizer.step()

    logger.info(constants.LOG_FEATURE_MAP_TRAINED.format(loss=float(loss.item())))
    return FrozenFeatureMap(weights=hidden.weight.detach().numpy().copy(), activation=activation)
