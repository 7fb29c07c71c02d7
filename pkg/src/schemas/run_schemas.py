from pathlib import Path
from typing import List, Literal, Optional

from pydantic import BaseModel, Field, field_validator

from src import constants


class RunSpec(BaseModel):
    command: Literal[constants.COMMAND_TRAIN, constants.COMMAND_SWEEP]
    algos: List[str] = Field(..., min_length=1)
    gammas: List[float] = Field(..., min_length=1)
    loss: Literal[constants.LOSS_SQUARED_ERROR, constants.LOSS_BINARY_CROSS_ENTROPY] = constants.LOSS_SQUARED_ERROR
    eta: float = Field(0.002, ge=0.0)
    epsilon: float = Field(0.01, gt=0.0)
    seeds: List[int] = Field(..., min_length=1)
    data: Path
    schema_path: Path
    feature_map: Optional[Path] = None
    out: Path
    train_ratio: float = Field(0.7, gt=0.0, lt=1.0)
    timing: bool = False

    @field_validator("algos")
    @classmethod
    def _known_algorithms(cls, value: List[str]) -> List[str]:
        unknown = [algo for algo in value if algo not in constants.ALGORITHMS]
        if unknown:
            raise ValueError(constants.ERROR_MESSAGE_UNKNOWN_ALGO.format(algo=", ".join(unknown)))
        return value

    @field_validator("gammas")
    @classmethod
    def _non_negative_gammas(cls, value: List[float]) -> List[float]:
        if any(gamma < 0.0 for gamma in value):
            raise ValueError("gamma values must be non-negative")
        return value
