from src.config import settings
from src.services.trainers.trainer import (
    Trainer,
    OptimalELTrainer,
    SuboptimalELTrainer,
    PenaltyTrainer,
    LinearRelaxationTrainer,
    FairBatchTrainer,
)
from src import constants


def get_trainer(algo: str, epsilon: float, seed: int, fine_tuned: bool = False) -> Trainer:
    if algo == constants.ALGO_OPTIMAL:
        return OptimalELTrainer(epsilon, settings.solver)
    elif algo == constants.ALGO_SUBOPTIMAL:
        return SuboptimalELTrainer(epsilon, settings.solver)
    elif algo == constants.ALGO_PENALTY:
        lr = settings.penalty.fine_tune_lr if fine_tuned else settings.penalty.lr
        return PenaltyTrainer(settings.penalty.model_copy(update={"lr": lr}))
    elif algo == constants.ALGO_LINEAR_RELAXATION:
        return LinearRelaxationTrainer(settings.solver)
    elif algo == constants.ALGO_FAIRBATCH:
        return FairBatchTrainer(settings.fairbatch.model_copy(update={"seed": seed}))
    raise ValueError(constants.ERROR_MESSAGE_UNKNOWN_ALGO.format(algo=algo))
