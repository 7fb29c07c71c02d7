import time
import logging
from contextlib import contextmanager
from typing import Iterator

from . import constants
from .logging_config import run_id_var

logger = logging.getLogger(__name__)


def cell_label(algo: str, gamma: float, seed: int) -> str:
    return f"{algo}/gamma={gamma:g}/seed={seed}"


@contextmanager
def run_cell(label: str) -> Iterator[None]:
    """Tag every log record emitted inside the block with ``label`` and time the block."""
    token = run_id_var.set(label)
    start_time = time.perf_counter()
    logger.info(constants.LOG_CELL_STARTED.format(label=label))
    try:
        yield
        elapsed = time.perf_counter() - start_time
        logger.info(constants.LOG_CELL_FINISHED.format(label=label, elapsed=elapsed))
    except Exception:
        logger.exception(constants.LOG_CELL_FAILED.format(label=label))
        raise
    finally:
        run_id_var.reset(token)
