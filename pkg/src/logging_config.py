import logging
import sys
from contextvars import ContextVar
from .config import settings

from typing import Optional

run_id_var: ContextVar[Optional[str]] = ContextVar("run_id", default=None)


class RunIdFilter(logging.Filter):
    def filter(self, record):
        record.run_id = run_id_var.get()
        return True


def setup_logging(level: Optional[str] = None):
    formatter = logging.Formatter(
        '%(asctime)s - %(name)s - %(levelname)s - [%(run_id)s] - %(message)s'
    )
    handler = logging.StreamHandler(sys.stdout)
    handler.setFormatter(formatter)
    handler.addFilter(RunIdFilter())
    log_level = getattr(logging, (level or settings.logging.level).upper(), logging.INFO)
    logging.basicConfig(level=log_level, handlers=[handler], force=True)
