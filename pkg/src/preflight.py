import logging
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Union

from . import constants

logger = logging.getLogger(__name__)

# a check target is one path, several paths (one per seed) or None when the flag was not given
PathArg = Optional[Union[Path, Sequence[Path]]]


def _as_list(value: PathArg) -> List[Path]:
    if value is None:
        return []
    if isinstance(value, (str, Path)):
        return [Path(value)]
    return [Path(item) for item in value]


def _check_files(check: str, value: PathArg, message: str) -> Optional[str]:
    missing = []
    for path in _as_list(value):
        if not path.is_file():
            logger.error(constants.LOG_PREFLIGHT_MISSING.format(check=check, path=path))
            missing.append(message.format(path=path))
        else:
            logger.info(constants.LOG_PREFLIGHT_OK.format(check=check, detail=path))
    return "; ".join(missing) or None


def _check_dataset(paths: Dict[str, PathArg]) -> Optional[str]:
    return _check_files("dataset", paths.get("data"), constants.ERROR_MESSAGE_DATASET_NOT_FOUND)


def _check_schema(paths: Dict[str, PathArg]) -> Optional[str]:
    return _check_files("schema", paths.get("schema"), constants.ERROR_MESSAGE_SCHEMA_NOT_FOUND)


def _check_feature_map(paths: Dict[str, PathArg]) -> Optional[str]:
    return _check_files("feature map", paths.get("feature_map"), constants.ERROR_MESSAGE_FEATURE_MAP_NOT_FOUND)


def _check_output(paths: Dict[str, PathArg]) -> Optional[str]:
    for parent in sorted({path.parent for path in _as_list(paths.get("out"))}):
        try:
            parent.mkdir(parents=True, exist_ok=True)
        except OSError:
            logger.error(constants.LOG_PREFLIGHT_MISSING.format(check="output directory", path=parent))
            return constants.ERROR_MESSAGE_OUTPUT_NOT_WRITABLE.format(path=parent)
        logger.info(constants.LOG_PREFLIGHT_OK.format(check="output directory", detail=parent))
    return None


_PREFLIGHT_CHECKS: Dict[str, Callable[[Dict[str, PathArg]], Optional[str]]] = {
    "dataset": _check_dataset, "schema": _check_schema,
    "feature_map": _check_feature_map, "output": _check_output,
}


def check_inputs(command: str, paths: Dict[str, PathArg]) -> List[str]:
    """Run every registered check; returns the messages of the failed ones."""
    logger.info(constants.LOG_PREFLIGHT_START.format(command=command))
    failures = [message for message in (check(paths) for check in _PREFLIGHT_CHECKS.values()) if message]
    if failures:
        logger.error(constants.LOG_PREFLIGHT_FAILED)
    else:
        logger.info(constants.LOG_PREFLIGHT_PASSED)
    return failures
