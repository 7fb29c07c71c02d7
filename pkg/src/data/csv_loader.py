import logging
from pathlib import Path
from typing import List, Union

import numpy as np
import pandas as pd
import yaml
from pydantic import ValidationError

from src import constants
from src.exceptions import DatasetError, EmptyGroupError, SchemaError
from src.schemas.core_schemas import DatasetSchema, GroupedDataset

logger = logging.getLogger(__name__)

# line number of a data row in the file: header is line 1
_HEADER_LINES = 1


def load_schema(path: Union[str, Path]) -> DatasetSchema:
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(constants.ERROR_MESSAGE_SCHEMA_NOT_FOUND.format(path=path))
    try:
        with open(path, "r", encoding="utf-8") as f:
            raw = yaml.safe_load(f) or {}
        return DatasetSchema.model_validate(raw)
    except (yaml.YAMLError, ValidationError) as e:
        raise SchemaError(constants.ERROR_MESSAGE_SCHEMA_INVALID.format(path=path, error=e)) from e


def _line_of(index: int) -> int:
    return int(index) + _HEADER_LINES + 1


def _parse_numeric(frame: pd.DataFrame, columns: List[str]) -> pd.DataFrame:
    parsed = {}
    for column in columns:
        values = pd.to_numeric(frame[column], errors="coerce")
        bad = values.isna() | ~np.isfinite(values.to_numpy(dtype=float, na_value=np.nan))
        if bad.any():
            index = bad.idxmax()
            raise DatasetError(
                constants.ERROR_MESSAGE_UNPARSEABLE.format(value=frame.at[index, column], row=_line_of(index), column=column),
                row=_line_of(index),
                column=column,
            )
        parsed[column] = values.astype(float)
    return pd.DataFrame(parsed, index=frame.index)


def load_csv(path: Union[str, Path], schema: DatasetSchema) -> GroupedDataset:
    """
    Read a headed CSV into a two-group dataset.

    Categorical columns are one-hot encoded, numeric columns are parsed as
    floats and flagged in ``numeric_columns`` so the split can standardize
    them with train statistics. Group 1 is ``schema.group_positive_value``.
    """
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(constants.ERROR_MESSAGE_DATASET_NOT_FOUND.format(path=path))
    logger.info(constants.LOG_DATA_LOADING.format(path=path))

    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False, skipinitialspace=True, encoding="utf-8")
    except (pd.errors.ParserError, UnicodeDecodeError) as e:
        raise DatasetError(str(e)) from e

    required = [schema.target_column, schema.group_column] + schema.numeric_columns + schema.categorical_columns
    missing = [column for column in required if column not in frame.columns]
    if missing:
        raise DatasetError(constants.ERROR_MESSAGE_MISSING_COLUMNS.format(columns=missing))
    frame = frame[required].apply(lambda column: column.str.strip())

    is_missing = frame.isin(schema.missing_markers) | (frame == "")
    group_values = frame[schema.group_column]
    in_scope = group_values == schema.group_positive_value
    if schema.group_negative_value is not None:
        in_scope |= group_values == schema.group_negative_value
    else:
        in_scope |= ~is_missing[schema.group_column]

    if schema.drop_missing:
        keep = ~is_missing.any(axis=1) & in_scope
        dropped = int((~keep).sum())
        if dropped:
            logger.info(constants.LOG_DATA_DROPPED.format(count=dropped))
        frame = frame[keep]
    else:
        if is_missing.to_numpy().any():
            rows, cols = np.nonzero(is_missing.to_numpy())
            index, column = is_missing.index[rows[0]], is_missing.columns[cols[0]]
            raise DatasetError(
                constants.ERROR_MESSAGE_MISSING_VALUE.format(row=_line_of(index), column=column),
                row=_line_of(index),
                column=column,
            )
        if not in_scope.all():
            index = (~in_scope).idxmax()
            raise DatasetError(
                constants.ERROR_MESSAGE_GROUP_VALUE.format(value=group_values[index], row=_line_of(index)),
                row=_line_of(index),
                column=schema.group_column,
            )

    groups = (frame[schema.group_column] == schema.group_positive_value).astype(int).to_numpy()
    for group in (0, 1):
        if not np.any(groups == group):
            raise EmptyGroupError(constants.ERROR_MESSAGE_EMPTY_GROUP.format(group=group))

    if schema.target_positive_value is not None:
        targets = (frame[schema.target_column] == schema.target_positive_value).astype(float).to_numpy()
    else:
        targets = _parse_numeric(frame, [schema.target_column])[schema.target_column].to_numpy()

    numeric = _parse_numeric(frame, schema.numeric_columns)
    encoded = pd.get_dummies(frame[schema.categorical_columns], prefix_sep="=", dtype=float) \
        if schema.categorical_columns else pd.DataFrame(index=frame.index)
    features = pd.concat([numeric, encoded], axis=1)

    data = GroupedDataset(
        features=features.to_numpy(dtype=float).reshape(len(frame), -1),
        targets=targets,
        groups=groups,
        feature_names=[str(name) for name in features.columns],
        numeric_columns=list(range(len(schema.numeric_columns))),
    )
    logger.info(constants.LOG_DATA_LOADED.format(n=data.n, n0=data.n_0, n1=data.n_1, d=data.dim))
    return data
