import sys
import logging
import argparse
from pathlib import Path

import numpy as np
import pandas as pd
import yaml

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from src.logging_config import setup_logging
from src import constants

logger = logging.getLogger("make_fixture")

FIXTURE_SCHEMA = {
    "target_column": "y",
    "group_column": "group",
    "group_positive_value": "B",
    "group_negative_value": "A",
    "categorical_columns": ["site"],
    "numeric_columns": ["x1", "x2"],
    "drop_missing": True,
    "missing_markers": ["?"],
}


def make_frame(n: int, minority_share: float, seed: int) -> pd.DataFrame:
    """
    Two-group regression data. Group B follows a different slope and is
    noisier, so at the pooled least-squares fit it has the larger loss.
    """
    rng = np.random.default_rng(seed)
    group_b = rng.uniform(size=n) < minority_share
    x1 = rng.normal(size=n)
    x2 = rng.normal(loc=np.where(group_b, 0.5, 0.0), size=n)
    site = rng.choice(["north", "south", "west"], size=n)
    site_effect = pd.Series(site).map({"north": 0.3, "south": -0.2, "west": 0.0}).to_numpy()
    slope_1 = np.where(group_b, -0.5, 1.5)
    noise = rng.normal(scale=np.where(group_b, 1.0, 0.3), size=n)
    y = slope_1 * x1 + 0.8 * x2 + site_effect + noise
    return pd.DataFrame({
        "x1": np.round(x1, 6),
        "x2": np.round(x2, 6),
        "site": site,
        "group": np.where(group_b, "B", "A"),
        "y": np.round(y, 6),
    })


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description="Write a synthetic two-group regression CSV and its schema.")
    parser.add_argument("--output", "-o", type=str, default="data/fixture", help="Directory for fixture.csv and fixture.yaml")
    parser.add_argument("--rows", type=int, default=600)
    parser.add_argument("--minority-share", type=float, default=0.3)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    setup_logging()
    output_dir = Path(args.output)
    output_dir.mkdir(parents=True, exist_ok=True)

    frame = make_frame(args.rows, args.minority_share, args.seed)
    csv_path = output_dir / "fixture.csv"
    frame.to_csv(csv_path, index=False, lineterminator="\n")
    schema_path = output_dir / "fixture.yaml"
    with open(schema_path, "w", encoding="utf-8") as f:
        yaml.safe_dump(FIXTURE_SCHEMA, f, sort_keys=False)

    logger.info(constants.LOG_FIXTURE_WRITTEN.format(rows=len(frame), csv_path=csv_path, schema_path=schema_path))
    return 0


if __name__ == "__main__":
    sys.exit(main())
