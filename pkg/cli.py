import sys
import asyncio
import logging
import argparse
from pathlib import Path
from typing import Dict, List, Optional

from src.config import settings
from src.logging_config import setup_logging
from src.preflight import check_inputs
from src.core.feature_map import feature_map_path, load_feature_map, save_feature_map, train_feature_map
from src.data.csv_loader import load_csv, load_schema
from src.data.splits import train_test_split
from src.reporting.results import format_summary, run_report, write_results
from src.schemas.run_schemas import RunSpec
from src.services.runner import run_cells
from src.exceptions import SOLVER_ERRORS, SchemaError
from src import constants

logger = logging.getLogger(__name__)


def _float_list(text: str) -> List[float]:
    return [float(item) for item in text.split(",") if item.strip()]


def _int_list(text: str) -> List[int]:
    return [int(item) for item in text.split(",") if item.strip()]


def _str_list(text: str) -> List[str]:
    return [item.strip() for item in text.split(",") if item.strip()]


def _add_data_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--data", type=Path, required=True, help="Headed CSV file with the dataset")
    parser.add_argument("--schema", type=Path, required=True, help="YAML dataset schema")
    parser.add_argument("--loss", choices=sorted(constants.CLI_LOSS_ALIASES), default="mse",
                        help="mse for ridge regression, bce for logistic regression")
    parser.add_argument("--train-ratio", type=float, default=settings.data.train_ratio)


def _add_run_arguments(parser: argparse.ArgumentParser, sweep: bool) -> None:
    _add_data_arguments(parser)
    if sweep:
        parser.add_argument("--algo", type=_str_list, required=True, help="Comma-separated algorithms")
        parser.add_argument("--gammas", type=_float_list, default=list(settings.sweep.gammas))
    else:
        parser.add_argument("--algo", choices=constants.ALGORITHMS, required=True)
        parser.add_argument("--gamma", type=float, default=0.0)
    parser.add_argument("--eta", type=float, default=settings.fairness.eta)
    parser.add_argument("--epsilon", type=float, default=settings.fairness.epsilon)
    parser.add_argument("--seeds", type=_int_list, default=list(settings.data.seeds))
    parser.add_argument("--feature-map", type=Path, default=None,
                        help=".npz file written by 'pretrain'; {seed} selects the map of each split seed")
    parser.add_argument("--out", type=Path, required=True, help="Results CSV to write")
    parser.add_argument("--timing", action="store_true", help="Record wall-clock runtime_ms (breaks byte-identical output)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description=settings.app.description)
    parser.add_argument("--log-level", default=None, help="Overrides logging.level from config.yaml")
    commands = parser.add_subparsers(dest="command", required=True)

    _add_run_arguments(commands.add_parser(constants.COMMAND_TRAIN, help="Train one method at one gamma"), sweep=False)
    _add_run_arguments(commands.add_parser(constants.COMMAND_SWEEP, help="Train methods over a list of gammas"), sweep=True)

    report = commands.add_parser(constants.COMMAND_REPORT, help="Merge result CSVs into per-algorithm curve files")
    report.add_argument("results", type=Path, nargs="+")
    report.add_argument("--out", type=Path, default=Path("."), help="Directory for curve_<algo>.csv files")

    pretrain = commands.add_parser(constants.COMMAND_PRETRAIN, help="Train an unconstrained network and keep its hidden layer")
    _add_data_arguments(pretrain)
    pretrain.add_argument("--seeds", type=_int_list, default=list(settings.data.seeds),
                          help="Comma-separated split seeds; one map is written per seed")
    pretrain.add_argument("--hidden-units", type=int, default=settings.feature_map.hidden_units)
    pretrain.add_argument("--epochs", type=int, default=settings.feature_map.epochs)
    pretrain.add_argument("--out", type=Path, required=True,
                          help=".npz file for the frozen hidden layer; must contain {seed} for several seeds")
    return parser


def _run_spec(args: argparse.Namespace) -> RunSpec:
    sweep = args.command == constants.COMMAND_SWEEP
    return RunSpec(
        command=args.command,
        algos=args.algo if sweep else [args.algo],
        gammas=args.gammas if sweep else [args.gamma],
        loss=constants.CLI_LOSS_ALIASES[args.loss],
        eta=args.eta,
        epsilon=args.epsilon,
        seeds=args.seeds,
        data=args.data,
        schema_path=args.schema,
        feature_map=args.feature_map,
        out=args.out,
        train_ratio=args.train_ratio,
        timing=args.timing,
    )


def _preflight(command: str, **paths) -> bool:
    failures = check_inputs(command, paths)
    for failure in failures:
        print(failure, file=sys.stderr)
    return not failures


def _feature_map_paths(run_spec: RunSpec) -> Optional[Dict[int, Path]]:
    if run_spec.feature_map is None:
        return None
    return {seed: feature_map_path(run_spec.feature_map, seed) for seed in run_spec.seeds}


def run_train(args: argparse.Namespace) -> int:
    """train and sweep: one result row per (algo, gamma, seed, split)."""
    run_spec = _run_spec(args)
    map_paths = _feature_map_paths(run_spec)
    if not _preflight(args.command, data=run_spec.data, schema=run_spec.schema_path,
                      feature_map=list(map_paths.values()) if map_paths else None, out=run_spec.out):
        return constants.EXIT_INPUT_ERROR
    data = load_csv(run_spec.data, load_schema(run_spec.schema_path))
    feature_maps = {seed: load_feature_map(path) for seed, path in map_paths.items()} if map_paths else None
    rows = asyncio.run(run_cells(run_spec, data, feature_maps))
    write_results(rows, run_spec.out)
    print(format_summary(rows))
    return constants.EXIT_OK


def run_pretrain(args: argparse.Namespace) -> int:
    """One map per seed, each fitted on that seed's train split only."""
    if len(args.seeds) > 1 and constants.FEATURE_MAP_SEED_PLACEHOLDER not in str(args.out):
        raise ValueError(constants.ERROR_MESSAGE_FEATURE_MAP_TEMPLATE.format(
            placeholder=constants.FEATURE_MAP_SEED_PLACEHOLDER, path=args.out
        ))
    out_paths = {seed: feature_map_path(args.out, seed) for seed in args.seeds}
    if not _preflight(args.command, data=args.data, schema=args.schema, out=list(out_paths.values())):
        return constants.EXIT_INPUT_ERROR
    data = load_csv(args.data, load_schema(args.schema))
    for seed, path in out_paths.items():
        train, _test = train_test_split(data, args.train_ratio, seed)
        feature_map = train_feature_map(
            train,
            constants.CLI_LOSS_ALIASES[args.loss],
            hidden_units=args.hidden_units,
            activation=settings.feature_map.activation,
            lr=settings.feature_map.lr,
            epochs=args.epochs,
            seed=seed,
        )
        save_feature_map(feature_map.model_copy(update={"split_seed": seed, "train_ratio": args.train_ratio}), path)
        print(path)
    return constants.EXIT_OK


def run_report_command(args: argparse.Namespace) -> int:
    for path in run_report(args.results, args.out):
        print(path)
    return constants.EXIT_OK


_COMMANDS = {
    constants.COMMAND_TRAIN: run_train,
    constants.COMMAND_SWEEP: run_train,
    constants.COMMAND_REPORT: run_report_command,
    constants.COMMAND_PRETRAIN: run_pretrain,
}


def _fail(kind: str, error: Exception, code: int) -> int:
    logger.error(constants.LOG_CLI_ERROR.format(kind=kind, error=error))
    print(f"{kind}: {error}", file=sys.stderr)
    return code


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return constants.EXIT_OK if e.code in (0, None) else constants.EXIT_INPUT_ERROR
    setup_logging(args.log_level)

    try:
        return _COMMANDS[args.command](args)
    except FileNotFoundError as e:
        return _fail("input error", e, constants.EXIT_INPUT_ERROR)
    except SchemaError as e:
        return _fail("schema error", e, constants.EXIT_SCHEMA_ERROR)
    except SOLVER_ERRORS as e:
        return _fail("solver failure", e, constants.EXIT_SOLVER_FAILURE)
    # DatasetError, EmptyGroupError, DimensionMismatchError and pydantic validation errors
    except ValueError as e:
        return _fail("input error", e, constants.EXIT_INPUT_ERROR)


if __name__ == "__main__":
    sys.exit(main())
