# flnn_abc/cli/common.py
"""Flags shared by every subcommand and the config plumbing behind them."""
import argparse
import configparser
from pathlib import Path
from typing import List, Optional, Tuple

from flnn_abc.core.errors import ConfigError
from flnn_abc.core.models import RunConfig
from flnn_abc.services.benchmark import derive_seed
from flnn_abc.services.config_loader import ConfigLoader
from flnn_abc.services.dataset_loader import Dataset, DatasetLoader
from flnn_abc.services.report_writer import ReportWriter


def common_flags() -> argparse.ArgumentParser:
    """Parent parser holding the flags accepted after any subcommand."""
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--config", metavar="PATH", help="INI run configuration")
    parent.add_argument("--out", metavar="DIR", help="output directory")
    parent.add_argument(
        "--set",
        dest="overrides",
        metavar="KEY=VALUE",
        action="append",
        default=[],
        help="override one config value, e.g. --set bp.learning_rate=0.1 (repeatable)",
    )
    parent.add_argument("--seed", type=int, metavar="N", help="master seed (also the [train] seed)")
    verbosity = parent.add_mutually_exclusive_group()
    verbosity.add_argument("-q", "--quiet", action="store_true", help="log warnings and errors only")
    verbosity.add_argument("-v", "--verbose", action="store_true", help="log debug progress")
    return parent


def overrides(args: argparse.Namespace) -> List[str]:
    values = list(args.overrides)
    if args.seed is not None:
        if args.seed < 0:
            raise ConfigError(f"--seed must be non-negative, got {args.seed}")
        values += [f"run.master_seed={args.seed}", f"train.seed={args.seed}"]
    for option in ("workers", "trials"):
        value = getattr(args, option, None)
        if value is not None:
            values.append(f"run.{option}={value}")
    return values


def load_run(args: argparse.Namespace) -> Tuple[configparser.ConfigParser, RunConfig]:
    parser = ConfigLoader.read_parser(args.config, overrides(args))
    return parser, ConfigLoader.build_run_config(parser, config_path=args.config)


def output_dir(args: argparse.Namespace, configured: Optional[str] = None) -> Path:
    """Resolve the output directory and check it is writable; it is created only when outputs are written."""
    return ReportWriter.check_writable(ConfigLoader.resolve_output_dir(args.out, configured))


def train_test_sets(run: RunConfig, dataset_name: str, fold: str) -> Tuple[Dataset, Dataset]:
    """The same scaled fold pair the protocol uses for this dataset and assignment."""
    dataset = DatasetLoader.load(run.dataset(dataset_name))
    folds = DatasetLoader.two_fold_split(dataset, derive_seed(run.master_seed, dataset_name, "split"))
    return DatasetLoader.scale_fold_pair(dataset, folds, fold)
