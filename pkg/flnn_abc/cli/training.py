# flnn_abc/cli/training.py
"""
`train` and `evaluate` subcommands.

Both read the [train] section: which dataset, which trainer and which fold
assignment ("a": fold A trains, fold B tests; "b": the reverse). The split
is the one the benchmark protocol uses for the same master seed.
"""
import argparse
import logging
from pathlib import Path
from typing import Tuple

from flnn_abc.cli.common import common_flags, load_run, output_dir, train_test_sets
from flnn_abc.core.errors import ConfigError
from flnn_abc.core.models import RunConfig
from flnn_abc.services.benchmark import DEFAULT_TRAINERS, BenchmarkRunner, network_for
from flnn_abc.services.bp_trainer import BackpropTrainer
from flnn_abc.services.config_loader import ConfigLoader
from flnn_abc.services.report_writer import ReportWriter

logger = logging.getLogger(__name__)


def _selection(run: RunConfig) -> Tuple[str, str]:
    settings = run.train
    dataset_name = settings.dataset
    if dataset_name is None:
        if len(run.datasets) != 1:
            raise ConfigError("[train] dataset must name one of: " + ", ".join(d.name for d in run.datasets))
        dataset_name = run.datasets[0].name
    if dataset_name not in {d.name for d in run.datasets}:
        raise ConfigError(f"[train] dataset {dataset_name!r} is not declared")
    if settings.trainer is None:
        raise ConfigError("[train] trainer is not set (mlp_bp, flnn_bp or flnn_abc)")
    return dataset_name, settings.trainer


def _print_metrics(network, params, train_set, test_set) -> None:
    print(f"structure:          {network.structure}")
    print(f"parameters:         {len(params)}")
    print(f"train_mse:          {BackpropTrainer.mse(network, params, train_set):.6f}")
    print(f"train_accuracy_pct: {BenchmarkRunner.accuracy(network, params, train_set):.6f}")
    print(f"test_mse:           {BackpropTrainer.mse(network, params, test_set):.6f}")
    print(f"test_accuracy_pct:  {BenchmarkRunner.accuracy(network, params, test_set):.6f}")


def cmd_train(args: argparse.Namespace) -> int:
    """Train one network and save model.json, history.csv and resolved_config.ini."""
    _, run = load_run(args)
    dataset_name, trainer_id = _selection(run)
    out = output_dir(args, run.output_dir)
    train_set, test_set = train_test_sets(run, dataset_name, run.train.fold)

    logger.info(f"Training {trainer_id} on {dataset_name} (fold {run.train.fold}, seed {run.train.seed})")
    network, result = DEFAULT_TRAINERS[trainer_id](run, train_set.input_dim, train_set, run.train.seed)

    ReportWriter.ensure_writable(out)
    ReportWriter.write_params(out / "model.json", result.params)
    if trainer_id == "flnn_abc":
        ReportWriter.write_history(out / "history.csv", result.history, "cycle")
    else:
        ReportWriter.write_history(out / "history.csv", result.history, "epoch", start=1)
    ConfigLoader.write_resolved(ConfigLoader.to_parser(run), out)

    print(f"{dataset_name} / {trainer_id} / fold {run.train.fold}: {result.iterations} iterations")
    _print_metrics(network, result.params, train_set, test_set)
    logger.info(f"Model written to {out / 'model.json'}")
    return 0


def cmd_evaluate(args: argparse.Namespace) -> int:
    """Score saved parameters on the configured train/test fold pair."""
    _, run = load_run(args)
    dataset_name, trainer_id = _selection(run)
    out = output_dir(args, run.output_dir)
    model_path = Path(args.model) if args.model else out / "model.json"
    params = ReportWriter.read_params(model_path)
    train_set, test_set = train_test_sets(run, dataset_name, run.train.fold)

    network = network_for(run, trainer_id, train_set.input_dim)
    ReportWriter.ensure_writable(out)
    ConfigLoader.write_resolved(ConfigLoader.to_parser(run), out)
    print(f"{dataset_name} / {trainer_id} / fold {run.train.fold}: {model_path}")
    _print_metrics(network, params, train_set, test_set)
    return 0


def register(subparsers) -> None:
    parent = common_flags()

    train = subparsers.add_parser("train", parents=[parent], help="train a single network")
    train.set_defaults(handler=cmd_train)

    evaluate = subparsers.add_parser("evaluate", parents=[parent], help="evaluate a saved model.json")
    evaluate.add_argument("--model", metavar="PATH", help="model file (default: <out>/model.json)")
    evaluate.set_defaults(handler=cmd_evaluate)
