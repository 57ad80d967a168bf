# flnn_abc/cli/benchmark.py
"""`benchmark` subcommand: the full 2-fold protocol plus its reports."""
import argparse
import logging

from flnn_abc.cli.common import common_flags, load_run, output_dir
from flnn_abc.services.benchmark import BenchmarkRunner
from flnn_abc.services.config_loader import ConfigLoader
from flnn_abc.services.report_writer import ReportWriter

logger = logging.getLogger(__name__)


def cmd_benchmark(args: argparse.Namespace) -> int:
    _, run = load_run(args)
    out = output_dir(args, run.output_dir)
    logger.info(
        f"Protocol: {len(run.datasets)} datasets x {len(run.trainers)} trainers x 2 folds x {run.trials} trials"
    )

    result = BenchmarkRunner.run_protocol(run)
    ReportWriter.emit_reports(result, str(out))
    ConfigLoader.write_resolved(ConfigLoader.to_parser(run), out)

    print(ReportWriter.format_summary(result))
    # reports are kept for inspection even when a cell failed
    result.raise_for_errors()
    return 0


def register(subparsers) -> None:
    bench = subparsers.add_parser(
        "benchmark", parents=[common_flags()], help="run the comparison protocol and write reports"
    )
    bench.add_argument("--workers", type=int, metavar="N", help="parallel protocol cells (overrides [run] workers)")
    bench.add_argument("--trials", type=int, metavar="N", help="trials per cell (overrides [run] trials)")
    bench.set_defaults(handler=cmd_benchmark)
