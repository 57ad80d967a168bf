# flnn_abc/cli/abc_demo.py
"""
`abc-demo` subcommand: run the bee colony on a benchmark function.

Colony settings come from the optional [abc] section of --config and
--set overrides. Without explicit lower/upper values the function's own
search box is used.
"""
import argparse
import configparser
import logging

from flnn_abc.cli.common import common_flags, output_dir
from flnn_abc.core.abc_optimizer import run_abc
from flnn_abc.core.benchmark_functions import BENCHMARK_FUNCTIONS
from flnn_abc.core.errors import ConfigError
from flnn_abc.services.config_loader import ConfigLoader
from flnn_abc.services.report_writer import ReportWriter

logger = logging.getLogger(__name__)


def _explicit(parser: configparser.ConfigParser, option: str) -> bool:
    return parser.has_section("abc") and option in parser["abc"]


def cmd_abc_demo(args: argparse.Namespace) -> int:
    benchmark = BENCHMARK_FUNCTIONS.get(args.function)
    if benchmark is None:
        raise ConfigError(
            f"unknown function {args.function!r}; choose from {', '.join(sorted(BENCHMARK_FUNCTIONS))}"
        )
    if args.dim < 1:
        raise ConfigError(f"--dim must be at least 1, got {args.dim}")
    if args.seed is not None and args.seed < 0:
        raise ConfigError(f"--seed must be non-negative, got {args.seed}")

    parser = ConfigLoader.read_parser(args.config, args.overrides)
    if not parser.has_section("abc"):
        parser.add_section("abc")
    parser["abc"]["dim"] = str(args.dim)
    for option, value in (("lower", benchmark.lower), ("upper", benchmark.upper)):
        if not _explicit(parser, option):
            parser["abc"][option] = str(value)
    if args.seed is not None:
        parser["abc"]["seed"] = str(args.seed)
    abc = ConfigLoader.abc_config(parser)
    out = output_dir(args, parser.get("run", "output_dir", fallback=None) or None)

    logger.info(f"ABC on {args.function} (dim {args.dim}, colony {abc.colony_size}, {abc.max_cycles} cycles)")
    result = run_abc(benchmark.func, abc)

    ReportWriter.ensure_writable(out)
    ReportWriter.write_history(out / "trace.csv", result.history, "cycle")
    resolved = configparser.ConfigParser(interpolation=None)
    resolved["demo"] = {"function": args.function, "dim": str(args.dim)}
    resolved["abc"] = {k: str(v) for k, v in abc.model_dump(exclude={"bounds"}).items() if v is not None}
    ConfigLoader.write_resolved(resolved, out)

    print(f"function:       {args.function}")
    print(f"cycles:         {result.cycles_run}")
    print(f"evaluations:    {result.evaluations}")
    print(f"best_objective: {result.best_objective:.6g}")
    print(f"known_minimum:  {benchmark.minimum:.6g}")
    return 0


def register(subparsers) -> None:
    demo = subparsers.add_parser(
        "abc-demo", parents=[common_flags()], help="run the bee colony on a benchmark function"
    )
    demo.add_argument("--function", default="sphere", help=f"one of {', '.join(sorted(BENCHMARK_FUNCTIONS))}")
    demo.add_argument("--dim", type=int, default=5, help="problem dimension")
    demo.set_defaults(handler=cmd_abc_demo)
