# flnn_abc/main.py
"""
Command-line entry point.

    python -m flnn_abc train     --config configs/uci_benchmark.ini --set train.trainer=flnn_abc
    python -m flnn_abc evaluate  --config configs/uci_benchmark.ini --set train.trainer=flnn_abc
    python -m flnn_abc benchmark --config configs/uci_benchmark.ini --out runs/uci
    python -m flnn_abc abc-demo  --function rastrigin --dim 2

Exit codes: 0 ok, 1 config or usage error, 2 data error, 3 training
error, 4 protocol run error, 5 report I/O error.
"""
import argparse
import sys
from typing import List, Optional

from flnn_abc import __version__
from flnn_abc.cli import abc_demo, benchmark, training
from flnn_abc.core.errors import FlnnAbcError
from flnn_abc.core.logging_setup import configure_logging


class _ArgumentParser(argparse.ArgumentParser):
    """Usage errors exit 1; exit 2 is reserved for data errors."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog="flnn_abc",
        description="Functional link neural networks trained by an artificial bee colony.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", metavar="COMMAND", required=True)

    training.register(subparsers)
    benchmark.register(subparsers)
    abc_demo.register(subparsers)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(-1 if args.quiet else 1 if args.verbose else 0)
    try:
        return args.handler(args)
    except FlnnAbcError as e:
        print(f"Error: {e}", file=sys.stderr)
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
