"""Command-line entry point: ``roughwave <command> [options]``."""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from .commands import run, summary_line
from .config import OUTPUT_DIR_ENV, Command, ReportFormat, load_config, parse_overrides
from .errors import InputError, RoughWaveError
from .reports import write_report

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_USAGE = 2
EXIT_CERTIFICATE = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="roughwave",
        description="Numerical experiments for the fractional stochastic wave equation.",
        epilog=f"Reports go to ${OUTPUT_DIR_ENV} (default: current directory) unless --out is given.",
    )
    parser.add_argument("command", choices=[c.value for c in Command])
    parser.add_argument("--config", help="flat key = value config file")
    parser.add_argument("--out", help="report path")
    parser.add_argument("--format", choices=[f.value for f in ReportFormat])
    parser.add_argument("--seed", type=int, help="master seed for Monte Carlo streams")
    parser.add_argument("--tol", type=float, help="relative quadrature tolerance")
    parser.add_argument("--workers", type=int, help="worker processes for parameter points")
    parser.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE",
                        help="override one config key; repeatable")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        overrides = parse_overrides(args.overrides)
        for key, val in (("output", args.out), ("format", args.format), ("seed", args.seed),
                         ("tolerance", args.tol), ("workers", args.workers)):
            if val is not None:
                overrides[key] = str(val)
        cfg = load_config(args.config, overrides, args.command)
    except (InputError, ValueError) as exc:
        parser.print_usage(sys.stderr)
        print(f"roughwave: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        report = run(cfg)
    except RoughWaveError as exc:
        print(f"roughwave: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    path = write_report(report, cfg)
    print(summary_line(report))
    print(f"report: {path}")
    return EXIT_OK if report.passed else EXIT_CERTIFICATE


if __name__ == "__main__":
    sys.exit(main())
