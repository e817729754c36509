from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from latticecft import __version__
from latticecft.config import SUITE_NAMES, config_echo, load_config, select_suites
from latticecft.engine import VerificationEngine
from latticecft.errors import ConfigError, LatticeCftError
from latticecft.reports import dumps_run, format_text_summary, run_to_dict, write_json_report

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_CONFIG = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="latticecft",
        description="Verify lattice extensions of Heisenberg CFTs at finite truncation.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="Run verification suites on a model config.")
    check.add_argument("config", help="Path to a YAML model config.")
    check.add_argument(
        "--suite",
        action="append",
        choices=SUITE_NAMES + ("all",),
        help="Suite to run (repeatable). Default: the config's suites, or all.",
    )
    check.add_argument("--out", default="", help="Write the JSON report to this file.")
    check.add_argument("--json", action="store_true", help="Print the JSON report to stdout.")
    check.add_argument("--timings", action="store_true", help="Include per-check timings in the JSON report.")
    check.add_argument("-v", "--verbose", action="count", default=0, help="More logging (-v info, -vv debug).")
    return parser


def _configure_logging(config_level: str, verbose: int) -> None:
    if verbose >= 2:
        level = logging.DEBUG
    elif verbose == 1:
        level = logging.INFO
    else:
        level = getattr(logging, str(config_level).upper(), logging.WARNING)
    logging.basicConfig(format="%(name)s:%(levelname)s:%(message)s", level=level)


def run_check(args: argparse.Namespace) -> int:
    try:
        config = load_config(Path(args.config))
        _configure_logging(config.logging.level, args.verbose)
        suites = select_suites(args.suite, config.suites)
        engine = VerificationEngine(config)
        reports = engine.run(suites)
    except ConfigError as exc:
        _configure_logging("WARNING", args.verbose)
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except LatticeCftError as exc:
        # a window or cutoff the suites cannot honour
        print(f"config error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    echo = config_echo(config)
    echo["resolvedBackend"] = engine.model.backend.name
    echo["selectedSuites"] = list(suites)
    payload = run_to_dict(echo, reports, timings=bool(args.timings))

    if args.out:
        write_json_report(payload, Path(args.out))
        logger.info("report written to %s", args.out)
    if args.json:
        sys.stdout.write(dumps_run(payload))
    elif not args.out:
        print(format_text_summary(reports))

    return EXIT_OK if payload["summary"]["ok"] else EXIT_FAILED


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "check":
        return run_check(args)
    parser.error(f"unknown command {args.command}")
    return EXIT_CONFIG


if __name__ == "__main__":
    raise SystemExit(main())
