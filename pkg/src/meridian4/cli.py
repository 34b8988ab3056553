"""Command-line entry point: ``meridian4 analyze|classify|verify``."""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import tempfile
from typing import List, Optional

from .classifier import classify_meridian
from .config import load_config
from .errors import ConfigError, GeometryError
from .numkit import TolerancePolicy
from .report import format_result, run_analysis
from .verify import run_verify

EXIT_CONFIG = 2
EXIT_EVALUATION = 3
EXIT_NOT_MERIDIAN = 4


def _policy() -> TolerancePolicy:
    return TolerancePolicy.from_env()


def _write_atomic(path: str, text: str) -> None:
    # write beside the target then rename, so a failed run never leaves a partial file
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".meridian4-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def cmd_analyze(args) -> int:
    try:
        config = load_config(args.config, _policy())
    except (ConfigError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        result = run_analysis(config)
    except GeometryError as exc:
        print(f"evaluation error: {exc}", file=sys.stderr)
        return EXIT_EVALUATION
    text = format_result(result, args.format)
    if args.out == "-":
        sys.stdout.write(text)
    else:
        _write_atomic(args.out, text)
    if result.rows_skipped:
        print(f"warning: {result.rows_skipped} of {result.grid_size} grid points skipped", file=sys.stderr)
    return 0


def cmd_classify(args) -> int:
    try:
        config = load_config(args.config, _policy())
    except (ConfigError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if not config.is_meridian:
        print("classify needs a meridian surface config", file=sys.stderr)
        return EXIT_NOT_MERIDIAN
    try:
        result = classify_meridian(config.build(), config.grid(), config.policy)
    except GeometryError as exc:
        print(f"evaluation error: {exc}", file=sys.stderr)
        return EXIT_EVALUATION
    print(json.dumps(result.as_dict(), indent=2))
    return 0


def cmd_verify(args) -> int:
    try:
        policy = _policy()
    except ValueError as exc:
        print(f"bad environment override: {exc}", file=sys.stderr)
        return 1
    return run_verify(policy, args.filter, sys.stdout)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="meridian4",
                                     description="Invariants and semi-parallelity of surfaces in E^4.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log skipped points and progress")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="evaluate invariants on a parameter grid")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True, help="output path, or - for stdout")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("classify", help="classify a meridian surface")
    p.add_argument("--config", required=True)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("verify", help="run the built-in verification suite")
    p.add_argument("--filter", default=None, help="run only groups whose name or tag contains this")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR,
                        format="%(levelname)s %(name)s: %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
