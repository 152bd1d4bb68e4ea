"""
Command-line entry point for the polar OAI toolkit.

    python main.py construct --family c2 --m 4 --out f.tt
    python main.py analyze f.tt --metrics all
    python main.py reproduce-table --n-max 14 --out table.csv
    python main.py verify prop3 --m-range 2..8
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from dotenv import load_dotenv

sys.path.append(str(Path(__file__).parent))

from app.config import get_settings
from app.errors import EXIT_IO, EXIT_OK, EXIT_USAGE, PolarError
from app.logging import configure_logging
from app.orchestrator import CommandResult, PolarOrchestrator
from app.router import ALL_METRICS, targets
from core.constructions import Family
from storage.report_store import record_run

load_dotenv()
logger = logging.getLogger(__name__)


def _make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="polar",
        description="Boolean functions with optimal algebraic immunity from the polar decomposition of GF(2^2m)*",
    )
    p.add_argument("--log-level", default=None, help="override POLAR_LOG_LEVEL (debug, info, warning, error)")
    p.add_argument("-q", "--quiet", action="store_true", help="only log warnings and errors")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("construct", help="build a function family and write its truth table")
    s.add_argument("--family", required=True, help=", ".join(f.value for f in Family))
    s.add_argument("--m", type=int, required=True, help="half-dimension; n = 2m")
    s.add_argument("--shift", type=int, default=0, help="beta exponent offset for c1shift")
    s.add_argument("--lambda-seed", type=int, default=None, help="seed for the c2general lambda' set")
    s.add_argument("--lambda-k", default=None, help="comma list of k for lambda' = {xi^k} (c2general)")
    s.add_argument("--out", default=None, help="output path (stdout when omitted)")

    s = sub.add_parser("analyze", help="compute metrics of a truth-table file")
    s.add_argument("path")
    s.add_argument("--metrics", default="all", help="comma list of " + ", ".join(ALL_METRICS))
    s.add_argument("--format", dest="fmt", choices=("json", "csv"), default="json")
    s.add_argument("--out", default=None)
    s.add_argument("--cap-override", action="store_true", help="run metrics above their size cap")
    s.add_argument("--with-timings", action="store_true", help="include per-metric runtimes")

    s = sub.add_parser("reproduce-table", help="nonlinearity comparison table as CSV")
    s.add_argument("--n-max", type=int, default=14)
    s.add_argument("--out", default=None)
    s.add_argument("--with-ai", action="store_true", help="add an AI column up to the AI cap")
    s.add_argument("--cap-override", action="store_true")

    s = sub.add_parser("verify", help="run a verification target over a range of m")
    s.add_argument("target", help=", ".join(targets()))
    s.add_argument("--m-range", default="2..6", help='e.g. "2..8" or "2,4"')
    s.add_argument("--format", dest="fmt", choices=("text", "json"), default="text")
    s.add_argument("--out", default=None, help="also write the JSON report here")
    s.add_argument("--cap-override", action="store_true")
    return p


def _dispatch(args: argparse.Namespace) -> CommandResult:
    orchestrator = PolarOrchestrator()
    if args.command == "construct":
        return orchestrator.cmd_construct(
            args.family, args.m, shift=args.shift, lambda_seed=args.lambda_seed, lambda_k=args.lambda_k, out=args.out
        )
    if args.command == "analyze":
        return orchestrator.cmd_analyze(
            args.path,
            metrics=args.metrics,
            fmt=args.fmt,
            out=args.out,
            cap_override=args.cap_override,
            with_timings=args.with_timings,
        )
    if args.command == "reproduce-table":
        return orchestrator.cmd_reproduce_table(
            args.n_max, out=args.out, with_ai=args.with_ai, cap_override=args.cap_override
        )
    return orchestrator.cmd_verify(
        args.target, args.m_range, fmt=args.fmt, out=args.out, cap_override=args.cap_override
    )


def main(argv: Optional[List[str]] = None) -> int:
    args = _make_parser().parse_args(argv)
    try:
        level = configure_logging("WARNING" if args.quiet else args.log_level or get_settings().log_level)
        logger.debug("polar %s at log level %s", args.command, level)
        _dispatch(args)
        code = EXIT_OK
    except PolarError as exc:
        print(f"error: {exc}", file=sys.stderr)
        code = exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        code = EXIT_IO
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        code = EXIT_USAGE
    record_run(command=args.command, arguments=vars(args), exit_code=code)
    return code


if __name__ == "__main__":
    sys.exit(main())
