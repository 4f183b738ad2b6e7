# command-line entry point
# builds the argument parser, sets up logging and hands off to cli.commands

import argparse
import logging
import sys
from typing import List, Optional

from arithlab import __version__
from arithlab.cli.commands import run
from arithlab.core.config import settings
from arithlab.services.suites import SUITES

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="arithlab",
        description="Exact checks for arithmetic Hitchin representations: cocycles, forms, G2, bending",
    )
    parser.add_argument("--version", action="version", version=f"arithlab {__version__}")

    # shared flags live on every subcommand so they may follow the command name
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=settings.SEED)
    common.add_argument("--budget", type=int, default=settings.TRACE_BUDGET,
                        help="BFS element budget for trace sets")
    common.add_argument("--out", default=None, help="report path (stdout when omitted)")
    common.add_argument("--log-level", default=settings.LOG_LEVEL)

    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify", parents=[common], help="run verification suites")
    verify.add_argument("--suite", action="append", required=True,
                        help=f"one of {', '.join(SUITES)} or all; repeatable")

    forms = sub.add_parser("forms", parents=[common], help="quadratic form invariants")
    forms.add_argument("action", choices=["invariants", "equiv", "jnab", "admissible"])
    forms.add_argument("--form", help="form fixture (invariants, admissible)")
    forms.add_argument("--lhs", help="first form fixture (equiv)")
    forms.add_argument("--rhs", help="second form fixture (equiv)")
    forms.add_argument("--field", type=int, default=None, help="m for Q(sqrt m); Q when omitted")
    forms.add_argument("--n", type=int)
    forms.add_argument("--a")
    forms.add_argument("--b")

    cocycle = sub.add_parser("cocycle", parents=[common], help="Hilbert 90 solutions")
    cocycle.add_argument("action", choices=["solve"])
    cocycle.add_argument("--field", type=int, default=None)
    cocycle.add_argument("--n", type=int)
    cocycle.add_argument("--a")
    cocycle.add_argument("--b")
    cocycle.add_argument("--kind", choices=["inner", "chi"], default="inner")

    bend = sub.add_parser("bend", parents=[common], help="bend a surface-group representation")
    bend.add_argument("action", choices=["run"])
    bend.add_argument("--fixture", required=True)
    bend.add_argument("--multipliers", nargs="+", help="override the fixture multipliers")
    bend.add_argument("--classify", action="store_true", help="add the Zariski-closure verdict")

    separate = sub.add_parser("separate", parents=[common], help="mod-p trace set experiment")
    separate.add_argument("--fixture", required=True)
    separate.add_argument("--primes", default="3,5,7", help="comma-separated rational primes")
    separate.add_argument("--max-power", type=int, default=2)
    separate.add_argument("--multipliers", nargs="+")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=args.log_level.upper(), format=LOG_FORMAT, stream=sys.stderr, force=True)
    return run(args)


if __name__ == "__main__":
    sys.exit(main())
