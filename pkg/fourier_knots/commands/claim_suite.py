"""`claim-suite`: run every end-to-end claim check and print the table."""

import argparse
from typing import Dict

from ..config import RunConfig
from ..errors import ClaimSuiteFailed
from ..claim_suite import CLAIM_NAMES, format_table, run_claim_suite


def register(subparsers: argparse._SubParsersAction, parents: Dict[str, argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser(
        "claim-suite",
        help="Reproduce the Fourier knot claims; exit 1 if any fails",
    )
    parser.add_argument(
        "--only",
        action="append",
        choices=CLAIM_NAMES,
        metavar="CLAIM",
        help="Run just this claim (repeatable)",
    )
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace, config: RunConfig) -> int:
    results = run_claim_suite(only=args.only)
    print(format_table(results), end="")
    failed = [r.claim for r in results if not r.passed]
    if failed:
        raise ClaimSuiteFailed(f"{len(failed)} claim(s) failed: {', '.join(failed)}")
    return 0
