"""`invariants`: run the full pipeline and report the knot's invariants."""

import argparse
import logging
from typing import Dict

from ..config import RunConfig
from ..invariants import diagram_report, knot_diagram
from .common import emit_outputs, resolve_knot

logger = logging.getLogger(__name__)


def register(subparsers: argparse._SubParsersAction, parents: Dict[str, argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser(
        "invariants",
        parents=[parents["input"], parents["output"]],
        help="Certify, project and compute the invariant report",
    )
    parser.add_argument(
        "--record",
        action="store_true",
        help="Print the report as one tab-separated record instead of key = value lines",
    )
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace, config: RunConfig) -> int:
    knot = resolve_knot(config)
    curve, d, used_chord = knot_diagram(
        knot, config.chord, config.max_halvings, frame=config.projection()
    )
    report = diagram_report(d, chord=used_chord)
    emit_outputs(config, knot.name, curve, d, report)
    if args.record:
        print(report.to_record())
    else:
        print(f"knot = {knot.name}")
        print(report.to_text(), end="")
    return 0
