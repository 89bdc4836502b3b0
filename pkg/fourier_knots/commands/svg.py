"""`svg`: draw the knot projection with broken under strands."""

import argparse
from typing import Dict

from ..config import RunConfig
from ..invariants import knot_diagram
from .common import resolve_knot, write_svg


def register(subparsers: argparse._SubParsersAction, parents: Dict[str, argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser(
        "svg",
        parents=[parents["input"], parents["output"]],
        help="Write an SVG drawing of the knot diagram",
    )
    parser.add_argument("--gap", type=float, help="Under-strand gap as a fraction of the image diagonal")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace, config: RunConfig) -> int:
    if args.gap is not None:
        config.svg_gap_fraction = args.gap
        config.validate()
    knot = resolve_knot(config)
    curve, d, _ = knot_diagram(knot, config.chord, config.max_halvings, frame=config.projection())
    path = write_svg(config, knot.name, curve, d)
    print(f"crossings = {d.crossing_count}")
    print(f"svg = {path}")
    return 0
