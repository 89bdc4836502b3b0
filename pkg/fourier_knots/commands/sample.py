"""`sample`: write the sampled curve of a knot as CSV."""

import argparse
import logging
from typing import Dict

from ..config import RunConfig
from ..curve_geometry import sample, speed_bound, write_curve_csv
from ..fourier_core import normalize_traversal, period
from .common import output_path, resolve_knot

logger = logging.getLogger(__name__)


def register(subparsers: argparse._SubParsersAction, parents: Dict[str, argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser(
        "sample",
        parents=[parents["input"], parents["output"]],
        help="Sample a knot into a t,x,y,z CSV",
    )
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace, config: RunConfig) -> int:
    knot = normalize_traversal(resolve_knot(config))
    curve = sample(knot, config.chord)
    path = write_curve_csv(curve, output_path(config, knot.name, ".csv"))
    print(f"period = {period(knot):.17g}")
    print(f"points = {len(curve)}")
    print(f"speed_bound = {speed_bound(knot):.17g}")
    print(f"csv = {path}")
    return 0
