"""`approximate`: fit a Fourier knot to a closed polyline CSV."""

import argparse
import logging
from pathlib import Path
from typing import Dict

from ..config import RunConfig
from ..curve_geometry import read_curve_csv
from ..fourier_core import approximation_deviation, fourier_approximate
from ..invariants import full_report
from ..spec_file import write_spec
from .common import output_path

logger = logging.getLogger(__name__)


def register(subparsers: argparse._SubParsersAction, parents: Dict[str, argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser(
        "approximate",
        parents=[parents["output"]],
        help="Truncated Fourier fit of a closed polyline, written as a knot spec",
    )
    parser.add_argument("--csv", type=Path, required=True, help="Input polyline (t,x,y,z CSV)")
    parser.add_argument("--harmonics", type=int, help="Harmonics to keep (default: from config, 12)")
    parser.add_argument("--name", help="Knot name (default: CSV file stem)")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace, config: RunConfig) -> int:
    if args.harmonics is not None:
        config.harmonics = args.harmonics
        config.validate()
    curve = read_curve_csv(args.csv)
    knot = fourier_approximate(curve, config.harmonics, name=args.name or args.csv.stem)
    path = write_spec(knot, output_path(config, knot.name, ".knot"))
    print(f"spec = {path}")
    print(f"max_deviation = {approximation_deviation(knot, curve):.6g}")
    # NotEmbedded propagates: no verdict for a fit that cannot be certified.
    report = full_report(knot, config.chord, config.max_halvings, frame=config.projection())
    print(f"identification = {report.identification}")
    return 0
