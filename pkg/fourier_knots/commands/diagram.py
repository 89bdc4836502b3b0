"""`diagram`: invariants of a diagram given as PD or Gauss code."""

import argparse
import logging
from pathlib import Path
from typing import Dict

from ..config import RunConfig
from ..diagram import STANDARD_PD, diagram_from_gauss, diagram_from_pd
from ..errors import ConfigError
from ..invariants import diagram_report
from .common import emit_outputs

logger = logging.getLogger(__name__)


def register(subparsers: argparse._SubParsersAction, parents: Dict[str, argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser(
        "diagram",
        parents=[parents["output"]],
        help="Report the invariants of a PD or Gauss code",
    )
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--pd", help='PD code, e.g. "X[1,5,2,4] X[3,1,4,6] X[5,3,6,2]"')
    source.add_argument("--gauss", help='Gauss code as emitted by this tool, e.g. "O+1,U+2,..."')
    source.add_argument("--file", type=Path, help="File holding a PD or Gauss code")
    source.add_argument("--standard", choices=sorted(STANDARD_PD), help="A built-in standard diagram")
    parser.add_argument("--name", default="diagram", help="Stem for output files (default: diagram)")
    parser.set_defaults(handler=run)


def _parse(text: str):
    text = text.strip()
    if not text:
        raise ConfigError("empty diagram code")
    if text.startswith(("X[", "PD[")):
        return diagram_from_pd(text)
    return diagram_from_gauss(text)


def run(args: argparse.Namespace, config: RunConfig) -> int:
    if args.pd is not None:
        d = diagram_from_pd(args.pd)
    elif args.gauss is not None:
        d = diagram_from_gauss(args.gauss)
    elif args.standard is not None:
        d = diagram_from_pd(STANDARD_PD[args.standard])
    else:
        d = _parse(args.file.read_text(encoding="utf-8"))
    logger.debug(f"diagram: {d.crossing_count} crossings, {len(d.components)} component(s)")
    report = diagram_report(d)
    emit_outputs(config, args.name, None, d, report)
    print(report.to_text(), end="")
    return 0
