"""
CLI entrypoint for fourier-knots.

Usage:
    fourier-knots invariants --builtin trefoil         # Full report
    fourier-knots sample --builtin fibonacci --n 6     # Sampled curve CSV
    fourier-knots svg --spec myknot.knot --view x      # Diagram drawing
    fourier-knots diagram --standard figure-eight      # Invariants of a PD code
    fourier-knots approximate --csv loop.csv           # Fourier fit of a polyline
    fourier-knots claim-suite                          # Every claim check
    fourier-knots --print-config                       # Print resolved config

Exit codes are listed in fourier_knots.errors.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from . import __version__
from .commands import register_all
from .config import FORMATS, RunConfig, discover_config, load_config
from .errors import EXIT_IO, EXIT_USAGE, KnotToolkitError

logger = logging.getLogger(__name__)


def _input_parent() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    group = parent.add_argument_group("knot input")
    group.add_argument("--builtin", help="Built-in knot: trefoil, figure8, fibonacci, torus, lissajous")
    group.add_argument("--spec", type=Path, help="Knot spec file")
    group.add_argument("--n", type=int, help="Fibonacci index (fibonacci, default 3)")
    group.add_argument("--p", type=int, help="Torus parameter p (torus, default 2)")
    group.add_argument("--q", type=int, help="Torus parameter q (torus, default 3)")
    group.add_argument("--freqs", help="Lissajous frequencies, e.g. 3,2,7")
    group.add_argument("--phases", help="Lissajous phases, e.g. 0.7,0.2,0")
    group.add_argument("--amps", help="Lissajous amplitudes, e.g. 1,1,1")
    return parent


def _output_parent() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    group = parent.add_argument_group("pipeline and output")
    group.add_argument("--chord", type=float, help="Target chord length (default 0.02)")
    group.add_argument("--max-halvings", type=int, help="Chord halvings before giving up (default 3)")
    view = group.add_mutually_exclusive_group()
    view.add_argument("--view", choices=("z", "x", "y"), help="Project along a coordinate axis")
    view.add_argument("--direction", help="Project along a direction vector, e.g. 1,2,3")
    group.add_argument("--output-dir", "-o", type=Path, help="Directory for output files (default .)")
    group.add_argument(
        "--formats",
        help=f"Comma-separated outputs from {','.join(FORMATS)} (default report)",
    )
    return parent


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fourier-knots",
        description="Fourier knots: sample, certify, project and identify",
    )
    parser.add_argument(
        "--config", "-c",
        type=Path,
        help="Path to config file (default: auto-discover .fourier-knots.yaml)",
    )
    parser.add_argument(
        "--print-config",
        action="store_true",
        help="Print resolved config as YAML and exit",
    )
    parser.add_argument(
        "-v", "--verbose",
        action="store_true",
        help="Verbose logging",
    )
    parser.add_argument(
        "--version",
        action="version",
        version=f"fourier-knots {__version__}",
    )
    subparsers = parser.add_subparsers(dest="command", metavar="COMMAND")
    register_all(subparsers, {"input": _input_parent(), "output": _output_parent()})
    return parser


def _split(text: str) -> List[str]:
    return [v.strip() for v in text.split(",") if v.strip()]


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """defaults < config file < CLI flags."""
    config = load_config(args.config) if args.config else discover_config()

    builtin = getattr(args, "builtin", None)
    spec = getattr(args, "spec", None)
    if builtin is not None:
        config.builtin, config.spec_path = builtin, None
    if spec is not None:
        config.spec_path, config.builtin = spec, None
    for key in ("n", "p", "q", "freqs", "phases", "amps"):
        value = getattr(args, key, None)
        if value is not None:
            config.builtin_params[key] = value

    if getattr(args, "chord", None) is not None:
        config.chord = args.chord
    if getattr(args, "max_halvings", None) is not None:
        config.max_halvings = args.max_halvings
    if getattr(args, "view", None) is not None:
        config.view, config.direction = args.view, None
    if getattr(args, "direction", None) is not None:
        try:
            config.direction = [float(v) for v in _split(args.direction)]
        except ValueError as e:
            raise argparse.ArgumentTypeError(f"bad --direction {args.direction!r}") from e
        config.view = None
    if getattr(args, "output_dir", None) is not None:
        config.output_dir = args.output_dir
    if getattr(args, "formats", None) is not None:
        config.formats = _split(args.formats)
    return config.validate()


def main(argv: Optional[List[str]] = None) -> int:
    """Main entrypoint."""
    parser = build_parser()
    args = parser.parse_args(argv)

    # Set up logging; stderr only, stdout carries the results.
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s:%(name)s:%(message)s",
    )

    try:
        config = resolve_config(args)
        if args.print_config:
            print(config.to_yaml(), end="")
            return 0
        if args.command is None:
            parser.print_help(sys.stderr)
            return EXIT_USAGE
        return args.handler(args, config)
    except KnotToolkitError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    except (argparse.ArgumentTypeError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
