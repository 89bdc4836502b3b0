"""Pipeline plumbing shared by the subcommands: input resolution and output emission."""

import logging
from pathlib import Path
from typing import List, Optional

from ..builtins import get_builtin
from ..config import RunConfig
from ..curve_geometry import SampledCurve, write_curve_csv
from ..diagram import LinkDiagram
from ..errors import ConfigError
from ..fourier_core import FourierKnot
from ..helpers import atomic_write_bytes, atomic_write_text, slugify
from ..invariants import InvariantReport
from ..render import render_svg
from ..spec_file import read_spec

logger = logging.getLogger(__name__)


def resolve_knot(config: RunConfig) -> FourierKnot:
    """The knot named by the config: a spec file or a builtin."""
    if config.spec_path is not None:
        return read_spec(config.spec_path)
    if config.builtin is not None:
        return get_builtin(config.builtin, config.builtin_params)
    raise ConfigError("no input: pass --builtin NAME or --spec FILE")


def output_path(config: RunConfig, name: str, suffix: str) -> Path:
    return Path(config.output_dir) / f"{slugify(name)}{suffix}"


def write_svg(config: RunConfig, name: str, curve: SampledCurve, d: LinkDiagram) -> Path:
    path = output_path(config, name, ".svg")
    atomic_write_bytes(path, render_svg(
        curve, d, d.frame, title=name,
        gap_fraction=config.svg_gap_fraction, size_inches=config.svg_size_inches,
    ))
    return path


def emit_outputs(
    config: RunConfig,
    name: str,
    curve: Optional[SampledCurve],
    d: LinkDiagram,
    report: Optional[InvariantReport],
) -> List[Path]:
    """Write every requested format; returns the paths written.

    csv and svg need a sampled curve and are skipped for bare diagrams.
    """
    written = []
    if "csv" in config.formats and curve is not None:
        written.append(write_curve_csv(curve, output_path(config, name, ".csv")))
    if "svg" in config.formats and curve is not None and d.frame is not None:
        written.append(write_svg(config, name, curve, d))
    if "pd" in config.formats:
        path = output_path(config, name, ".pd")
        atomic_write_text(path, d.pd_code + "\n")
        written.append(path)
    if "gauss" in config.formats:
        path = output_path(config, name, ".gauss")
        atomic_write_text(path, d.gauss_code + "\n")
        written.append(path)
    if "report" in config.formats and report is not None:
        path = output_path(config, name, ".report.txt")
        atomic_write_text(path, report.to_text())
        written.append(path)
    for path in written:
        logger.info(f"wrote {path}")
    return written
