"""
Knot spec text format.

One knot per file:

    # comment
    knot fourier-trefoil
    x 1 2 0
    y 1 3 0.5
    z 0.5 5 0.5
    z 0.5 3 0.5 sin

Each term line is ``<axis> <amplitude> <frequency> <phase> [sin]``.
Frequencies are integers or ``p/q`` fractions. Numbers always use ``.``
as the decimal point regardless of locale.
"""

import logging
import math
from fractions import Fraction
from pathlib import Path
from typing import Dict, List

from .errors import SpecParseError
from .fourier_core import CosTerm, FourierKnot, FourierSeries, sine_term
from .helpers import atomic_write_text

logger = logging.getLogger(__name__)

AXES = ("x", "y", "z")


def _parse_real(token: str, what: str, line_no: int) -> float:
    try:
        value = float(token)
    except ValueError:
        raise SpecParseError(f"{what} is not a number: {token!r}", line_no) from None
    if not math.isfinite(value):
        raise SpecParseError(f"{what} must be finite: {token!r}", line_no)
    return value


def _parse_frequency(token: str, line_no: int) -> Fraction:
    # Fraction() would also accept "2.5" and "1e3"; only integers and p/q are valid here.
    num, sep, den = token.partition("/")
    try:
        if sep:
            return Fraction(int(num), int(den))
        return Fraction(int(token))
    except (ValueError, ZeroDivisionError):
        raise SpecParseError(f"frequency must be an integer or p/q: {token!r}", line_no) from None


def parse_spec(text: str) -> FourierKnot:
    """Parse spec text into a FourierKnot."""
    name = None
    terms: Dict[str, List[CosTerm]] = {axis: [] for axis in AXES}

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()

        if fields[0] == "knot":
            if name is not None:
                raise SpecParseError("duplicate 'knot' header", line_no)
            if len(fields) != 2:
                raise SpecParseError("header must be 'knot <name>'", line_no)
            name = fields[1]
            continue

        if name is None:
            raise SpecParseError("term before 'knot <name>' header", line_no)
        axis = fields[0]
        if axis not in AXES:
            raise SpecParseError(f"unknown axis {axis!r} (expected x, y or z)", line_no)
        if len(fields) not in (4, 5):
            raise SpecParseError("term must be '<axis> <amplitude> <freq> <phase> [sin]'", line_no)
        if len(fields) == 5 and fields[4] != "sin":
            raise SpecParseError(f"unexpected trailing token {fields[4]!r}", line_no)

        amplitude = _parse_real(fields[1], "amplitude", line_no)
        frequency = _parse_frequency(fields[2], line_no)
        phase = _parse_real(fields[3], "phase", line_no)
        if len(fields) == 5:
            terms[axis].append(sine_term(amplitude, frequency, phase))
        else:
            terms[axis].append(CosTerm(amplitude, frequency, phase))

    if name is None:
        raise SpecParseError("missing 'knot <name>' header")
    knot = FourierKnot(*(FourierSeries(tuple(terms[a])) for a in AXES), name=name)
    logger.debug(f"parsed spec {name!r}: terms per axis {knot.term_counts()}")
    return knot


def read_spec(path: Path) -> FourierKnot:
    return parse_spec(Path(path).read_text(encoding="utf-8"))


def format_spec(knot: FourierKnot) -> str:
    """Render a knot as spec text.

    Terms are written in canonical cosine form; ``repr`` keeps every float
    exact so parsing the output gives back an equal knot.
    """
    name = knot.name.split()[0] if knot.name.strip() else "knot"
    lines = [f"knot {name}"]
    for axis, series in zip(AXES, knot.coordinates):
        for term in series.terms:
            lines.append(f"{axis} {term.amplitude!r} {term.frequency} {term.phase!r}")
    return "\n".join(lines) + "\n"


def write_spec(knot: FourierKnot, path: Path) -> Path:
    atomic_write_text(Path(path), format_spec(knot))
    return Path(path)
