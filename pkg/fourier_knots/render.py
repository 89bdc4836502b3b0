"""
SVG drawings of knot projections.

The projected polyline is drawn with the under strand broken at every
crossing: a gap of ``gap_fraction`` times the image diagonal is cut on
each side of the under passage, so over/under can be read off the picture.
Output is byte-for-byte deterministic for identical inputs.
"""

import io
import logging
from typing import List, Tuple

import numpy as np
from matplotlib import rc_context
from matplotlib.backends.backend_svg import FigureCanvasSVG
from matplotlib.figure import Figure

from .curve_geometry import ProjectionFrame, SampledCurve
from .diagram import LinkDiagram
from .errors import InvalidDiagram

logger = logging.getLogger(__name__)

DEFAULT_GAP_FRACTION = 0.015
DEFAULT_SIZE_INCHES = 6.0

_SVG_RC = {
    "svg.hashsalt": "fourier-knots",
    "svg.fonttype": "none",
    "path.simplify": False,
}


def _arclength(closed: np.ndarray) -> np.ndarray:
    """Cumulative image-plane length at each vertex of the closed polyline."""
    seg = np.linalg.norm(np.diff(closed, axis=0), axis=1)
    return np.concatenate([[0.0], np.cumsum(seg)])


def _merge_gaps(centers: np.ndarray, half: float, total: float) -> List[Tuple[float, float]]:
    """Gap intervals around ``centers`` merged on a circle of length ``total``."""
    gaps: List[List[float]] = []
    for c in np.sort(centers):
        lo, hi = c - half, c + half
        if gaps and lo <= gaps[-1][1]:
            gaps[-1][1] = max(gaps[-1][1], hi)
        else:
            gaps.append([lo, hi])
    # The last gap may run past the end and into the first one.
    while len(gaps) > 1 and gaps[-1][1] - total >= gaps[0][0]:
        first = gaps.pop(0)
        gaps[-1][1] = max(gaps[-1][1], first[1] + total)
    return [(lo, hi) for lo, hi in gaps]


def strand_pieces(
    curve: SampledCurve,
    diagram: LinkDiagram,
    frame: ProjectionFrame,
    gap_fraction: float = DEFAULT_GAP_FRACTION,
) -> List[np.ndarray]:
    """Visible pieces of the projected curve, each an (m, 2) array.

    With no crossings the single piece is the closed polyline.
    """
    flat = frame.project(curve.points)
    closed = np.vstack([flat, flat[:1]])
    if diagram.crossing_count == 0:
        return [closed]

    cum = _arclength(closed)
    total = float(cum[-1])
    params = np.append(curve.params, curve.params[0] + curve.period)
    unders = []
    for c in diagram.crossings:
        if c.under_param is None:
            raise InvalidDiagram(f"crossing {c.id} has no curve parameter; cannot draw it")
        t = (c.under_param - params[0]) % curve.period + params[0]
        unders.append(np.interp(t, params, cum))

    lo, hi = flat.min(axis=0), flat.max(axis=0)
    half = gap_fraction * float(np.linalg.norm(hi - lo))
    gaps = _merge_gaps(np.array(unders), half, total)

    # Two laps so that pieces crossing the start point stay contiguous.
    cum2 = np.concatenate([cum[:-1], cum + total])
    pts2 = np.vstack([closed[:-1], closed])
    pieces = []
    for k, (_, end) in enumerate(gaps):
        start_next = gaps[(k + 1) % len(gaps)][0] + (total if k + 1 == len(gaps) else 0.0)
        a = end % total
        b = a + (start_next - end)
        if b <= a:
            continue
        inside = (cum2 > a) & (cum2 < b)
        ends = np.column_stack([np.interp([a, b], cum2, pts2[:, 0]), np.interp([a, b], cum2, pts2[:, 1])])
        pieces.append(np.vstack([ends[:1], pts2[inside], ends[1:]]))
    logger.debug(f"strand_pieces: {diagram.crossing_count} crossings -> {len(pieces)} pieces")
    return pieces


def render_svg(
    curve: SampledCurve,
    diagram: LinkDiagram,
    frame: ProjectionFrame,
    title: str = "",
    gap_fraction: float = DEFAULT_GAP_FRACTION,
    size_inches: float = DEFAULT_SIZE_INCHES,
) -> bytes:
    """SVG document of the broken-strand projection."""
    pieces = strand_pieces(curve, diagram, frame, gap_fraction)
    with rc_context(_SVG_RC):
        fig = Figure(figsize=(size_inches, size_inches))
        FigureCanvasSVG(fig)
        ax = fig.add_subplot(1, 1, 1)
        for k, piece in enumerate(pieces):
            (line,) = ax.plot(piece[:, 0], piece[:, 1], color="black", linewidth=2.0,
                              solid_capstyle="butt")
            line.set_gid(f"strand-{k}")
        ax.set_aspect("equal")
        ax.set_axis_off()
        label = f"{title}, view {frame.label()}" if title else f"view {frame.label()}"
        ax.set_title(label)
        buf = io.BytesIO()
        fig.savefig(buf, format="svg", metadata={"Date": None})
    return buf.getvalue()
