"""
Sampling, embedding certificates and projections of closed space curves.

A ``SampledCurve`` is a closed polyline: the segment from the last point
back to the first is implicit. Segment ``i`` runs from ``points[i]`` to
``points[(i + 1) % n]``.

The embedding certificate wraps every segment in a tube whose radius
bounds how far the smooth arc behind it can stray from the chord
(``M2 * h^2 / 8``, zero for a bare polyline). Segment pairs that share a
vertex are skipped. The remaining pairs are "far apart" when the polyline
length strictly between them, measured the shorter way round, is at least
``LOCALITY_FACTOR`` times the longer of their two chords, and "near"
otherwise. Near pairs must not touch their tubes. The closest far pair
must clear ``CLEARANCE_FACTOR`` times the combined tube width. Both the
grid search and the brute-force scan use the same rules and the same
distance kernel, so they agree bit for bit.
"""

from __future__ import annotations

import io
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.spatial import cKDTree

from .errors import (
    CurveFormatError,
    InvalidCurve,
    InvalidFrame,
    NoGenericProjection,
    NonGenericProjection,
)
from .fourier_core import FourierKnot, evaluate_point, knot_derivative, period
from .helpers import atomic_write_text

logger = logging.getLogger(__name__)

MIN_SAMPLES = 8
# Certificate: far pairs must clear CLEARANCE_FACTOR * (2 * deviation_bound).
CLEARANCE_FACTOR = 2.0
LOCALITY_FACTOR = 4.0
# Contact tolerance between segments, relative to the curve diameter.
CONTACT_TOL = 1e-9
# Consecutive chords this close to antiparallel fold back onto each other.
FOLD_COS = -1.0 + 1e-12

FRAME_TOL = 1e-12
# Genericity tolerances, relative to the bounding-box diagonal of the curve.
HEIGHT_TOL = 1e-7
TRIPLE_POINT_TOL = 1e-7
MIN_CROSSING_ANGLE = 1e-4
REFINE_PARAM_TOL = 1e-11
REFINE_MAX_ITER = 50
REFINE_GAP_TOL = 1e-9
# Brackets, in sample steps, for refinement drift and near-coincident crossings.
REFINE_WINDOW_STEPS = 2.0
NEAR_PAIR_STEPS = 2.0
GOLDEN_ATTEMPTS = 64

Vec3 = Tuple[float, float, float]


# ---------------------------------------------------------------------------
# Sampled curves
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SampledCurve:
    """Closed polyline with the curve parameter of each vertex."""
    points: np.ndarray
    params: np.ndarray
    period: float
    source: Optional[FourierKnot] = field(default=None, repr=False)

    def __post_init__(self) -> None:
        points = np.array(self.points, dtype=float)
        params = np.array(self.params, dtype=float)
        if points.ndim != 2 or points.shape[1] != 3:
            raise InvalidCurve(f"points must have shape (n, 3), got {points.shape}")
        if params.shape != (len(points),):
            raise InvalidCurve(f"{len(params)} params for {len(points)} points")
        if len(points) < MIN_SAMPLES:
            raise InvalidCurve(f"need at least {MIN_SAMPLES} points, got {len(points)}")
        if not (np.all(np.isfinite(points)) and np.all(np.isfinite(params))):
            raise InvalidCurve("points and params must be finite")
        if not (math.isfinite(self.period) and self.period > 0):
            raise InvalidCurve(f"period must be positive, got {self.period}")
        if np.any(np.diff(params) <= 0):
            raise InvalidCurve("params must be strictly increasing")
        if params[-1] - params[0] >= self.period:
            raise InvalidCurve("params must span less than one period")
        chords = np.linalg.norm(np.roll(points, -1, axis=0) - points, axis=1)
        if np.any(chords == 0.0):
            k = int(np.argmin(chords))
            raise InvalidCurve(f"consecutive points {k} and {(k + 1) % len(points)} coincide")
        points.flags.writeable = False
        params.flags.writeable = False
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "params", params)
        object.__setattr__(self, "period", float(self.period))

    def __len__(self) -> int:
        return len(self.points)

    @property
    def chords(self) -> np.ndarray:
        return np.linalg.norm(np.roll(self.points, -1, axis=0) - self.points, axis=1)

    @property
    def param_steps(self) -> np.ndarray:
        """Parameter length of each segment, including the closing one."""
        nxt = np.append(self.params[1:], self.params[0] + self.period)
        return nxt - self.params

    @property
    def diameter(self) -> float:
        """Bounding-box diagonal of the samples."""
        return float(np.linalg.norm(self.points.max(axis=0) - self.points.min(axis=0)))

    def reversed(self) -> "SampledCurve":
        """The same polyline traversed backwards, starting at the same vertex.

        Parameters are mapped t -> -t (mod period), matching
        ``FourierKnot.reversed`` on the source.
        """
        order = np.r_[0, np.arange(len(self) - 1, 0, -1)]
        params = np.r_[-self.params[0], self.period - self.params[order[1:]]]
        source = self.source.reversed() if self.source is not None else None
        return SampledCurve(self.points[order], params, self.period, source)


def curve_from_points(points, period: float = 2.0 * math.pi) -> SampledCurve:
    """Polyline with uniformly spaced parameters over ``[0, period)``."""
    points = np.asarray(points, dtype=float)
    params = period * np.arange(len(points)) / len(points)
    return SampledCurve(points, params, period)


def speed_bound(knot: FourierKnot) -> float:
    """sqrt(Bx^2 + By^2 + Bz^2) with Bc the sum of |A*K| over coordinate c."""
    sums = [sum(abs(t.amplitude * float(t.frequency)) for t in s.terms) for s in knot.coordinates]
    return math.sqrt(sum(b * b for b in sums))


def acceleration_bound(knot: FourierKnot) -> float:
    """Upper bound on |curve''(t)|: same as ``speed_bound`` with |A*K^2| terms."""
    sums = [sum(abs(t.amplitude * float(t.frequency) ** 2) for t in s.terms) for s in knot.coordinates]
    return math.sqrt(sum(b * b for b in sums))


def sample(knot: FourierKnot, target_chord: float) -> SampledCurve:
    """Uniform samples over one period with every chord <= target_chord.

    Each chord is bounded by speed_bound * (period / n) via the mean value
    theorem, so n = ceil(period * speed_bound / target_chord) suffices.
    """
    if not (math.isfinite(target_chord) and target_chord > 0):
        raise ValueError(f"target chord must be positive, got {target_chord}")
    p = period(knot)
    n = max(MIN_SAMPLES, math.ceil(p * speed_bound(knot) / target_chord))
    params = p * np.arange(n) / n
    logger.debug(f"sample {knot.name!r}: period={p:.6g} n={n} target_chord={target_chord:g}")
    return SampledCurve(evaluate_point(knot, params), params, p, knot)


# ---------------------------------------------------------------------------
# CSV
# ---------------------------------------------------------------------------

CSV_HEADER = "t,x,y,z"


def format_curve_csv(curve: SampledCurve) -> str:
    buf = io.StringIO()
    table = np.column_stack([curve.params, curve.points])
    np.savetxt(buf, table, fmt="%.17g", delimiter=",", header=CSV_HEADER, comments="")
    return buf.getvalue()


def write_curve_csv(curve: SampledCurve, path: Path) -> Path:
    atomic_write_text(Path(path), format_curve_csv(curve))
    return Path(path)


def read_curve_csv(path: Path) -> SampledCurve:
    """Read a ``t,x,y,z`` CSV back into a curve.

    A trailing row repeating the first point is dropped. The period is the
    last parameter plus the mean parameter step.
    """
    path = Path(path)
    with open(path, encoding="utf-8") as f:
        header = f.readline().strip().replace(" ", "")
        if header != CSV_HEADER:
            raise CurveFormatError(f"{path}: expected header {CSV_HEADER!r}, got {header!r}")
        try:
            table = np.loadtxt(f, delimiter=",", ndmin=2)
        except ValueError as e:
            raise CurveFormatError(f"{path}: {e}") from e
    if table.size == 0:
        raise CurveFormatError(f"{path}: no samples")
    if table.shape[1] != 4:
        raise CurveFormatError(f"{path}: expected 4 columns, got {table.shape[1]}")
    if len(table) > 1 and np.array_equal(table[0, 1:], table[-1, 1:]):
        table = table[:-1]
    params, points = table[:, 0], table[:, 1:]
    if len(params) < 2:
        raise InvalidCurve(f"need at least {MIN_SAMPLES} points, got {len(params)}")
    step = (params[-1] - params[0]) / (len(params) - 1)
    return SampledCurve(points, params, float(params[-1] - params[0] + step))


# ---------------------------------------------------------------------------
# Embedding certificate
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EmbeddingReport:
    """Outcome of ``check_embedded``.

    ``min_clearance`` belongs to the reported pair: the closest far pair,
    or the offending pair when near segments touch or consecutive chords
    fold back. It is infinite when the curve is too coarse to have any far
    pair, and such a curve is never certified.
    """
    min_clearance: float
    closest_params: Tuple[float, float]
    chord_bound: float
    deviation_bound: float
    margin: float
    embedded: bool


def _dot3(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # Explicit component sums keep results identical for any batch layout.
    return a[..., 0] * b[..., 0] + a[..., 1] * b[..., 1] + a[..., 2] * b[..., 2]


def segment_distances(p1, q1, p2, q2):
    """Closest distance between segment batches [p1,q1] and [p2,q2].

    Returns ``(distance, s, t)`` where ``s`` and ``t`` locate the closest
    points along each segment in [0, 1]. Segments must have nonzero length.
    """
    d1 = q1 - p1
    d2 = q2 - p2
    r = p1 - p2
    a = _dot3(d1, d1)
    e = _dot3(d2, d2)
    f = _dot3(d2, r)
    c = _dot3(d1, r)
    b = _dot3(d1, d2)
    denom = a * e - b * b
    with np.errstate(divide="ignore", invalid="ignore"):
        s = np.where(denom > 0.0, np.clip((b * f - c * e) / denom, 0.0, 1.0), 0.0)
        t = (b * s + f) / e
        s = np.where(t < 0.0, np.clip(-c / a, 0.0, 1.0),
                     np.where(t > 1.0, np.clip((b - c) / a, 0.0, 1.0), s))
    t = np.clip(t, 0.0, 1.0)
    gap = (p1 + d1 * s[..., None]) - (p2 + d2 * t[..., None])
    return np.sqrt(_dot3(gap, gap)), s, t


# (i, j, distance, s, t) of one segment pair.
_Pair = Tuple[int, int, float, float, float]


def _first_min(i, j, dist, s, t) -> Optional[_Pair]:
    """Closest pair; argmin keeps the lexicographically first on ties."""
    if len(i) == 0:
        return None
    k = int(np.argmin(dist))
    return int(i[k]), int(j[k]), float(dist[k]), float(s[k]), float(t[k])


def _better(best: Optional[_Pair], candidate: Optional[_Pair]) -> Optional[_Pair]:
    if candidate is None:
        return best
    if best is None or candidate[2] < best[2]:
        return candidate
    return best


class _SegmentTable:
    """Per-segment data shared by both clearance scans."""

    def __init__(self, curve: SampledCurve):
        self.curve = curve
        self.starts = np.asarray(curve.points)
        self.ends = np.roll(self.starts, -1, axis=0)
        self.chords = curve.chords
        self.chord_bound = float(self.chords.max())
        self.cumulative = np.concatenate([[0.0], np.cumsum(self.chords)])
        self.total = float(self.cumulative[-1])
        if curve.source is not None:
            self.tubes = acceleration_bound(curve.source) * curve.param_steps ** 2 / 8.0
        else:
            self.tubes = np.zeros(len(curve))
        self.deviation_bound = float(self.tubes.max())
        self.contact_tol = CONTACT_TOL * curve.diameter
        self.margin = CLEARANCE_FACTOR * 2.0 * self.deviation_bound + self.contact_tol

    def classify(self, i: np.ndarray, j: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """Masks ``(far, near)`` for pairs i < j; vertex-sharing pairs are neither."""
        n = len(self.curve)
        cum = self.cumulative
        forward = cum[j] - cum[i + 1]
        backward = self.total - cum[j + 1] + cum[i]
        locality = LOCALITY_FACTOR * np.maximum(self.chords[i], self.chords[j])
        far = np.minimum(forward, backward) >= locality
        adjacent = (j - i == 1) | ((i == 0) & (j == n - 1))
        return far & ~adjacent, ~far & ~adjacent

    def distances(self, i: np.ndarray, j: np.ndarray):
        return segment_distances(self.starts[i], self.ends[i], self.starts[j], self.ends[j])

    def touching(self, i: np.ndarray, j: np.ndarray, dist: np.ndarray) -> np.ndarray:
        return dist <= self.tubes[i] + self.tubes[j] + self.contact_tol

    def fold(self) -> Optional[int]:
        """First vertex where the chords on either side are antiparallel."""
        d = self.ends - self.starts
        cos = _dot3(d, np.roll(d, 1, axis=0)) / (self.chords * np.roll(self.chords, 1))
        hits = np.flatnonzero(cos <= FOLD_COS)
        return int(hits[0]) if len(hits) else None

    def result(self, far_best: Optional[_Pair], contact: Optional[_Pair]) -> EmbeddingReport:
        fold = self.fold()
        if fold is not None:
            t = float(self.curve.params[fold])
            return self._report(0.0, (t, t), False)
        if contact is not None:
            return self._report(contact[2], self._params(contact), False)
        if far_best is None:
            t0 = float(self.curve.params[0])
            return self._report(math.inf, (t0, t0), False)
        return self._report(far_best[2], self._params(far_best), far_best[2] > self.margin)

    def _params(self, pair: _Pair) -> Tuple[float, float]:
        i, j, _, s, t = pair
        params, steps = self.curve.params, self.curve.param_steps
        return float(params[i] + s * steps[i]), float(params[j] + t * steps[j])

    def _report(self, dist: float, params: Tuple[float, float], embedded: bool) -> EmbeddingReport:
        return EmbeddingReport(dist, params, self.chord_bound, self.deviation_bound, self.margin, embedded)


def _brute_force_clearance(table: _SegmentTable, rows_per_chunk: int = 256) -> EmbeddingReport:
    n = len(table.curve)
    far_best: Optional[_Pair] = None
    contact: Optional[_Pair] = None
    # Row blocks come in lexicographic order, so strict improvement keeps the first minimum.
    for lo in range(0, n, rows_per_chunk):
        i, j = _row_block(n, lo, rows_per_chunk)
        far, near = table.classify(i, j)
        dist, s, t = table.distances(i, j)
        far_best = _better(far_best, _first_min(i[far], j[far], dist[far], s[far], t[far]))
        touch = near & table.touching(i, j, dist)
        contact = _better(contact, _first_min(i[touch], j[touch], dist[touch], s[touch], t[touch]))
    return table.result(far_best, contact)


def _row_block(n: int, lo: int, rows: int) -> Tuple[np.ndarray, np.ndarray]:
    """All pairs (i, j), i < j, with lo <= i < lo + rows, in lexicographic order."""
    hi = min(n, lo + rows)
    ii, jj = np.meshgrid(np.arange(lo, hi), np.arange(n), indexing="ij")
    upper = jj > ii
    return ii[upper], jj[upper]


def _sorted_pairs(tree: cKDTree, radius: float) -> Tuple[np.ndarray, np.ndarray]:
    pairs = tree.query_pairs(radius, output_type="ndarray")
    if len(pairs) == 0:
        empty = np.empty(0, dtype=np.intp)
        return empty, empty
    pairs = pairs[np.lexsort((pairs[:, 1], pairs[:, 0]))]
    return pairs[:, 0], pairs[:, 1]


def _grid_clearance(table: _SegmentTable) -> EmbeddingReport:
    """Clearance via a k-d tree over segment midpoints.

    Two segments closer than ``r`` have midpoints closer than
    ``r + chord_bound``. Touching near pairs lie within the tube widths
    plus one chord. For far pairs the search radius doubles until the best
    pair found lies strictly inside it, or the radius covers the whole curve.
    """
    mids = 0.5 * (table.starts + table.ends)
    tree = cKDTree(mids)
    c = table.chord_bound

    reach = (c + 2.0 * table.deviation_bound + table.contact_tol) * (1.0 + 1e-9)
    i, j = _sorted_pairs(tree, reach)
    _, near = table.classify(i, j)
    i, j = i[near], j[near]
    dist, s, t = table.distances(i, j)
    touch = table.touching(i, j, dist)
    contact = _first_min(i[touch], j[touch], dist[touch], s[touch], t[touch])

    extent = float(np.linalg.norm(mids.max(axis=0) - mids.min(axis=0)))
    radius = LOCALITY_FACTOR * c
    while True:
        i, j = _sorted_pairs(tree, radius + c)
        far, _ = table.classify(i, j)
        i, j = i[far], j[far]
        logger.debug(f"clearance grid: radius={radius:.4g} far candidates={len(i)}")
        covered = radius + c > extent
        if len(i):
            dist, s, t = table.distances(i, j)
            if dist.min() < radius or covered:
                return table.result(_first_min(i, j, dist, s, t), contact)
        elif covered:
            return table.result(None, contact)
        radius *= 2.0


def check_embedded(curve: SampledCurve, method: str = "grid") -> EmbeddingReport:
    """Certify that the polyline (and the smooth curve behind it) is embedded.

    ``method`` is ``"grid"`` (k-d tree candidate search) or ``"brute"``
    (every segment pair). Both return the same report.
    """
    table = _SegmentTable(curve)
    if method == "grid":
        report = _grid_clearance(table)
    elif method == "brute":
        report = _brute_force_clearance(table)
    else:
        raise ValueError(f"unknown clearance method {method!r}")
    logger.debug(
        f"check_embedded: n={len(curve)} clearance={report.min_clearance:.6g} "
        f"margin={report.margin:.6g} chord={report.chord_bound:.6g} embedded={report.embedded}"
    )
    return report


# ---------------------------------------------------------------------------
# Projection frames
# ---------------------------------------------------------------------------

def _unit(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    norm = float(np.linalg.norm(v))
    if not (math.isfinite(norm) and norm > 0):
        raise InvalidFrame(f"cannot normalize vector {tuple(v)}")
    return v / norm


@dataclass(frozen=True)
class ProjectionFrame:
    """Viewing direction plus a right-handed image-plane basis (u x v = direction)."""
    direction: Vec3
    u: Vec3
    v: Vec3

    def __post_init__(self) -> None:
        vecs = []
        for name in ("direction", "u", "v"):
            value = tuple(float(x) for x in getattr(self, name))
            if len(value) != 3:
                raise InvalidFrame(f"{name} must be a 3-vector")
            object.__setattr__(self, name, value)
            vecs.append(np.array(value))
        d, u, v = vecs
        for name, vec in (("direction", d), ("u", u), ("v", v)):
            if abs(float(np.dot(vec, vec)) - 1.0) > FRAME_TOL:
                raise InvalidFrame(f"{name} is not a unit vector: {tuple(vec)}")
        for a, b, label in ((u, v, "u.v"), (u, d, "u.direction"), (v, d, "v.direction")):
            if abs(float(np.dot(a, b))) > FRAME_TOL:
                raise InvalidFrame(f"frame is not orthogonal: {label} = {float(np.dot(a, b)):.3g}")
        det = float(np.linalg.det(np.column_stack([u, v, d])))
        if abs(det - 1.0) > FRAME_TOL:
            raise InvalidFrame(f"frame is not right-handed: det = {det:.15g}")

    @classmethod
    def from_direction(cls, direction) -> "ProjectionFrame":
        """Frame looking along ``direction``; u is built from the least aligned axis."""
        d = _unit(direction)
        helper = np.zeros(3)
        helper[int(np.argmin(np.abs(d)))] = 1.0
        u = _unit(np.cross(helper, d))
        v = np.cross(d, u)
        return cls(tuple(d), tuple(u), tuple(v))

    def flipped(self) -> "ProjectionFrame":
        """Look from the other side; still right-handed."""
        return ProjectionFrame(tuple(-x for x in self.direction), self.v, self.u)

    def project(self, points) -> np.ndarray:
        """Image-plane coordinates (..., 2)."""
        basis = np.array([self.u, self.v]).T
        return np.asarray(points, dtype=float) @ basis

    def heights(self, points) -> np.ndarray:
        return np.asarray(points, dtype=float) @ np.array(self.direction)

    def label(self) -> str:
        return "(" + ", ".join(f"{x:.6g}" for x in self.direction) + ")"


Z_VIEW = ProjectionFrame((0.0, 0.0, 1.0), (1.0, 0.0, 0.0), (0.0, 1.0, 0.0))
X_VIEW = ProjectionFrame((1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.0, 1.0))
Y_VIEW = ProjectionFrame((0.0, 1.0, 0.0), (0.0, 0.0, 1.0), (1.0, 0.0, 0.0))
DEFAULT_FRAMES: Tuple[ProjectionFrame, ...] = (Z_VIEW, X_VIEW, Y_VIEW)
NAMED_VIEWS = {"z": Z_VIEW, "x": X_VIEW, "y": Y_VIEW}


def golden_frames(count: int = GOLDEN_ATTEMPTS) -> List[ProjectionFrame]:
    """Deterministic, well spread view directions (Fibonacci sphere)."""
    golden_angle = math.pi * (3.0 - math.sqrt(5.0))
    frames = []
    for k in range(count):
        polar = math.acos(1.0 - 2.0 * (k + 0.5) / count)
        azimuth = k * golden_angle
        d = (math.sin(polar) * math.cos(azimuth), math.sin(polar) * math.sin(azimuth), math.cos(polar))
        frames.append(ProjectionFrame.from_direction(d))
    return frames


# ---------------------------------------------------------------------------
# Crossings of a projection
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CrossingSite:
    """A double point of the projection, over strand first."""
    over_param: float
    under_param: float
    over_height: float
    under_height: float
    position: Tuple[float, float]
    over_tangent: Tuple[float, float]
    under_tangent: Tuple[float, float]


def _cross2(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]


def _candidate_pairs(starts2: np.ndarray, ends2: np.ndarray) -> np.ndarray:
    """Segment pairs whose projections may intersect, vertex-sharing pairs removed."""
    n = len(starts2)
    lengths = np.linalg.norm(ends2 - starts2, axis=1)
    radius = float(lengths.max())
    if radius == 0.0:
        raise NonGenericProjection("projection collapses the whole curve to a point")
    tree = cKDTree(0.5 * (starts2 + ends2))
    pairs = tree.query_pairs(radius, output_type="ndarray")
    if len(pairs) == 0:
        return pairs.reshape(0, 2)
    i, j = pairs[:, 0], pairs[:, 1]
    adjacent = (j - i == 1) | ((i == 0) & (j == n - 1))
    pairs = pairs[~adjacent]
    return pairs[np.lexsort((pairs[:, 1], pairs[:, 0]))]


def _polyline_intersections(starts2, ends2, pairs, tol):
    """Transverse intersections among candidate pairs, half-open on both segments."""
    i, j = pairs[:, 0], pairs[:, 1]
    p, r = starts2[i], ends2[i] - starts2[i]
    q, w = starts2[j], ends2[j] - starts2[j]
    denom = _cross2(r, w)
    qp = q - p
    scale = np.linalg.norm(r, axis=1) * np.linalg.norm(w, axis=1)
    parallel = np.abs(denom) <= 1e-14 * scale
    if np.any(parallel):
        # Collinear overlapping segments are not a transverse double point.
        rn = np.linalg.norm(r[parallel], axis=1)
        offset = np.abs(_cross2(qp[parallel], r[parallel])) / rn
        rr = (r[parallel] ** 2).sum(axis=1)
        t0 = (qp[parallel] * r[parallel]).sum(axis=1) / rr
        t1 = t0 + (w[parallel] * r[parallel]).sum(axis=1) / rr
        overlap = (np.maximum(t0, t1) >= 0) & (np.minimum(t0, t1) <= 1)
        if np.any((offset <= tol) & overlap):
            raise NonGenericProjection("projected segments overlap along a line")
    with np.errstate(divide="ignore", invalid="ignore"):
        s = _cross2(qp, w) / denom
        t = _cross2(qp, r) / denom
    hit = ~parallel & (s >= 0) & (s < 1) & (t >= 0) & (t < 1)
    return i[hit], j[hit], s[hit], t[hit]


def _refine_on_source(knot: FourierKnot, frame: ProjectionFrame, ta, tb, window):
    """Newton's method for proj(x(ta)) = proj(x(tb)), started at the polyline crossing.

    Steps are clamped to ``window``. Returns the refined parameters and the
    projected distance still left between the two strands there.
    """
    dknot = knot_derivative(knot)

    def gap(ta, tb):
        return frame.project(evaluate_point(knot, ta)) - frame.project(evaluate_point(knot, tb))

    for _ in range(REFINE_MAX_ITER):
        g = gap(ta, tb)
        ua = frame.project(evaluate_point(dknot, ta))
        ub = frame.project(evaluate_point(dknot, tb))
        det = _cross2(ub, ua)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            da = np.clip(np.nan_to_num(_cross2(g, ub) / det), -window, window)
            db = np.clip(np.nan_to_num(_cross2(g, ua) / det), -window, window)
        ta, tb = ta + da, tb + db
        if max(float(np.max(np.abs(da))), float(np.max(np.abs(db)))) < REFINE_PARAM_TOL:
            break
    return ta, tb, np.linalg.norm(gap(ta, tb), axis=1)


def _circular_distance(a, b, p: float) -> np.ndarray:
    d = np.abs(a - b) % p
    return np.minimum(d, p - d)


def _near_coincident(ta: np.ndarray, tb: np.ndarray, p: float, window: float) -> Optional[Tuple[int, int]]:
    """First pair of crossings whose two strands both lie within ``window``."""
    if len(ta) < 2:
        return None
    a, b = ta[:, None], tb[:, None]
    same = (_circular_distance(a, ta[None, :], p) < window) & (_circular_distance(b, tb[None, :], p) < window)
    swapped = (_circular_distance(a, tb[None, :], p) < window) & (_circular_distance(b, ta[None, :], p) < window)
    hits = np.argwhere(np.triu(same | swapped, k=1))
    return (int(hits[0, 0]), int(hits[0, 1])) if len(hits) else None


def locate_crossings(curve: SampledCurve, frame: ProjectionFrame) -> List[CrossingSite]:
    """All double points of the projection, refined and checked for genericity.

    Raises NonGenericProjection on near-equal strand heights, near triple
    points, near tangencies or overlapping projected segments. A polyline
    crossing with no smooth crossing close behind it, and two crossings
    that nearly share both strands, count as near tangencies. Sites are
    ordered by over-strand parameter.
    """
    diameter = curve.diameter
    tol = HEIGHT_TOL * diameter
    starts2 = frame.project(curve.points)
    ends2 = np.roll(starts2, -1, axis=0)
    pairs = _candidate_pairs(starts2, ends2)
    i, j, s, t = _polyline_intersections(starts2, ends2, pairs, tol) if len(pairs) else (
        np.empty(0, dtype=int), np.empty(0, dtype=int), np.empty(0), np.empty(0))
    logger.debug(f"locate_crossings: {len(pairs)} candidate pairs, {len(i)} polyline crossings")
    if len(i) == 0:
        return []

    params, steps, p = curve.params, curve.param_steps, curve.period
    ta, tb = params[i] + s * steps[i], params[j] + t * steps[j]
    knot = curve.source
    if knot is not None:
        window = REFINE_WINDOW_STEPS * np.maximum(steps[i], steps[j])
        ra, rb, gap = _refine_on_source(knot, frame, ta, tb, window)
        drift = np.maximum(np.abs(ra - ta), np.abs(rb - tb))
        lost = (gap > REFINE_GAP_TOL * diameter) | ~(drift <= window)
        if np.any(lost):
            k = int(np.argmax(lost))
            raise NonGenericProjection(
                f"near tangency at t={ta[k]:.6g}, {tb[k]:.6g}: polyline crossing has no smooth "
                f"crossing nearby (gap {gap[k]:.3g}, drift {drift[k]:.3g})"
            )
        ta, tb = ra, rb
        pts_a, pts_b = evaluate_point(knot, ta), evaluate_point(knot, tb)
        dknot = knot_derivative(knot)
        tan_a = frame.project(evaluate_point(dknot, ta))
        tan_b = frame.project(evaluate_point(dknot, tb))
    else:
        starts3, ends3 = curve.points, np.roll(curve.points, -1, axis=0)
        pts_a = starts3[i] + (ends3[i] - starts3[i]) * s[:, None]
        pts_b = starts3[j] + (ends3[j] - starts3[j]) * t[:, None]
        tan_a, tan_b = ends2[i] - starts2[i], ends2[j] - starts2[j]

    t0 = params[0]
    ta, tb = (ta - t0) % p + t0, (tb - t0) % p + t0
    twin = _near_coincident(ta, tb, p, NEAR_PAIR_STEPS * float(steps.max()))
    if twin is not None:
        k, m = twin
        raise NonGenericProjection(
            f"near tangency: crossings at t={ta[k]:.6g} and t={ta[m]:.6g} nearly share both strands"
        )
    ha, hb = frame.heights(pts_a), frame.heights(pts_b)
    positions = 0.5 * (frame.project(pts_a) + frame.project(pts_b))

    close = np.abs(ha - hb) < tol
    if np.any(close):
        k = int(np.argmax(close))
        raise NonGenericProjection(
            f"strand heights at crossing near t={ta[k]:.6g} differ by {abs(ha[k] - hb[k]):.3g} "
            f"(< {tol:.3g})"
        )
    angle = np.arctan2(np.abs(_cross2(tan_a, tan_b)), np.abs((tan_a * tan_b).sum(axis=1)))
    if np.any(angle < MIN_CROSSING_ANGLE):
        k = int(np.argmin(angle))
        raise NonGenericProjection(f"near tangency at t={ta[k]:.6g}: angle {angle[k]:.3g} rad")
    if len(positions) > 1:
        near = cKDTree(positions).query_pairs(TRIPLE_POINT_TOL * diameter, output_type="ndarray")
        if len(near):
            raise NonGenericProjection(f"{len(near)} pair(s) of crossings nearly coincide")

    over_is_a = ha > hb
    sites = []
    for k in range(len(ta)):
        oa = bool(over_is_a[k])
        sites.append(CrossingSite(
            over_param=float(ta[k] if oa else tb[k]),
            under_param=float(tb[k] if oa else ta[k]),
            over_height=float(ha[k] if oa else hb[k]),
            under_height=float(hb[k] if oa else ha[k]),
            position=(float(positions[k, 0]), float(positions[k, 1])),
            over_tangent=tuple(float(x) for x in (tan_a[k] if oa else tan_b[k])),
            under_tangent=tuple(float(x) for x in (tan_b[k] if oa else tan_a[k])),
        ))
    sites.sort(key=lambda c: c.over_param)
    return sites


def _frame_candidates(preferences: Optional[Sequence[ProjectionFrame]]) -> Iterable[Tuple[str, ProjectionFrame]]:
    for frame in (DEFAULT_FRAMES if preferences is None else preferences):
        yield "preferred", frame
    for frame in golden_frames(GOLDEN_ATTEMPTS):
        yield "golden", frame


def find_generic_projection(
    curve: SampledCurve,
    preferences: Optional[Sequence[ProjectionFrame]] = None,
) -> ProjectionFrame:
    """First frame whose projection is generic.

    Tries ``preferences`` (default: z, x, y views) in order, then up to 64
    golden-angle directions.
    """
    for kind, frame in _frame_candidates(preferences):
        try:
            sites = locate_crossings(curve, frame)
        except NonGenericProjection as e:
            logger.warning(f"projection {frame.label()} rejected: {e}")
            continue
        logger.info(f"using {kind} projection {frame.label()} ({len(sites)} crossings)")
        return frame
    raise NoGenericProjection(
        f"no generic projection among the preferred frames and {GOLDEN_ATTEMPTS} golden directions"
    )


def generic_frames(curve: SampledCurve, count: int) -> List[ProjectionFrame]:
    """The first ``count`` distinct generic frames in search order."""
    found: List[ProjectionFrame] = []
    for _, frame in _frame_candidates(None):
        if frame in found:
            continue
        try:
            locate_crossings(curve, frame)
        except NonGenericProjection:
            continue
        found.append(frame)
        if len(found) == count:
            return found
    raise NoGenericProjection(f"only {len(found)} generic frames found, wanted {count}")
