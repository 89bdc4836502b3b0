"""
Finite Fourier series and Fourier knots.

A Fourier knot is a closed space curve whose three coordinates are each a
finite sum of cosines with rational frequencies:

    F(t) = A1 cos(K1 t + L1) + ... + AN cos(KN t + LN)

Frequencies are kept as exact ``Fraction`` values so that the closing
period is computed exactly. Sine terms are stored as cosines with the
phase shifted by -pi/2.

Constructors for every named family live here as well: Lissajous knots,
the Fourier trefoil, the Fourier figure-eight, the Fibonacci knots and
the torus knots (both the product form and its expanded Fourier form).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import TYPE_CHECKING, Iterable, Sequence, Union

import numpy as np

from .errors import AllConstant, NotClosed, NotCoprime, TooFewSamples, ZeroFrequency

if TYPE_CHECKING:
    from .curve_geometry import SampledCurve

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi
HALF_PI = 0.5 * math.pi

# Phases closer than this are treated as equal when merging terms.
PHASE_MERGE_TOL = 1e-12

RationalFreq = Fraction
FrequencyLike = Union[Fraction, int, str]


def as_frequency(value: FrequencyLike) -> Fraction:
    """Coerce ``value`` to an exact rational frequency.

    Accepts ``Fraction``, ``int`` and strings such as ``"3"`` or ``"5/2"``.
    Floats are rejected: closure depends on exact arithmetic.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("frequency must be a rational number, got bool")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise ValueError(f"not a rational frequency: {value!r}") from e
    raise TypeError(f"frequency must be an exact rational, got {type(value).__name__}")


def wrap_phase(phase: float) -> float:
    """Reduce a phase to the canonical range (-pi, pi]."""
    r = math.remainder(phase, TWO_PI)
    if r <= -math.pi:
        r += TWO_PI
    return r


# ---------------------------------------------------------------------------
# Terms and series
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CosTerm:
    """One term ``amplitude * cos(frequency * t + phase)``."""
    amplitude: float
    frequency: Fraction
    phase: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "frequency", as_frequency(self.frequency))
        object.__setattr__(self, "amplitude", float(self.amplitude))
        object.__setattr__(self, "phase", float(self.phase))
        if not math.isfinite(self.amplitude):
            raise ValueError(f"amplitude must be finite, got {self.amplitude}")
        if not math.isfinite(self.phase):
            raise ValueError(f"phase must be finite, got {self.phase}")


def sine_term(amplitude: float, frequency: FrequencyLike, phase: float = 0.0) -> CosTerm:
    """``amplitude * sin(frequency * t + phase)`` as a cosine term."""
    return CosTerm(amplitude, as_frequency(frequency), phase - HALF_PI)


def _canonical_term(term: CosTerm) -> CosTerm:
    amplitude, frequency, phase = term.amplitude, term.frequency, term.phase
    if frequency == 0:
        return CosTerm(amplitude * math.cos(phase), Fraction(0), 0.0)
    if frequency < 0:
        # cos(-x) = cos(x)
        frequency, phase = -frequency, -phase
    return CosTerm(amplitude, frequency, wrap_phase(phase))


def _same_phase(a: float, b: float) -> bool:
    d = abs(a - b)
    return d <= PHASE_MERGE_TOL or abs(d - TWO_PI) <= PHASE_MERGE_TOL


def canonicalize(terms: Iterable[CosTerm]) -> tuple[CosTerm, ...]:
    """Fold, wrap, merge and prune terms; first-occurrence order is kept."""
    merged: list[CosTerm] = []
    for raw in terms:
        term = _canonical_term(raw)
        for i, existing in enumerate(merged):
            if existing.frequency == term.frequency and _same_phase(existing.phase, term.phase):
                merged[i] = replace(existing, amplitude=existing.amplitude + term.amplitude)
                break
        else:
            merged.append(term)
    return tuple(t for t in merged if t.amplitude != 0.0)


@dataclass(frozen=True)
class FourierSeries:
    """Finite Fourier series, always held in canonical form."""
    terms: tuple[CosTerm, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "terms", canonicalize(self.terms))

    @classmethod
    def build(cls, *terms: Sequence) -> "FourierSeries":
        """Build from ``(amplitude, frequency, phase)`` tuples or CosTerms."""
        return cls(tuple(t if isinstance(t, CosTerm) else CosTerm(*t) for t in terms))

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    @property
    def frequencies(self) -> tuple[Fraction, ...]:
        return tuple(t.frequency for t in self.terms)

    def scaled(self, factor: float) -> "FourierSeries":
        return FourierSeries(tuple(replace(t, amplitude=t.amplitude * factor) for t in self.terms))

    def with_frequencies_divided(self, g: Fraction) -> "FourierSeries":
        return FourierSeries(tuple(replace(t, frequency=t.frequency / g) for t in self.terms))

    def with_phases_negated(self) -> "FourierSeries":
        return FourierSeries(tuple(replace(t, phase=-t.phase) for t in self.terms))


def evaluate(series: FourierSeries, t):
    """Sum of ``A cos(K t + L)`` over the series; scalar in, scalar out."""
    ts = np.asarray(t, dtype=float)
    total = np.zeros_like(ts)
    for term in series.terms:
        total = total + term.amplitude * np.cos(float(term.frequency) * ts + term.phase)
    if total.ndim == 0:
        return float(total)
    return total


def derivative(series: FourierSeries) -> FourierSeries:
    """Exact term-wise derivative: (A, K, L) -> (A*K, K, L + pi/2)."""
    return FourierSeries(tuple(
        CosTerm(t.amplitude * float(t.frequency), t.frequency, t.phase + HALF_PI)
        for t in series.terms
        if t.frequency != 0
    ))


# ---------------------------------------------------------------------------
# Knots
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FourierKnot:
    """Three finite Fourier series, one per coordinate.

    ``name`` is a display label and does not take part in equality: two
    knots with the same canonical series are the same knot.
    """
    x: FourierSeries
    y: FourierSeries
    z: FourierSeries
    name: str = field(default="knot", compare=False)

    @property
    def coordinates(self) -> tuple[FourierSeries, FourierSeries, FourierSeries]:
        return (self.x, self.y, self.z)

    def frequencies(self) -> set[Fraction]:
        """Distinct nonzero frequencies across all three coordinates."""
        return {f for s in self.coordinates for f in s.frequencies if f != 0}

    def term_counts(self) -> tuple[int, int, int]:
        return (len(self.x), len(self.y), len(self.z))

    @property
    def is_lissajous(self) -> bool:
        return all(len(s) == 1 and s.terms[0].frequency != 0 for s in self.coordinates)

    def renamed(self, name: str) -> "FourierKnot":
        return replace(self, name=name)

    def mirrored(self) -> "FourierKnot":
        """Reflection z -> -z: the mirror image knot."""
        return replace(self, z=self.z.scaled(-1.0), name=f"{self.name}-mirror")

    def reversed(self) -> "FourierKnot":
        """Same curve traversed backwards: t -> -t negates every phase."""
        return FourierKnot(
            self.x.with_phases_negated(),
            self.y.with_phases_negated(),
            self.z.with_phases_negated(),
            name=f"{self.name}-reversed",
        )


def evaluate_point(knot: FourierKnot, t) -> np.ndarray:
    """Point(s) on the knot. Scalar ``t`` gives shape (3,), arrays give (..., 3)."""
    return np.stack([np.asarray(evaluate(s, t), dtype=float) for s in knot.coordinates], axis=-1)


def knot_derivative(knot: FourierKnot) -> FourierKnot:
    return FourierKnot(derivative(knot.x), derivative(knot.y), derivative(knot.z),
                       name=f"{knot.name}'")


def period(knot: FourierKnot) -> float:
    """2*pi times the lcm of the denominators of all nonzero frequencies."""
    freqs = knot.frequencies()
    if not freqs:
        raise AllConstant(f"knot {knot.name!r} has no nonzero frequency")
    return TWO_PI * math.lcm(*(f.denominator for f in freqs))


def traversal_gcd(knot: FourierKnot) -> Fraction:
    """Rational gcd of all nonzero frequencies."""
    freqs = knot.frequencies()
    if not freqs:
        raise AllConstant(f"knot {knot.name!r} has no nonzero frequency")
    return Fraction(
        math.gcd(*(abs(f.numerator) for f in freqs)),
        math.lcm(*(f.denominator for f in freqs)),
    )


def normalize_traversal(knot: FourierKnot) -> FourierKnot:
    """Rescale the parameter so the rational gcd of the frequencies is 1.

    The image set is unchanged; the normalized knot at ``g * t`` equals the
    original at ``t``, and one period traces the curve exactly once.
    """
    g = traversal_gcd(knot)
    if g == 1:
        return knot
    logger.debug(f"normalize_traversal: dividing frequencies of {knot.name!r} by {g}")
    return FourierKnot(
        knot.x.with_frequencies_divided(g),
        knot.y.with_frequencies_divided(g),
        knot.z.with_frequencies_divided(g),
        name=knot.name,
    )


# ---------------------------------------------------------------------------
# Named families
# ---------------------------------------------------------------------------

def lissajous(
    k1: FrequencyLike, k2: FrequencyLike, k3: FrequencyLike,
    l1: float, l2: float, l3: float,
    a1: float = 1.0, a2: float = 1.0, a3: float = 1.0,
) -> FourierKnot:
    """One cosine term per coordinate."""
    freqs = [as_frequency(k) for k in (k1, k2, k3)]
    if any(k == 0 for k in freqs):
        raise ZeroFrequency(f"Lissajous frequencies must be nonzero, got {[str(k) for k in freqs]}")
    label = ",".join(str(k) for k in freqs)
    return FourierKnot(
        FourierSeries.build((a1, freqs[0], l1)),
        FourierSeries.build((a2, freqs[1], l2)),
        FourierSeries.build((a3, freqs[2], l3)),
        name=f"lissajous({label})",
    )


def _fibonacci_triple(n: int) -> tuple[int, int, int]:
    a, b = 1, 1  # f1, f2
    for _ in range(n - 1):
        a, b = b, a + b
    return a, b, a + b


def fibonacci_knot(n: int) -> FourierKnot:
    """F(n): x = cos(f_n T), y = cos(f_{n+1} T + .5),
    z = .5 cos(f_{n+2} T + .5) + .5 sin(f_{n+1} T + .5)."""
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ValueError(f"Fibonacci index must be a positive integer, got {n!r}")
    fn, fn1, fn2 = _fibonacci_triple(n)
    return FourierKnot(
        FourierSeries.build((1.0, fn, 0.0)),
        FourierSeries.build((1.0, fn1, 0.5)),
        FourierSeries.build((0.5, fn2, 0.5), sine_term(0.5, fn1, 0.5)),
        name=f"fibonacci({n})",
    )


def fourier_trefoil() -> FourierKnot:
    """x = cos 2T, y = cos(3T + 1/2), z = cos(5T + 1/2)/2 + sin(3T + 1/2)/2."""
    return FourierKnot(
        FourierSeries.build((1.0, 2, 0.0)),
        FourierSeries.build((1.0, 3, 0.5)),
        FourierSeries.build((0.5, 5, 0.5), sine_term(0.5, 3, 0.5)),
        name="fourier-trefoil",
    )


def fourier_figure_eight() -> FourierKnot:
    """x = cos t + cos 3t, y = .6 sin t + sin 3t, z = .4 sin 3t - sin 6t."""
    return FourierKnot(
        FourierSeries.build((1.0, 1, 0.0), (1.0, 3, 0.0)),
        FourierSeries.build(sine_term(0.6, 1), sine_term(1.0, 3)),
        FourierSeries.build(sine_term(0.4, 3), sine_term(-1.0, 6)),
        name="fourier-figure-eight",
    )


def _check_torus_type(p: int, q: int) -> None:
    for label, v in (("p", p), ("q", q)):
        if not isinstance(v, int) or isinstance(v, bool) or v < 1:
            raise ValueError(f"torus parameter {label} must be a positive integer, got {v!r}")
    if math.gcd(p, q) != 1:
        raise NotCoprime(f"torus knot type ({p},{q}) is not coprime")


def torus_knot_point(p: int, q: int, t) -> np.ndarray:
    """Product form: x = cos T (1 + .5 cos(Q/P T)), y = sin T (1 + .5 cos(Q/P T)),
    z = .5 sin(Q/P T)."""
    _check_torus_type(p, q)
    ts = np.asarray(t, dtype=float)
    ratio = q / p
    radius = 1.0 + 0.5 * np.cos(ratio * ts)
    return np.stack([np.cos(ts) * radius, np.sin(ts) * radius, 0.5 * np.sin(ratio * ts)], axis=-1)


def torus_knot_fourier(p: int, q: int) -> FourierKnot:
    """Product form expanded with cos a cos b = (cos(a+b) + cos(a-b))/2 and
    sin a cos b = (sin(a+b) + sin(a-b))/2."""
    _check_torus_type(p, q)
    r = Fraction(q, p)
    return FourierKnot(
        FourierSeries.build((1.0, 1, 0.0), (0.25, 1 + r, 0.0), (0.25, 1 - r, 0.0)),
        FourierSeries.build(sine_term(1.0, 1), sine_term(0.25, 1 + r), sine_term(0.25, 1 - r)),
        FourierSeries.build(sine_term(0.5, r)),
        name=f"torus({p},{q})",
    )


# ---------------------------------------------------------------------------
# Approximation of closed curves
# ---------------------------------------------------------------------------

# A closing chord longer than this multiple of the median chord means the
# polyline is an open arc, not a loop.
CLOSURE_FACTOR = 10.0
# Retained harmonics smaller than this fraction of the largest amplitude are dropped.
AMPLITUDE_FLOOR = 1e-12


def _check_closed(points: np.ndarray) -> None:
    chords = np.linalg.norm(np.diff(points, axis=0), axis=1)
    closing = float(np.linalg.norm(points[0] - points[-1]))
    median = float(np.median(chords))
    if closing > CLOSURE_FACTOR * median:
        raise NotClosed(
            f"closing chord {closing:.6g} exceeds {CLOSURE_FACTOR:g}x the median chord {median:.6g}"
        )


def fourier_approximate(curve: "SampledCurve", harmonics: int, name: str = "approximation") -> FourierKnot:
    """Truncated DFT fit of a closed polyline.

    Samples are taken as uniformly spaced in a rescaled parameter
    s = 2*pi*k/n; frequencies 0..harmonics of each coordinate are kept.
    """
    if harmonics < 0:
        raise ValueError(f"harmonics must be non-negative, got {harmonics}")
    points = np.asarray(curve.points, dtype=float)
    n = len(points)
    if n < 2 * harmonics + 2:
        raise TooFewSamples(f"{n} samples cannot resolve {harmonics} harmonics (need {2 * harmonics + 2})")
    _check_closed(points)

    coeffs = np.fft.rfft(points, axis=0) / n  # (n//2 + 1, 3)
    kept = coeffs[: harmonics + 1]
    amplitudes = np.where(np.arange(harmonics + 1)[:, None] == 0, kept.real, 2.0 * np.abs(kept))
    phases = np.angle(kept)
    floor = AMPLITUDE_FLOOR * max(float(np.max(np.abs(amplitudes[1:]), initial=0.0)),
                                  float(np.max(np.abs(amplitudes[0]))))

    series = []
    for axis in range(3):
        terms = [CosTerm(float(amplitudes[0, axis]), 0, 0.0)]
        for k in range(1, harmonics + 1):
            a = float(amplitudes[k, axis])
            if a > floor:
                terms.append(CosTerm(a, k, float(phases[k, axis])))
        series.append(FourierSeries(tuple(terms)))
    logger.debug(f"fourier_approximate: {n} samples, {harmonics} harmonics, "
                 f"terms per axis {[len(s) for s in series]}")
    return FourierKnot(*series, name=name)


def approximation_deviation(knot: FourierKnot, curve: "SampledCurve") -> float:
    """Max Euclidean distance between the fit and the input samples."""
    points = np.asarray(curve.points, dtype=float)
    s = TWO_PI * np.arange(len(points)) / len(points)
    return float(np.max(np.linalg.norm(evaluate_point(knot, s) - points, axis=1)))
