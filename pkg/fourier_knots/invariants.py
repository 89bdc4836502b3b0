"""
Knot invariants of diagrams, the identification catalog, and the full
knot -> curve -> diagram -> report pipeline.

a(K) is computed with the skein relation in difference form,
a(K+) - a(K-) = Lk(K0), walking the diagram from a basepoint and switching
every crossing first reached on its under strand. The switched diagram is
descending, hence unknotted, hence has a = 0.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace
from typing import Dict, List, Optional, Sequence, Tuple

import sympy

from .curve_geometry import (
    ProjectionFrame,
    SampledCurve,
    check_embedded,
    find_generic_projection,
    sample,
)
from .diagram import (
    LinkDiagram,
    SignRule,
    crossing_sign,
    extract_diagram,
    rotate_basepoint,
    smooth_crossing,
    switch_crossing,
    writhe,
)
from .errors import InvalidDiagram, NotAKnot, NotCoprime, NotEmbedded, NotTwoComponents, OddSignSum
from .fourier_core import FourierKnot, normalize_traversal
from .laurent import ONE, T, TVAR, LaurentPolynomial, bareiss_determinant, modular_determinant

logger = logging.getLogger(__name__)

# Largest reduced presentation matrix handed to exact Bareiss elimination.
BAREISS_MAX_SIZE = 24
DEFAULT_CHORD = 0.02
DEFAULT_MAX_HALVINGS = 3
UNIDENTIFIED = "unidentified"


def _require_knot(d: LinkDiagram) -> None:
    if not d.is_knot:
        raise NotAKnot(f"expected a knot diagram, got {len(d.components)} components")


# ---------------------------------------------------------------------------
# Linking number and a(K)
# ---------------------------------------------------------------------------

def linking_number(d: LinkDiagram) -> int:
    """Half the signed count of crossings between the two components."""
    if len(d.components) != 2:
        raise NotTwoComponents(f"linking number needs 2 components, got {len(d.components)}")
    first = {p.crossing for p in d.components[0]}
    second = {p.crossing for p in d.components[1]}
    total = sum(c.sign for c in d.crossings if c.id in first and c.id in second)
    if total % 2:
        raise OddSignSum(f"inter-component sign sum {total} is odd")
    return total // 2


def conway_a(d: LinkDiagram, basepoint: int = 0) -> int:
    """Second Conway coefficient via the descending-diagram walk."""
    _require_knot(d)
    current = rotate_basepoint(d, basepoint)
    total = 0
    seen = set()
    for passage in current.components[0]:
        if passage.crossing in seen:
            continue
        seen.add(passage.crossing)
        if passage.over:
            continue
        sign = current.crossing(passage.crossing).sign
        total += sign * linking_number(smooth_crossing(current, passage.crossing))
        current = switch_crossing(current, passage.crossing)
    return total


def arf(d: LinkDiagram) -> int:
    return conway_a(d) % 2


# ---------------------------------------------------------------------------
# Alexander polynomial
# ---------------------------------------------------------------------------

def arc_indices(d: LinkDiagram) -> List[int]:
    """Arc label of every passage of a knot diagram.

    Arcs run from one under passage to the next; a passage belongs to the
    arc numbered by how many under passages precede it (mod n).
    """
    seq = d.components[0]
    n = d.crossing_count
    arcs, unders = [], 0
    for p in seq:
        arcs.append(unders % n if n else 0)
        if not p.over:
            unders += 1
    return arcs


def presentation_matrix(d: LinkDiagram) -> List[List[LaurentPolynomial]]:
    """Crossing-by-arc Alexander matrix; every row sums to zero."""
    _require_knot(d)
    n = d.crossing_count
    seq = d.components[0]
    arcs = arc_indices(d)
    index = {c.id: k for k, c in enumerate(d.crossings)}
    one_minus_t = ONE - TVAR
    t = TVAR
    minus_one = LaurentPolynomial.constant(-1)

    matrix = [[LaurentPolynomial() for _ in range(n)] for _ in range(n)]
    for pos, p in enumerate(seq):
        row = matrix[index[p.crossing]]
        if p.over:
            row[arcs[pos]] = row[arcs[pos]] + one_minus_t
            continue
        incoming, outgoing = arcs[pos], (arcs[pos] + 1) % n
        if d.crossing(p.crossing).sign > 0:
            row[incoming] = row[incoming] + t
            row[outgoing] = row[outgoing] + minus_one
        else:
            row[incoming] = row[incoming] + minus_one
            row[outgoing] = row[outgoing] + t
    return matrix


def alexander_polynomial(d: LinkDiagram, method: str = "auto") -> LaurentPolynomial:
    """Normalized Alexander polynomial (palindromic, value 1 at t = 1).

    ``method``: ``"bareiss"``, ``"modular"`` or ``"auto"`` (Bareiss up to
    a reduced matrix of size 24, modular above).
    """
    _require_knot(d)
    if method not in ("auto", "bareiss", "modular"):
        raise ValueError(f"unknown determinant method {method!r}")
    matrix = presentation_matrix(d)
    minor = [row[:-1] for row in matrix[:-1]]
    size = len(minor)
    if method == "auto":
        method = "bareiss" if size <= BAREISS_MAX_SIZE else "modular"
    logger.debug(f"alexander: {d.crossing_count} crossings, {method} determinant of size {size}")
    det = bareiss_determinant(minor) if method == "bareiss" else modular_determinant(minor)
    result = det.normalized()
    if result.evaluate(1) != 1:
        raise InvalidDiagram(f"Alexander determinant {det} is not a unit at t = 1")
    return result


def determinant(d: LinkDiagram) -> int:
    """|Delta(-1)|."""
    return abs(int(alexander_polynomial(d).evaluate(-1)))


def torus_alexander(p: int, q: int) -> LaurentPolynomial:
    """(t^pq - 1)(t - 1) / ((t^p - 1)(t^q - 1)) by exact division, normalized."""
    for label, v in (("p", p), ("q", q)):
        if not isinstance(v, int) or isinstance(v, bool) or v < 1:
            raise ValueError(f"torus parameter {label} must be a positive integer, got {v!r}")
    if math.gcd(p, q) != 1:
        raise NotCoprime(f"torus knot type ({p},{q}) is not coprime")
    numerator = sympy.Poly((T ** (p * q) - 1) * (T - 1), T)
    denominator = sympy.Poly((T ** p - 1) * (T ** q - 1), T)
    quotient, remainder = sympy.div(numerator, denominator)
    if not remainder.is_zero:
        raise ArithmeticError(f"torus({p},{q}) division left remainder {remainder.as_expr()}")
    return LaurentPolynomial.from_sympy(quotient.as_expr()).normalized()


# ---------------------------------------------------------------------------
# Catalog
# ---------------------------------------------------------------------------

TREFOIL = "trefoil (3_1 / torus(2,3))"
FIGURE_EIGHT = "figure-eight (4_1)"
UNKNOT = "unknot"
CATALOG_MAX_PQ = 35


def arf_from_determinant(det: int) -> int:
    """Arf is 0 exactly when det = +-1 (mod 8)."""
    return 0 if det % 8 in (1, 7) else 1


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    alexander: LaurentPolynomial
    determinant: int
    arf: int


def _entry(name: str, alexander: LaurentPolynomial) -> CatalogEntry:
    det = abs(int(alexander.evaluate(-1)))
    return CatalogEntry(name, alexander, det, arf_from_determinant(det))


def build_catalog(max_pq: int = CATALOG_MAX_PQ) -> Tuple[CatalogEntry, ...]:
    entries = [
        _entry(UNKNOT, ONE),
        _entry(TREFOIL, torus_alexander(2, 3)),
        _entry(FIGURE_EIGHT, LaurentPolynomial({-1: -1, 0: 3, 1: -1})),
    ]
    for p in range(2, max_pq + 1):
        for q in range(p + 1, max_pq // p + 1):
            if math.gcd(p, q) == 1 and (p, q) != (2, 3):
                entries.append(_entry(f"torus({p},{q})", torus_alexander(p, q)))
    return tuple(entries)


_CATALOG: Optional[Tuple[CatalogEntry, ...]] = None


def catalog() -> Tuple[CatalogEntry, ...]:
    global _CATALOG
    if _CATALOG is None:
        _CATALOG = build_catalog()
    return _CATALOG


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class InvariantReport:
    crossing_count: int
    writhe: int
    a_value: int
    arf: int
    alexander: LaurentPolynomial
    determinant: int
    identification: str = UNIDENTIFIED
    frame: Optional[ProjectionFrame] = None
    chord: Optional[float] = None

    def to_text(self) -> str:
        lines = [
            f"crossings = {self.crossing_count}",
            f"writhe = {self.writhe}",
            f"a = {self.a_value}",
            f"arf = {self.arf}",
            f"alexander = {self.alexander}",
            f"determinant = {self.determinant}",
            f"identification = {self.identification}",
        ]
        if self.frame is not None:
            lines.append(f"frame = {self.frame.label()}")
        if self.chord is not None:
            lines.append(f"chord = {self.chord:g}")
        return "\n".join(lines) + "\n"

    def to_record(self) -> str:
        fields = [
            self.crossing_count, self.writhe, self.a_value, self.arf,
            self.alexander.to_record(), self.determinant, self.identification,
        ]
        return "\t".join(str(f) for f in fields)


def identify(report: InvariantReport) -> str:
    """Unique catalog entry matching (alexander, determinant, arf), else "unidentified"."""
    matches = [
        e.name for e in catalog()
        if e.alexander == report.alexander and e.determinant == report.determinant
        and e.arf == report.arf
    ]
    return matches[0] if len(matches) == 1 else UNIDENTIFIED


def diagram_report(
    d: LinkDiagram,
    chord: Optional[float] = None,
    method: str = "auto",
) -> InvariantReport:
    """Every invariant of a knot diagram, with its identification."""
    _require_knot(d)
    a_value = conway_a(d)
    alexander = alexander_polynomial(d, method=method)
    report = InvariantReport(
        crossing_count=d.crossing_count,
        writhe=writhe(d),
        a_value=a_value,
        arf=a_value % 2,
        alexander=alexander,
        determinant=abs(int(alexander.evaluate(-1))),
        frame=d.frame,
        chord=chord,
    )
    return replace(report, identification=identify(report))


def certified_sample(
    knot: FourierKnot,
    chord: float = DEFAULT_CHORD,
    max_halvings: int = DEFAULT_MAX_HALVINGS,
) -> Tuple[SampledCurve, float]:
    """Sample at ``chord``, halving it until the embedding certificate holds."""
    for attempt in range(max_halvings + 1):
        curve = sample(knot, chord)
        report = check_embedded(curve)
        if report.embedded:
            return curve, chord
        logger.info(
            f"{knot.name}: not certified at chord {chord:g} "
            f"(clearance {report.min_clearance:.4g} near t={report.closest_params[0]:.4g}, "
            f"{report.closest_params[1]:.4g})"
        )
        if attempt < max_halvings:
            chord /= 2.0
    raise NotEmbedded(
        f"{knot.name}: clearance {report.min_clearance:.4g} <= margin {report.margin:.4g} "
        f"at chord {chord:g} after {max_halvings} halvings"
    )


def knot_diagram(
    knot: FourierKnot,
    chord: float = DEFAULT_CHORD,
    max_halvings: int = DEFAULT_MAX_HALVINGS,
    frame: Optional[ProjectionFrame] = None,
    preferences: Optional[Sequence[ProjectionFrame]] = None,
    sign_rule: SignRule = crossing_sign,
) -> Tuple[SampledCurve, LinkDiagram, float]:
    """normalize -> certified sample -> projection -> diagram.

    An explicit ``frame`` is used as is (NonGenericProjection if it fails);
    otherwise the first generic frame among ``preferences`` and the
    golden-angle fallbacks is taken.
    """
    knot = normalize_traversal(knot)
    curve, used_chord = certified_sample(knot, chord, max_halvings)
    if frame is None:
        frame = find_generic_projection(curve, preferences)
    return curve, extract_diagram(curve, frame, sign_rule), used_chord


def full_report(
    knot: FourierKnot,
    chord: float = DEFAULT_CHORD,
    max_halvings: int = DEFAULT_MAX_HALVINGS,
    frame: Optional[ProjectionFrame] = None,
    preferences: Optional[Sequence[ProjectionFrame]] = None,
    sign_rule: SignRule = crossing_sign,
) -> InvariantReport:
    _, d, used_chord = knot_diagram(knot, chord, max_halvings, frame, preferences, sign_rule)
    report = diagram_report(d, chord=used_chord)
    logger.info(f"{knot.name}: {report.crossing_count} crossings, verdict {report.identification}")
    return report


def reports_by_frame(
    knot: FourierKnot,
    frames: Sequence[ProjectionFrame],
    chord: float = DEFAULT_CHORD,
    max_halvings: int = DEFAULT_MAX_HALVINGS,
) -> Dict[ProjectionFrame, InvariantReport]:
    """Reports of one certified sample seen along several frames."""
    knot = normalize_traversal(knot)
    curve, used_chord = certified_sample(knot, chord, max_halvings)
    return {f: diagram_report(extract_diagram(curve, f), chord=used_chord) for f in frames}
