"""
Combinatorial knot and link diagrams.

A diagram is a tuple of components, each a cyclic sequence of passages
through crossings. Every crossing is passed exactly twice: once on the
over strand and once on the under strand.

Sign convention (right-hand rule): a crossing is positive when the under
tangent is reached from the over tangent by a counterclockwise turn of
less than pi in the image plane.

PD code: ``X[i,j,k,l]`` lists the four edge labels counterclockwise
starting from the incoming under edge ``i``. On a positive crossing the
over strand runs ``l -> j``; on a negative one ``j -> l``.

Gauss code: ``O+1,U+2,...`` per component (over/under, sign, crossing id),
components separated by ``" | "``.
"""

from __future__ import annotations

import logging
import re
from collections import Counter
from dataclasses import dataclass, field, replace
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .curve_geometry import ProjectionFrame, SampledCurve, locate_crossings
from .errors import (
    InconsistentArcs,
    InvalidDiagram,
    MalformedGauss,
    MalformedPD,
    NotAKnot,
    UnknownCrossing,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Passage:
    """One visit of a strand to a crossing."""
    crossing: int
    over: bool


@dataclass(frozen=True)
class Crossing:
    id: int
    sign: int
    over_param: Optional[float] = None
    under_param: Optional[float] = None
    position: Optional[Tuple[float, float]] = None

    def __post_init__(self) -> None:
        if self.sign not in (1, -1):
            raise InvalidDiagram(f"crossing {self.id}: sign must be +1 or -1, got {self.sign}")


Component = Tuple[Passage, ...]


@dataclass(frozen=True)
class LinkDiagram:
    components: Tuple[Component, ...]
    crossings: Tuple[Crossing, ...]
    frame: Optional[ProjectionFrame] = field(default=None, compare=False)

    def __post_init__(self) -> None:
        components = tuple(tuple(c) for c in self.components) or ((),)
        crossings = tuple(sorted(self.crossings, key=lambda c: c.id))
        object.__setattr__(self, "components", components)
        object.__setattr__(self, "crossings", crossings)

        ids = [c.id for c in crossings]
        if len(set(ids)) != len(ids):
            raise InvalidDiagram("duplicate crossing ids")
        visits = Counter((p.crossing, p.over) for comp in components for p in comp)
        for cid in ids:
            if visits[(cid, True)] != 1 or visits[(cid, False)] != 1:
                raise InvalidDiagram(
                    f"crossing {cid} must be passed once over and once under, got "
                    f"{visits[(cid, True)]} over / {visits[(cid, False)]} under"
                )
        known = set(ids)
        stray = {cid for cid, _ in visits} - known
        if stray:
            raise InvalidDiagram(f"passages through unknown crossings {sorted(stray)}")

    # ── lookup ──────────────────────────────────────────────────────────

    @property
    def crossing_count(self) -> int:
        return len(self.crossings)

    @property
    def is_knot(self) -> bool:
        return len(self.components) == 1

    def crossing(self, crossing_id: int) -> Crossing:
        for c in self.crossings:
            if c.id == crossing_id:
                return c
        raise UnknownCrossing(f"no crossing with id {crossing_id}")

    def signs(self) -> Dict[int, int]:
        return {c.id: c.sign for c in self.crossings}

    def components_of(self, crossing_id: int) -> Tuple[int, ...]:
        """Indices of the components passing through a crossing (one or two)."""
        self.crossing(crossing_id)
        return tuple(sorted({k for k, comp in enumerate(self.components)
                             for p in comp if p.crossing == crossing_id}))

    # ── encodings ───────────────────────────────────────────────────────

    @property
    def gauss_code(self) -> str:
        signs = self.signs()
        parts = []
        for comp in self.components:
            parts.append(",".join(
                f"{'O' if p.over else 'U'}{'+' if signs[p.crossing] > 0 else '-'}{p.crossing}"
                for p in comp
            ))
        return " | ".join(parts)

    def _edge_labels(self) -> Dict[Tuple[int, int], Tuple[int, int]]:
        """(component, index) -> (incoming edge label, outgoing edge label)."""
        labels = {}
        base = 0
        for k, comp in enumerate(self.components):
            n = len(comp)
            for m in range(n):
                labels[(k, m)] = (base + m + 1, base + (m + 1) % n + 1)
            base += n
        return labels

    @property
    def pd_code(self) -> str:
        labels = self._edge_labels()
        where: Dict[Tuple[int, bool], Tuple[int, int]] = {}
        for k, comp in enumerate(self.components):
            for m, p in enumerate(comp):
                where[(p.crossing, p.over)] = (k, m)
        rows = []
        for c in self.crossings:
            u_in, u_out = labels[where[(c.id, False)]]
            o_in, o_out = labels[where[(c.id, True)]]
            if c.sign > 0:
                rows.append(f"X[{u_in},{o_out},{u_out},{o_in}]")
            else:
                rows.append(f"X[{u_in},{o_in},{u_out},{o_out}]")
        return " ".join(rows)


# ---------------------------------------------------------------------------
# Signs and extraction
# ---------------------------------------------------------------------------

SignRule = Callable[[Sequence[float], Sequence[float]], int]


def crossing_sign(over_tangent: Sequence[float], under_tangent: Sequence[float]) -> int:
    """Right-hand rule: +1 when under is a counterclockwise turn from over."""
    cross = over_tangent[0] * under_tangent[1] - over_tangent[1] * under_tangent[0]
    return 1 if cross > 0 else -1


def extract_diagram(
    curve: SampledCurve,
    frame: ProjectionFrame,
    sign_rule: SignRule = crossing_sign,
) -> LinkDiagram:
    """Knot diagram of the curve seen along ``frame``.

    Crossing ids follow the order of the over-strand parameter.
    """
    sites = locate_crossings(curve, frame)
    crossings = []
    visits = []
    for k, site in enumerate(sites, start=1):
        crossings.append(Crossing(
            id=k,
            sign=sign_rule(site.over_tangent, site.under_tangent),
            over_param=site.over_param,
            under_param=site.under_param,
            position=site.position,
        ))
        visits.append((site.over_param, Passage(k, True)))
        visits.append((site.under_param, Passage(k, False)))
    visits.sort(key=lambda v: v[0])
    diagram = LinkDiagram((tuple(p for _, p in visits),), tuple(crossings), frame)
    logger.debug(f"extract_diagram: {diagram.crossing_count} crossings, writhe {writhe(diagram)}")
    return diagram


def writhe(d: LinkDiagram) -> int:
    return sum(c.sign for c in d.crossings)


# ---------------------------------------------------------------------------
# Moves
# ---------------------------------------------------------------------------

def switch_crossing(d: LinkDiagram, crossing_id: int) -> LinkDiagram:
    """Exchange over and under at one crossing; its sign flips."""
    old = d.crossing(crossing_id)
    new = replace(old, sign=-old.sign, over_param=old.under_param, under_param=old.over_param)
    components = tuple(
        tuple(Passage(p.crossing, not p.over) if p.crossing == crossing_id else p for p in comp)
        for comp in d.components
    )
    crossings = tuple(new if c.id == crossing_id else c for c in d.crossings)
    return LinkDiagram(components, crossings, d.frame)


def mirror_diagram(d: LinkDiagram) -> LinkDiagram:
    """Mirror image: every crossing switched."""
    components = tuple(tuple(Passage(p.crossing, not p.over) for p in comp) for comp in d.components)
    crossings = tuple(
        replace(c, sign=-c.sign, over_param=c.under_param, under_param=c.over_param)
        for c in d.crossings
    )
    return LinkDiagram(components, crossings, d.frame)


def smooth_crossing(d: LinkDiagram, crossing_id: int) -> LinkDiagram:
    """Oriented smoothing of a knot diagram at one crossing.

    The strand between the two visits closes up into one component and
    the rest of the knot into the other.
    """
    d.crossing(crossing_id)
    if not d.is_knot:
        raise NotAKnot(f"smoothing needs a 1-component diagram, got {len(d.components)}")
    seq = d.components[0]
    a, b = [k for k, p in enumerate(seq) if p.crossing == crossing_id]
    inner = seq[a + 1:b]
    outer = seq[b + 1:] + seq[:a]
    crossings = tuple(c for c in d.crossings if c.id != crossing_id)
    return LinkDiagram((inner, outer), crossings, d.frame)


def rotate_basepoint(d: LinkDiagram, shift: int) -> LinkDiagram:
    """Same knot diagram with the traversal starting ``shift`` passages later."""
    if not d.is_knot:
        raise NotAKnot("basepoint rotation needs a 1-component diagram")
    seq = d.components[0]
    if not seq:
        return d
    shift %= len(seq)
    return LinkDiagram((seq[shift:] + seq[:shift],), d.crossings, d.frame)


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

_PD_ENTRY_RE = re.compile(r"X\[\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*\]")
_GAUSS_TOKEN_RE = re.compile(r"^([OU])([+-])(\d+)$")

STANDARD_PD = {
    "trefoil": "X[1,5,2,4] X[3,1,4,6] X[5,3,6,2]",
    "figure-eight": "X[4,2,5,1] X[8,6,1,5] X[6,3,7,4] X[2,7,3,8]",
    "hopf": "X[1,3,2,4] X[3,1,4,2]",
    "kink": "X[1,1,2,2]",
}


def _parse_pd_entries(text: str) -> List[Tuple[int, int, int, int]]:
    body = text.strip()
    if body.startswith("PD[") and body.endswith("]"):
        body = body[3:-1]
    entries = [tuple(int(x) for x in m.groups()) for m in _PD_ENTRY_RE.finditer(body)]
    leftover = _PD_ENTRY_RE.sub("", body)
    if leftover.replace(",", " ").strip():
        raise MalformedPD(f"unexpected text in PD code: {leftover.strip()[:40]!r}")
    return entries  # type: ignore[return-value]


def _orient_edges(entries: List[Tuple[int, int, int, int]]) -> Dict[Tuple[int, int], bool]:
    """Decide for every (crossing index, slot) whether the edge there is incoming.

    Under slots are fixed (0 in, 2 out). Orientation spreads along edges
    and across over strands; components with no under passage fall back to
    the ascending-label rule (over runs l -> j when j follows l).
    """
    occurrences: Dict[int, List[Tuple[int, int]]] = {}
    for ci, entry in enumerate(entries):
        for slot, label in enumerate(entry):
            occurrences.setdefault(label, []).append((ci, slot))
    bad = sorted(label for label, occ in occurrences.items() if len(occ) != 2)
    if bad:
        raise InconsistentArcs(f"edge labels must appear exactly twice; offending labels {bad}")

    incoming: Dict[Tuple[int, int], bool] = {}
    pending: List[Tuple[Tuple[int, int], bool]] = []
    for ci in range(len(entries)):
        pending += [((ci, 0), True), ((ci, 2), False)]

    def partner_along_edge(site: Tuple[int, int]) -> Tuple[int, int]:
        a, b = occurrences[entries[site[0]][site[1]]]
        return b if a == site else a

    def settle() -> None:
        while pending:
            site, is_in = pending.pop()
            if site in incoming:
                if incoming[site] != is_in:
                    raise InconsistentArcs(f"edge {entries[site[0]][site[1]]} has no consistent orientation")
                continue
            incoming[site] = is_in
            pending.append((partner_along_edge(site), not is_in))
            ci, slot = site
            if slot in (1, 3):
                pending.append(((ci, 4 - slot), not is_in))
            elif slot == 0:
                pending.append(((ci, 2), not is_in))
            else:
                pending.append(((ci, 0), not is_in))

    settle()
    for ci, (_, j, _, l) in enumerate(entries):
        if (ci, 1) not in incoming:
            over_l_to_j = j - l == 1 or l - j > 1
            pending.append(((ci, 3), over_l_to_j))
            settle()
    return incoming


def diagram_from_pd(pd: str) -> LinkDiagram:
    """Rebuild a diagram from PD text; crossing ids are 1.. in PD order.

    Components start at their smallest edge label and are ordered by it.
    """
    entries = _parse_pd_entries(pd)
    if not entries:
        return LinkDiagram(((),), ())
    incoming = _orient_edges(entries)

    signs = {ci: (1 if incoming[(ci, 3)] else -1) for ci in range(len(entries))}
    # Edge label -> (crossing, slot) where it enters.
    enters: Dict[int, Tuple[int, int]] = {}
    for (ci, slot), is_in in incoming.items():
        if is_in:
            enters[entries[ci][slot]] = (ci, slot)

    components = []
    seen = set()
    for start in sorted(enters):
        if start in seen:
            continue
        comp = []
        label = start
        while label not in seen:
            seen.add(label)
            ci, slot = enters[label]
            comp.append(Passage(ci + 1, slot in (1, 3)))
            exit_slot = {0: 2, 1: 3, 3: 1}[slot]
            label = entries[ci][exit_slot]
        if label != start:
            raise InconsistentArcs(f"traversal from edge {start} does not close up")
        components.append(tuple(comp))

    crossings = tuple(Crossing(ci + 1, signs[ci]) for ci in range(len(entries)))
    try:
        return LinkDiagram(tuple(components), crossings)
    except InvalidDiagram as e:
        raise InconsistentArcs(str(e)) from e


def diagram_from_gauss(text: str) -> LinkDiagram:
    """Parse the Gauss code emitted by ``LinkDiagram.gauss_code``."""
    components = []
    signs: Dict[int, int] = {}
    for part in text.split("|"):
        comp = []
        for token in (t.strip() for t in part.split(",")):
            if not token:
                continue
            m = _GAUSS_TOKEN_RE.match(token)
            if m is None:
                raise MalformedGauss(f"bad Gauss token {token!r}")
            over, sign, cid = m.group(1) == "O", 1 if m.group(2) == "+" else -1, int(m.group(3))
            if signs.setdefault(cid, sign) != sign:
                raise MalformedGauss(f"crossing {cid} appears with both signs")
            comp.append(Passage(cid, over))
        components.append(tuple(comp))
    crossings = tuple(Crossing(cid, s) for cid, s in signs.items())
    try:
        return LinkDiagram(tuple(components), crossings)
    except InvalidDiagram as e:
        raise MalformedGauss(str(e)) from e


def standard_diagram(name: str) -> LinkDiagram:
    return diagram_from_pd(STANDARD_PD[name])

