"""
Tests for knot diagrams: extraction, encodings, moves and parsing.
"""

import math

import numpy as np
import pytest

from fourier_knots.curve_geometry import Z_VIEW, curve_from_points
from fourier_knots.diagram import (
    STANDARD_PD,
    Crossing,
    LinkDiagram,
    Passage,
    crossing_sign,
    diagram_from_gauss,
    diagram_from_pd,
    extract_diagram,
    mirror_diagram,
    rotate_basepoint,
    smooth_crossing,
    standard_diagram,
    switch_crossing,
    writhe,
)
from fourier_knots.errors import (
    InconsistentArcs,
    InvalidDiagram,
    MalformedGauss,
    MalformedPD,
    NotAKnot,
    UnknownCrossing,
)


def _space_lemniscate(n=63):
    t = 2 * math.pi * (np.arange(n) + 0.3) / n
    return curve_from_points(np.column_stack([np.sin(2 * t), np.sin(t), np.cos(t)]))


# ── Signs and extraction ─────────────────────────────────────────────────


class TestExtraction:

    def test_right_hand_rule(self):
        assert crossing_sign((1.0, 0.0), (0.0, 1.0)) == 1
        assert crossing_sign((0.0, 1.0), (1.0, 0.0)) == -1

    def test_space_lemniscate_has_one_negative_crossing(self):
        d = extract_diagram(_space_lemniscate(), Z_VIEW)
        assert d.crossing_count == 1
        assert d.is_knot
        assert writhe(d) == -1
        (c,) = d.crossings
        assert c.over_param is not None and c.under_param is not None
        assert d.frame == Z_VIEW

    def test_opposite_view_sees_the_same_sign(self):
        curve = _space_lemniscate()
        front = extract_diagram(curve, Z_VIEW)
        back = extract_diagram(curve, Z_VIEW.flipped())
        assert writhe(front) == writhe(back)

    def test_injected_sign_rule(self):
        d = extract_diagram(_space_lemniscate(), Z_VIEW, sign_rule=lambda over, under: 1)
        assert writhe(d) == 1

    def test_every_crossing_passed_once_over_once_under(self):
        d = extract_diagram(_space_lemniscate(), Z_VIEW)
        (comp,) = d.components
        assert sorted((p.crossing, p.over) for p in comp) == [(1, False), (1, True)]


# ── Validation and lookup ───────────────────────────────────────────────


class TestLinkDiagram:

    def test_empty_diagram_is_one_empty_component(self):
        d = LinkDiagram((), ())
        assert d.components == ((),)
        assert d.is_knot and d.crossing_count == 0

    def test_sign_must_be_unit(self):
        with pytest.raises(InvalidDiagram):
            Crossing(1, 0)

    def test_crossing_passed_twice_over(self):
        with pytest.raises(InvalidDiagram):
            LinkDiagram(((Passage(1, True), Passage(1, True)),), (Crossing(1, 1),))

    def test_passage_through_unknown_crossing(self):
        with pytest.raises(InvalidDiagram):
            LinkDiagram(((Passage(1, True), Passage(1, False), Passage(2, True)),), (Crossing(1, 1),))

    def test_unknown_crossing_lookup(self):
        with pytest.raises(UnknownCrossing):
            standard_diagram("trefoil").crossing(99)

    def test_components_of(self):
        hopf = standard_diagram("hopf")
        assert hopf.components_of(1) == (0, 1)
        assert standard_diagram("trefoil").components_of(2) == (0,)


# ── Encodings ───────────────────────────────────────────────────────────


class TestEncodings:

    def test_trefoil_gauss_code(self):
        assert standard_diagram("trefoil").gauss_code == "U+1,O+3,U+2,O+1,U+3,O+2"

    def test_trefoil_pd_round_trip_is_exact(self):
        assert standard_diagram("trefoil").pd_code == STANDARD_PD["trefoil"]

    @pytest.mark.parametrize("name", sorted(STANDARD_PD))
    def test_reparse_emitted_pd(self, name):
        d = standard_diagram(name)
        assert diagram_from_pd(d.pd_code) == d

    @pytest.mark.parametrize("name", sorted(STANDARD_PD))
    def test_reparse_emitted_gauss(self, name):
        d = standard_diagram(name)
        assert diagram_from_gauss(d.gauss_code) == d

    def test_extracted_diagram_pd_reparses(self):
        d = extract_diagram(_space_lemniscate(), Z_VIEW)
        again = diagram_from_pd(d.pd_code)
        assert again.signs() == d.signs()
        assert again.gauss_code == d.gauss_code

    def test_hopf_is_two_components_with_positive_crossings(self):
        hopf = standard_diagram("hopf")
        assert len(hopf.components) == 2
        assert hopf.gauss_code == "U+1,O+2 | U+2,O+1"

    def test_pd_wrapper_accepted(self):
        d = diagram_from_pd("PD[" + STANDARD_PD["trefoil"] + "]")
        assert d == standard_diagram("trefoil")

    def test_empty_pd_is_unknot(self):
        assert diagram_from_pd("").crossing_count == 0


class TestParseErrors:

    @pytest.mark.parametrize("text", ["X[1,2,3]", "X[1,5,2,4] Y[3]", "hello"])
    def test_malformed_pd(self, text):
        with pytest.raises(MalformedPD):
            diagram_from_pd(text)

    @pytest.mark.parametrize("text", ["X[1,2,3,4]", "X[1,5,2,4] X[3,1,4,6]"])
    def test_labels_not_paired(self, text):
        with pytest.raises(InconsistentArcs):
            diagram_from_pd(text)

    @pytest.mark.parametrize("text", ["Q+1,U+1", "O+1,U-1", "O1,U1", "O+1,O+1"])
    def test_malformed_gauss(self, text):
        with pytest.raises(MalformedGauss):
            diagram_from_gauss(text)


# ── Moves ───────────────────────────────────────────────────────────────


class TestMoves:

    def test_switch_flips_sign_and_passages(self):
        d = standard_diagram("trefoil")
        s = switch_crossing(d, 2)
        assert s.crossing(2).sign == -1
        assert writhe(s) == 1
        assert s.gauss_code == "U+1,O+3,O-2,O+1,U+3,U-2"

    def test_switch_twice_is_identity(self):
        d = standard_diagram("figure-eight")
        for c in d.crossings:
            assert switch_crossing(switch_crossing(d, c.id), c.id) == d

    def test_switch_unknown_crossing(self):
        with pytest.raises(UnknownCrossing):
            switch_crossing(standard_diagram("trefoil"), 7)

    def test_mirror_negates_writhe(self):
        d = standard_diagram("trefoil")
        m = mirror_diagram(d)
        assert writhe(m) == -writhe(d) == -3
        assert mirror_diagram(m) == d

    def test_smoothing_kink_gives_two_empty_components(self):
        d = smooth_crossing(standard_diagram("kink"), 1)
        assert d.components == ((), ())
        assert d.crossing_count == 0

    def test_smoothing_trefoil_gives_two_components(self):
        d = smooth_crossing(standard_diagram("trefoil"), 1)
        assert len(d.components) == 2
        assert d.crossing_count == 2
        assert sum(len(c) for c in d.components) == 4

    def test_smoothing_needs_a_knot(self):
        with pytest.raises(NotAKnot):
            smooth_crossing(standard_diagram("hopf"), 1)

    def test_rotate_basepoint(self):
        d = standard_diagram("trefoil")
        r = rotate_basepoint(d, 2)
        assert r.components[0][0] == d.components[0][2]
        assert rotate_basepoint(d, 6) == d

    def test_rotate_needs_a_knot(self):
        with pytest.raises(NotAKnot):
            rotate_basepoint(standard_diagram("hopf"), 1)
