"""
Tests for sampled curves, the embedding certificate and projections.

Covers:
- Sampling count and chord bound
- SampledCurve validation, reversal and CSV I/O
- Embedding certificate (grid search and brute force agree)
- Projection frames and golden-angle fallbacks
- Crossing location and genericity rejection
"""

import math

import numpy as np
import pytest

from fourier_knots.curve_geometry import (
    CONTACT_TOL,
    CSV_HEADER,
    DEFAULT_FRAMES,
    X_VIEW,
    Y_VIEW,
    Z_VIEW,
    ProjectionFrame,
    SampledCurve,
    _near_coincident,
    acceleration_bound,
    check_embedded,
    curve_from_points,
    find_generic_projection,
    format_curve_csv,
    generic_frames,
    golden_frames,
    locate_crossings,
    read_curve_csv,
    sample,
    segment_distances,
    speed_bound,
    write_curve_csv,
)
from fourier_knots.diagram import extract_diagram
from fourier_knots.errors import (
    CurveFormatError,
    InvalidCurve,
    InvalidFrame,
    NoGenericProjection,
    NonGenericProjection,
)
from fourier_knots.fourier_core import (
    FourierKnot,
    FourierSeries,
    evaluate_point,
    fibonacci_knot,
    fourier_figure_eight,
    fourier_trefoil,
    knot_derivative,
    lissajous,
    normalize_traversal,
    torus_knot_fourier,
)
from fourier_knots.invariants import conway_a

CONSTRUCTORS = {
    "trefoil": fourier_trefoil,
    "figure-eight": fourier_figure_eight,
    "fibonacci-4": lambda: fibonacci_knot(4),
    "lissajous": lambda: lissajous(3, 2, 7, 0.7, 0.2, 0.0),
    "torus-2-5": lambda: torus_knot_fourier(2, 5),
}


def _param_curve(fn, n, shift=0.0):
    t = 2 * math.pi * (np.arange(n) + shift) / n
    return curve_from_points(np.column_stack(fn(t)))


def _circle(n=64):
    return _param_curve(lambda t: (np.cos(t), np.sin(t), np.zeros_like(t)), n)


def _space_lemniscate(n=63):
    # Projects to a figure eight along z with one crossing at the origin.
    return _param_curve(lambda t: (np.sin(2 * t), np.sin(t), np.cos(t)), n, shift=0.3)


def _flat_lemniscate(n=63):
    return _param_curve(lambda t: (np.sin(2 * t), np.sin(t), np.zeros_like(t)), n, shift=0.3)


def _random_knot(seed):
    rng = np.random.default_rng(seed)

    def series():
        return FourierSeries.build(*[
            (float(rng.uniform(0.3, 1.0)), int(rng.integers(1, 5)), float(rng.uniform(-math.pi, math.pi)))
            for _ in range(2)
        ])

    return FourierKnot(series(), series(), series())


# ── Sampling ─────────────────────────────────────────────────────────────


class TestSampling:

    def test_speed_bound_of_trefoil(self):
        assert speed_bound(fourier_trefoil()) == pytest.approx(math.sqrt(29))

    def test_acceleration_bound_of_trefoil(self):
        assert acceleration_bound(fourier_trefoil()) == pytest.approx(math.sqrt(4 ** 2 + 9 ** 2 + 17 ** 2))

    def test_acceleration_bound_bounds_sampled_acceleration(self):
        knot = fourier_trefoil()
        ts = np.linspace(0, 2 * math.pi, 10_000)
        dd = evaluate_point(knot_derivative(knot_derivative(knot)), ts)
        assert np.linalg.norm(dd, axis=1).max() <= acceleration_bound(knot)

    @pytest.mark.parametrize("chord", [0.1, 0.05, 0.01])
    @pytest.mark.parametrize("name", sorted(CONSTRUCTORS))
    def test_chord_guarantee_for_every_constructor(self, name, chord):
        curve = sample(normalize_traversal(CONSTRUCTORS[name]()), chord)
        assert curve.chords.max() <= chord

    def test_sample_count_from_formula(self):
        circle = FourierKnot(
            FourierSeries.build((1.0, 1, 0.0)),
            FourierSeries.build((1.0, 1, -math.pi / 2)),
            FourierSeries(),
        )
        curve = sample(circle, 0.05)
        assert speed_bound(circle) == pytest.approx(math.sqrt(2))
        assert len(curve) == math.ceil(2 * math.pi * math.sqrt(2) / 0.05)
        assert curve.chords.max() <= 0.05

    def test_chords_never_exceed_target(self):
        curve = sample(fourier_trefoil(), 0.02)
        assert curve.chords.max() <= 0.02
        assert curve.params[0] == 0.0
        assert curve.period == pytest.approx(2 * math.pi)
        assert curve.source == fourier_trefoil()

    def test_minimum_sample_count(self):
        assert len(sample(fourier_trefoil(), 100.0)) == 8

    @pytest.mark.parametrize("chord", [0.0, -1.0, float("nan")])
    def test_bad_chord(self, chord):
        with pytest.raises(ValueError):
            sample(fourier_trefoil(), chord)


class TestSampledCurve:

    def test_arrays_are_read_only(self):
        curve = _circle()
        with pytest.raises(ValueError):
            curve.points[0, 0] = 5.0

    def test_too_few_points(self):
        with pytest.raises(InvalidCurve):
            curve_from_points(np.eye(3))

    def test_repeated_consecutive_points(self):
        pts = np.array(_circle(16).points)
        pts[3] = pts[2]
        with pytest.raises(InvalidCurve):
            curve_from_points(pts)

    def test_params_must_increase(self):
        pts = np.array(_circle(8).points)
        with pytest.raises(InvalidCurve):
            SampledCurve(pts, np.array([0, 1, 2, 3, 3, 4, 5, 6], dtype=float), 7.0)

    def test_diameter_is_bounding_box_diagonal(self):
        assert _circle(64).diameter == pytest.approx(2 * math.sqrt(2), rel=1e-3)

    def test_reversed_twice_is_identity(self):
        curve = _space_lemniscate()
        back = curve.reversed().reversed()
        np.testing.assert_allclose(back.points, curve.points)
        np.testing.assert_allclose(back.params, curve.params, atol=1e-12)

    def test_reversed_keeps_first_point(self):
        curve = _space_lemniscate()
        rev = curve.reversed()
        np.testing.assert_array_equal(rev.points[0], curve.points[0])
        np.testing.assert_array_equal(rev.points[1], curve.points[-1])


# ── CSV ─────────────────────────────────────────────────────────────────


class TestCurveCSV:

    def test_header_and_first_row(self):
        text = format_curve_csv(sample(fourier_trefoil(), 0.05))
        lines = text.splitlines()
        assert lines[0] == CSV_HEADER
        t, x, _, _ = (float(v) for v in lines[1].split(","))
        assert t == 0.0 and x == 1.0

    def test_write_then_read(self, tmp_path):
        curve = sample(fourier_trefoil(), 0.05)
        path = write_curve_csv(curve, tmp_path / "trefoil.csv")
        back = read_curve_csv(path)
        np.testing.assert_array_equal(back.points, curve.points)
        np.testing.assert_array_equal(back.params, curve.params)
        assert back.period == pytest.approx(curve.period)

    def test_trailing_duplicate_row_dropped(self, tmp_path):
        curve = _circle(16)
        text = format_curve_csv(curve)
        first = text.splitlines()[1].split(",")
        text += ",".join([repr(2 * math.pi)] + first[1:]) + "\n"
        path = tmp_path / "closed.csv"
        path.write_text(text)
        assert len(read_curve_csv(path)) == 16

    def test_bad_header(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("a,b,c,d\n0,1,2,3\n")
        with pytest.raises(CurveFormatError):
            read_curve_csv(path)

    def test_wrong_column_count(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("t,x,y,z\n0,1,2\n1,2,3\n")
        with pytest.raises(CurveFormatError):
            read_curve_csv(path)

    def test_non_numeric(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("t,x,y,z\n0,1,2,oops\n")
        with pytest.raises(CurveFormatError):
            read_curve_csv(path)


# ── Embedding certificate ───────────────────────────────────────────────


class TestSegmentDistances:

    def test_crossing_segments(self):
        d, s, t = segment_distances(
            np.array([[-1.0, 0, 0]]), np.array([[1.0, 0, 0]]),
            np.array([[0.0, -1, 1]]), np.array([[0.0, 1, 1]]),
        )
        assert d[0] == pytest.approx(1.0)
        assert s[0] == pytest.approx(0.5) and t[0] == pytest.approx(0.5)

    def test_parallel_segments(self):
        d, _, _ = segment_distances(
            np.array([[0.0, 0, 0]]), np.array([[1.0, 0, 0]]),
            np.array([[0.0, 2, 0]]), np.array([[1.0, 2, 0]]),
        )
        assert d[0] == pytest.approx(2.0)

    def test_endpoint_closest(self):
        d, s, t = segment_distances(
            np.array([[0.0, 0, 0]]), np.array([[1.0, 0, 0]]),
            np.array([[3.0, 1, 0]]), np.array([[3.0, 5, 0]]),
        )
        assert d[0] == pytest.approx(math.hypot(2, 1))
        assert s[0] == pytest.approx(1.0) and t[0] == pytest.approx(0.0)


class TestCheckEmbedded:

    def test_circle_is_embedded(self):
        curve = _circle()
        report = check_embedded(curve)
        assert report.embedded
        assert report.deviation_bound == 0.0
        assert report.margin == pytest.approx(CONTACT_TOL * curve.diameter)
        assert report.min_clearance > 2 * report.chord_bound

    def test_self_intersecting_polyline_is_not(self):
        report = check_embedded(_flat_lemniscate())
        assert not report.embedded
        assert report.min_clearance < 1e-6

    @pytest.mark.parametrize("n", [8, 10, 12, 16])
    def test_coarse_self_intersecting_polyline_is_not(self, n):
        report = check_embedded(_flat_lemniscate(n))
        assert not report.embedded
        assert report.min_clearance < 1e-6

    def test_one_long_chord_does_not_hide_a_crossing(self):
        pts = np.array(_flat_lemniscate(200).points)
        pts[50] = (20.0, 0.0, 0.0)
        report = check_embedded(curve_from_points(pts))
        assert not report.embedded

    def test_folded_polyline_is_not(self):
        pts = np.array(_circle(32).points)
        pts[10] = pts[8]
        report = check_embedded(curve_from_points(pts))
        assert not report.embedded
        assert report.min_clearance == 0.0

    def test_trefoil_certified_at_default_chord(self):
        curve = sample(fourier_trefoil(), 0.02)
        report = check_embedded(curve)
        assert report.embedded
        h = 2 * math.pi / len(curve)
        assert report.deviation_bound == pytest.approx(acceleration_bound(fourier_trefoil()) * h * h / 8)
        assert report.margin < report.min_clearance
        assert report.margin < report.chord_bound

    def test_no_far_pairs_is_not_certified(self):
        octagon = _circle(8)
        report = check_embedded(octagon)
        assert report.min_clearance == math.inf
        assert not report.embedded

    @pytest.mark.parametrize("knot", [
        fourier_trefoil(),
        fourier_figure_eight(),
        fibonacci_knot(4),
        fibonacci_knot(5),
        fibonacci_knot(6),
        torus_knot_fourier(2, 3),
        torus_knot_fourier(2, 5),
    ], ids=["trefoil", "figure-eight", "F4", "F5", "F6", "torus-2-3", "torus-2-5"])
    def test_classical_knots_certified_at_default_chord(self, knot):
        report = check_embedded(sample(normalize_traversal(knot), 0.02))
        assert report.embedded, report

    @pytest.mark.parametrize("make", [
        lambda: sample(fourier_trefoil(), 0.05),
        lambda: _space_lemniscate(101),
        lambda: _flat_lemniscate(80),
    ])
    def test_grid_and_brute_force_agree(self, make):
        curve = make()
        assert check_embedded(curve, "grid") == check_embedded(curve, "brute")

    @pytest.mark.parametrize("seed", range(20))
    def test_grid_and_brute_force_agree_on_random_knots(self, seed):
        curve = sample(normalize_traversal(_random_knot(seed)), 0.1)
        assert check_embedded(curve, "grid") == check_embedded(curve, "brute")

    @pytest.mark.parametrize("make", [
        lambda: sample(fourier_trefoil(), 0.02),
        lambda: _space_lemniscate(101),
    ])
    def test_reversal_keeps_clearance(self, make):
        curve = make()
        forward, backward = check_embedded(curve), check_embedded(curve.reversed())
        assert backward.min_clearance == pytest.approx(forward.min_clearance, abs=1e-12)
        assert backward.embedded == forward.embedded

    def test_unknown_method(self):
        with pytest.raises(ValueError):
            check_embedded(_circle(), "magic")


# ── Frames ──────────────────────────────────────────────────────────────


class TestProjectionFrame:

    def test_from_direction_normalizes(self):
        frame = ProjectionFrame.from_direction((0.0, 0.0, 2.0))
        assert frame.direction == (0.0, 0.0, 1.0)
        u, v, d = (np.array(x) for x in (frame.u, frame.v, frame.direction))
        np.testing.assert_allclose(np.cross(u, v), d, atol=1e-12)

    def test_rejects_non_orthogonal(self):
        with pytest.raises(InvalidFrame):
            ProjectionFrame((0.0, 0.0, 1.0), (1.0, 0.0, 0.0), (1.0, 0.0, 0.0))

    def test_rejects_left_handed(self):
        with pytest.raises(InvalidFrame):
            ProjectionFrame((0.0, 0.0, 1.0), (0.0, 1.0, 0.0), (1.0, 0.0, 0.0))

    def test_rejects_zero_direction(self):
        with pytest.raises(InvalidFrame):
            ProjectionFrame.from_direction((0.0, 0.0, 0.0))

    def test_flipped_is_right_handed_and_opposite(self):
        flipped = Z_VIEW.flipped()
        assert flipped.direction == (-0.0, -0.0, -1.0)
        assert flipped.flipped() == Z_VIEW

    def test_project_and_heights(self):
        pts = np.array([[1.0, 2.0, 3.0]])
        np.testing.assert_array_equal(Z_VIEW.project(pts), [[1.0, 2.0]])
        np.testing.assert_array_equal(Z_VIEW.heights(pts), [3.0])
        np.testing.assert_array_equal(X_VIEW.project(pts), [[2.0, 3.0]])
        np.testing.assert_array_equal(Y_VIEW.project(pts), [[3.0, 1.0]])

    def test_default_frames_are_axis_views(self):
        assert DEFAULT_FRAMES == (Z_VIEW, X_VIEW, Y_VIEW)

    def test_golden_frames_are_distinct_unit_directions(self):
        frames = golden_frames(64)
        assert len(set(frames)) == 64
        for f in frames:
            assert np.linalg.norm(f.direction) == pytest.approx(1.0)


# ── Crossings ───────────────────────────────────────────────────────────


class TestLocateCrossings:

    def test_circle_has_none(self):
        assert locate_crossings(_circle(), Z_VIEW) == []

    def test_space_lemniscate_has_one(self):
        (site,) = locate_crossings(_space_lemniscate(), Z_VIEW)
        assert site.over_height > site.under_height
        assert site.over_height == pytest.approx(1.0, abs=0.01)
        assert site.under_height == pytest.approx(-1.0, abs=0.01)
        assert site.position == pytest.approx((0.0, 0.0), abs=0.05)

    def test_equal_heights_rejected(self):
        with pytest.raises(NonGenericProjection):
            locate_crossings(_flat_lemniscate(), Z_VIEW)

    def test_edge_on_view_rejected(self):
        with pytest.raises(NonGenericProjection):
            locate_crossings(_circle(), X_VIEW)

    def test_smooth_source_crossings_sorted_by_over_param(self):
        curve = sample(fourier_trefoil(), 0.02)
        sites = locate_crossings(curve, find_generic_projection(curve))
        assert len(sites) >= 3
        params = [s.over_param for s in sites]
        assert params == sorted(params)
        for s in sites:
            assert 0.0 <= s.over_param < 2 * math.pi
            assert s.over_height > s.under_height

    def test_refined_crossings_lie_on_both_strands(self):
        knot = fourier_trefoil()
        curve = sample(knot, 0.02)
        for site in locate_crossings(curve, Z_VIEW):
            over, under = Z_VIEW.project(evaluate_point(knot, np.array([site.over_param, site.under_param])))
            assert np.linalg.norm(over - under) <= 1e-9 * curve.diameter

    def test_torus_z_view_crossings_share_one_sign(self):
        curve = sample(normalize_traversal(torus_knot_fourier(2, 3)), 0.02)
        d = extract_diagram(curve, Z_VIEW)
        assert d.crossing_count == 3
        assert len({c.sign for c in d.crossings}) == 1


class TestNearCoincident:

    def test_twins_on_the_same_strands(self):
        ta, tb = np.array([1.0, 1.0001, 3.0]), np.array([4.0, 4.0001, 5.0])
        assert _near_coincident(ta, tb, 2 * math.pi, 0.01) == (0, 1)

    def test_twins_with_strands_swapped(self):
        ta, tb = np.array([1.0, 4.0001]), np.array([4.0, 1.0001])
        assert _near_coincident(ta, tb, 2 * math.pi, 0.01) == (0, 1)

    def test_twins_across_the_period_seam(self):
        ta, tb = np.array([1e-5, 2 * math.pi - 1e-5]), np.array([3.0, 3.0])
        assert _near_coincident(ta, tb, 2 * math.pi, 0.01) == (0, 1)

    def test_separate_crossings(self):
        ta, tb = np.array([1.0, 1.0001, 3.0]), np.array([4.0, 5.0, 5.0001])
        assert _near_coincident(ta, tb, 2 * math.pi, 0.01) is None
        assert _near_coincident(ta[:1], tb[:1], 2 * math.pi, 0.01) is None


class TestGenericProjection:

    def test_prefers_z_view(self):
        assert find_generic_projection(_circle()) == Z_VIEW

    def test_falls_back_to_golden_frames(self):
        frame = find_generic_projection(_circle(), preferences=[X_VIEW])
        assert frame == golden_frames()[0]

    def test_planar_crossing_has_no_generic_view(self):
        with pytest.raises(NoGenericProjection):
            find_generic_projection(_flat_lemniscate())

    def test_generic_frames_skips_bad_views(self):
        frames = generic_frames(_circle(), 3)
        assert frames == [Z_VIEW, golden_frames()[0], golden_frames()[1]]

    def test_search_is_deterministic(self):
        knot = lissajous(3, 2, 7, 0.7, 0.2, 0.0)
        first = find_generic_projection(sample(knot, 0.02))
        assert find_generic_projection(sample(knot, 0.02)) == first
        assert generic_frames(sample(knot, 0.02), 3) == generic_frames(sample(knot, 0.02), 3)

    def test_every_accepted_torus_view_sees_a_trefoil(self):
        curve = sample(normalize_traversal(torus_knot_fourier(2, 3)), 0.02)
        accepted = 0
        for frame in list(DEFAULT_FRAMES) + golden_frames(8):
            try:
                d = extract_diagram(curve, frame)
            except NonGenericProjection:
                continue
            accepted += 1
            assert abs(conway_a(d)) == 1, frame.label()
        assert accepted >= 3
