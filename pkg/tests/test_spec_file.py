"""Tests for the knot spec text format."""

from fractions import Fraction

import pytest

from fourier_knots.errors import SpecParseError
from fourier_knots.fourier_core import fibonacci_knot, fourier_figure_eight, fourier_trefoil, torus_knot_fourier
from fourier_knots.spec_file import format_spec, parse_spec, read_spec, write_spec

TREFOIL_TEXT = """\
# the classical Fourier trefoil
knot fourier-trefoil
x 1 2 0
y 1 3 0.5
z 0.5 5 0.5
z 0.5 3 0.5 sin   # sine term
"""


# ── Parsing ──────────────────────────────────────────────────────────────


class TestParse:

    def test_trefoil_text(self):
        knot = parse_spec(TREFOIL_TEXT)
        assert knot == fourier_trefoil()
        assert knot.name == "fourier-trefoil"

    def test_rational_frequency(self):
        knot = parse_spec("knot half\nx 1 1/2 0\ny 1 3/2 0\nz 1 1 0\n")
        assert knot.x.frequencies == (Fraction(1, 2),)

    def test_missing_axes_are_empty(self):
        knot = parse_spec("knot flat\nx 1 1 0\n")
        assert len(knot.y) == 0 and len(knot.z) == 0

    @pytest.mark.parametrize("text,line", [
        ("x 1 1 0\n", 1),
        ("knot a\nknot b\n", 2),
        ("knot a b\n", 1),
        ("knot a\nw 1 1 0\n", 2),
        ("knot a\nx 1 1\n", 2),
        ("knot a\nx 1 2.5 0\n", 2),
        ("knot a\nx 1 1/0 0\n", 2),
        ("knot a\nx one 1 0\n", 2),
        ("knot a\nx 1 1 nan\n", 2),
        ("knot a\n\n# c\nx 1 1 0 cos\n", 4),
    ])
    def test_errors_carry_line_number(self, text, line):
        with pytest.raises(SpecParseError) as exc:
            parse_spec(text)
        assert exc.value.line_no == line
        assert str(exc.value).startswith(f"line {line}:")

    def test_missing_header(self):
        with pytest.raises(SpecParseError) as exc:
            parse_spec("# only a comment\n")
        assert exc.value.line_no is None


# ── Emission ────────────────────────────────────────────────────────────


class TestFormat:

    @pytest.mark.parametrize("knot", [
        fourier_trefoil(), fourier_figure_eight(), fibonacci_knot(6), torus_knot_fourier(3, 5),
    ])
    def test_emit_then_parse_is_identity(self, knot):
        again = parse_spec(format_spec(knot))
        assert again == knot
        assert again.name == knot.name

    def test_emitted_terms_are_cosines(self):
        text = format_spec(fourier_trefoil())
        assert "sin" not in text
        assert text.startswith("knot fourier-trefoil\n")

    def test_write_and_read(self, tmp_path):
        path = write_spec(fourier_figure_eight(), tmp_path / "out" / "f8.knot")
        assert path.exists()
        assert read_spec(path) == fourier_figure_eight()
        assert not list(path.parent.glob(".*.tmp"))
