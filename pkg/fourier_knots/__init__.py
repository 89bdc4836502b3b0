"""
fourier-knots - Fourier knots from equations to identified knot types.

Features:
- Finite Fourier series with exact rational frequencies
- Certified polyline sampling (no false "embedded" verdicts)
- Generic projections, crossing extraction, PD and Gauss codes
- Arf invariant via a(K), Alexander polynomial, determinant, identification
- SVG drawings with broken under strands
- Truncated Fourier fits of closed polylines

Usage:
    # Report the invariants of a built-in knot
    fourier-knots invariants --builtin trefoil

    # Reproduce the classical claims
    fourier-knots claim-suite

    # Generate config template
    fourier-knots --print-config > .fourier-knots.yaml
"""

__version__ = "0.1.0"

from .fourier_core import FourierKnot, FourierSeries, CosTerm
from .invariants import InvariantReport, full_report

__all__ = ["FourierKnot", "FourierSeries", "CosTerm", "InvariantReport", "full_report", "__version__"]
