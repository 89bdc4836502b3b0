"""Exception hierarchy for fourier-knots.

Every error carries the CLI exit status it maps to, so the command layer
never has to keep a second lookup table in sync with this module.

Exit codes:
    0   success
    1   claim suite reported a failing claim
    2   usage / configuration
    3   unparseable input (spec file, curve CSV, PD or Gauss code)
    4   I/O failure (raised as OSError, mapped by the CLI)
    5   curve not certified as embedded
    6   no generic projection found
    7   explicit projection is not generic
    8   invalid knot data
    9   invalid curve data
    10  invalid diagram operation
"""

EXIT_OK = 0
EXIT_SUITE_FAILED = 1
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_IO = 4
EXIT_NOT_EMBEDDED = 5
EXIT_NO_GENERIC_PROJECTION = 6
EXIT_NON_GENERIC_PROJECTION = 7
EXIT_KNOT_DATA = 8
EXIT_CURVE_DATA = 9
EXIT_DIAGRAM = 10


class KnotToolkitError(Exception):
    """Base class for all toolkit errors."""
    exit_code = EXIT_SUITE_FAILED


# ── usage / configuration ───────────────────────────────────────────────

class ConfigError(KnotToolkitError, ValueError):
    exit_code = EXIT_USAGE


class UnknownBuiltin(KnotToolkitError, KeyError):
    exit_code = EXIT_USAGE

    def __str__(self) -> str:
        # KeyError quotes its argument; keep the diagnostic readable.
        return str(self.args[0]) if self.args else ""


class ClaimSuiteFailed(KnotToolkitError):
    exit_code = EXIT_SUITE_FAILED


# ── parse errors ────────────────────────────────────────────────────────

class SpecParseError(KnotToolkitError, ValueError):
    """A knot spec file line could not be parsed."""
    exit_code = EXIT_PARSE

    def __init__(self, message: str, line_no: int | None = None):
        self.line_no = line_no
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)


class CurveFormatError(KnotToolkitError, ValueError):
    exit_code = EXIT_PARSE


class MalformedPD(KnotToolkitError, ValueError):
    exit_code = EXIT_PARSE


class MalformedGauss(KnotToolkitError, ValueError):
    exit_code = EXIT_PARSE


class InconsistentArcs(KnotToolkitError, ValueError):
    exit_code = EXIT_PARSE


# ── knot data ───────────────────────────────────────────────────────────

class AllConstant(KnotToolkitError, ValueError):
    """Every term has zero frequency; the image is a single point."""
    exit_code = EXIT_KNOT_DATA


class ZeroFrequency(KnotToolkitError, ValueError):
    exit_code = EXIT_KNOT_DATA


class NotCoprime(KnotToolkitError, ValueError):
    exit_code = EXIT_KNOT_DATA


# ── curve data ──────────────────────────────────────────────────────────

class TooFewSamples(KnotToolkitError, ValueError):
    exit_code = EXIT_CURVE_DATA


class NotClosed(KnotToolkitError, ValueError):
    exit_code = EXIT_CURVE_DATA


class InvalidCurve(KnotToolkitError, ValueError):
    exit_code = EXIT_CURVE_DATA


class InvalidFrame(KnotToolkitError, ValueError):
    exit_code = EXIT_CURVE_DATA


# ── geometry pipeline ───────────────────────────────────────────────────

class NotEmbedded(KnotToolkitError):
    exit_code = EXIT_NOT_EMBEDDED


class NoGenericProjection(KnotToolkitError):
    exit_code = EXIT_NO_GENERIC_PROJECTION


class NonGenericProjection(KnotToolkitError):
    exit_code = EXIT_NON_GENERIC_PROJECTION


# ── diagrams ────────────────────────────────────────────────────────────

class InvalidDiagram(KnotToolkitError, ValueError):
    exit_code = EXIT_DIAGRAM


class UnknownCrossing(KnotToolkitError, KeyError):
    exit_code = EXIT_DIAGRAM

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else ""


class NotAKnot(KnotToolkitError, ValueError):
    exit_code = EXIT_DIAGRAM


class NotTwoComponents(KnotToolkitError, ValueError):
    exit_code = EXIT_DIAGRAM


class OddSignSum(KnotToolkitError, ArithmeticError):
    """Inter-component sign sum was odd; the diagram is corrupt."""
    exit_code = EXIT_DIAGRAM
