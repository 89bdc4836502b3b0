"""
Built-in knot registry.

Usage:
    from fourier_knots.builtins import get_builtin
    knot = get_builtin("torus", {"p": 2, "q": 5})
"""

import logging
from typing import Any, Callable, Dict, Mapping, Optional, Sequence, Tuple

from .errors import ConfigError, UnknownBuiltin
from .fourier_core import (
    FourierKnot,
    fibonacci_knot,
    fourier_figure_eight,
    fourier_trefoil,
    lissajous,
    torus_knot_fourier,
)

logger = logging.getLogger(__name__)

BuiltinFactory = Callable[[Mapping[str, Any]], FourierKnot]

# Lissajous defaults: the (3,2,7) knot with phases that keep it embedded.
LISSAJOUS_FREQS: Tuple[str, str, str] = ("3", "2", "7")
LISSAJOUS_PHASES: Tuple[float, float, float] = (0.7, 0.2, 0.0)
LISSAJOUS_AMPS: Tuple[float, float, float] = (1.0, 1.0, 1.0)


def _triple(value: Any, default: Sequence, what: str) -> Tuple:
    if value is None:
        return tuple(default)
    if isinstance(value, str):
        value = [v.strip() for v in value.split(",")]
    value = tuple(value)
    if len(value) != 3:
        raise ConfigError(f"lissajous {what} needs 3 values, got {len(value)}")
    return value


def _lissajous(params: Mapping[str, Any]) -> FourierKnot:
    freqs = _triple(params.get("freqs"), LISSAJOUS_FREQS, "frequencies")
    phases = [float(v) for v in _triple(params.get("phases"), LISSAJOUS_PHASES, "phases")]
    amps = [float(v) for v in _triple(params.get("amps"), LISSAJOUS_AMPS, "amplitudes")]
    return lissajous(*freqs, *phases, *amps)


_REGISTRY: Dict[str, BuiltinFactory] = {
    "trefoil": lambda params: fourier_trefoil(),
    "figure8": lambda params: fourier_figure_eight(),
    "fibonacci": lambda params: fibonacci_knot(int(params.get("n", 3))),
    "torus": lambda params: torus_knot_fourier(int(params.get("p", 2)), int(params.get("q", 3))),
    "lissajous": _lissajous,
}


def register_builtin(name: str, factory: BuiltinFactory) -> None:
    """Register a custom builtin constructor."""
    _REGISTRY[name] = factory


def builtin_names() -> Tuple[str, ...]:
    return tuple(_REGISTRY)


def get_builtin(name: str, params: Optional[Mapping[str, Any]] = None) -> FourierKnot:
    """Build a builtin knot by name.

    Args:
        name: Registry key (trefoil, figure8, fibonacci, torus, lissajous).
        params: Family parameters, e.g. ``{"n": 6}`` or ``{"p": 2, "q": 5}``.
            Unknown keys are ignored.
    """
    factory = _REGISTRY.get(name)
    if factory is None:
        raise UnknownBuiltin(f"unknown builtin {name!r}; expected one of {', '.join(_REGISTRY)}")
    knot = factory(dict(params or {}))
    logger.debug(f"builtin {name} -> {knot.name}")
    return knot
