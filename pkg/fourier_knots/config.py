"""
Configuration system for fourier-knots.

Supports:
- YAML config files (.fourier-knots.yaml)
- CLI argument overrides
- Sensible defaults
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

import yaml

from .builtins import builtin_names
from .curve_geometry import NAMED_VIEWS, ProjectionFrame
from .errors import ConfigError, InvalidFrame

logger = logging.getLogger(__name__)

CONFIG_FILENAME = ".fourier-knots.yaml"
FORMATS = ("csv", "svg", "pd", "gauss", "report")


@dataclass
class RunConfig:
    """Everything one pipeline run needs."""

    # Input: exactly one of builtin / spec_path
    builtin: Optional[str] = None
    builtin_params: Dict[str, Any] = field(default_factory=dict)
    spec_path: Optional[Path] = None

    # Sampling
    chord: float = 0.02
    max_halvings: int = 3

    # Explicit projection: a named view ("z", "x", "y") or a direction vector
    view: Optional[str] = None
    direction: Optional[List[float]] = None

    # Outputs
    output_dir: Path = Path(".")
    formats: List[str] = field(default_factory=lambda: ["report"])

    # SVG
    svg_gap_fraction: float = 0.015
    svg_size_inches: float = 6.0

    # approximate
    harmonics: int = 12

    def validate(self) -> "RunConfig":
        """Raise ConfigError on the first inconsistent field."""
        if not self.chord > 0:
            raise ConfigError(f"chord must be > 0, got {self.chord}")
        if self.max_halvings < 0:
            raise ConfigError(f"max_halvings must be >= 0, got {self.max_halvings}")
        if self.builtin is not None and self.builtin not in builtin_names():
            raise ConfigError(
                f"unknown builtin {self.builtin!r}; expected one of {', '.join(builtin_names())}"
            )
        if self.builtin is not None and self.spec_path is not None:
            raise ConfigError("give either a builtin or a spec file, not both")
        unknown = [f for f in self.formats if f not in FORMATS]
        if unknown:
            raise ConfigError(f"unknown formats {unknown}; expected a subset of {list(FORMATS)}")
        if self.view is not None and self.view not in NAMED_VIEWS:
            raise ConfigError(f"unknown view {self.view!r}; expected one of {', '.join(NAMED_VIEWS)}")
        if self.view is not None and self.direction is not None:
            raise ConfigError("give either a view or a direction, not both")
        if not 0 < self.svg_gap_fraction < 0.5:
            raise ConfigError(f"svg_gap_fraction must be in (0, 0.5), got {self.svg_gap_fraction}")
        if not self.svg_size_inches > 0:
            raise ConfigError(f"svg_size_inches must be > 0, got {self.svg_size_inches}")
        if self.harmonics < 0:
            raise ConfigError(f"harmonics must be >= 0, got {self.harmonics}")
        return self

    def projection(self) -> Optional[ProjectionFrame]:
        """The explicit frame, or None to let the pipeline search for one."""
        if self.view is not None:
            return NAMED_VIEWS[self.view]
        if self.direction is not None:
            try:
                return ProjectionFrame.from_direction(self.direction)
            except InvalidFrame as e:
                raise ConfigError(f"bad projection direction: {e}") from e
        return None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "builtin": self.builtin,
            "builtin_params": dict(self.builtin_params),
            "spec_path": str(self.spec_path) if self.spec_path is not None else None,
            "chord": self.chord,
            "max_halvings": self.max_halvings,
            "view": self.view,
            "direction": list(self.direction) if self.direction is not None else None,
            "output_dir": str(self.output_dir),
            "formats": list(self.formats),
            "svg_gap_fraction": self.svg_gap_fraction,
            "svg_size_inches": self.svg_size_inches,
            "harmonics": self.harmonics,
        }

    def to_yaml(self) -> str:
        """Convert config to YAML string."""
        return yaml.dump(self.to_dict(), default_flow_style=False, sort_keys=False)


def _as_list(value: Any, what: str) -> List:
    if isinstance(value, str):
        return [v.strip() for v in value.split(",") if v.strip()]
    if isinstance(value, (list, tuple)):
        return list(value)
    raise ConfigError(f"{what} must be a list or comma-separated string")


def apply_mapping(config: RunConfig, data: Dict[str, Any]) -> RunConfig:
    """Apply a mapping of known keys over ``config``; unknown keys are ignored."""
    try:
        if "builtin" in data:
            config.builtin = data["builtin"]
        if "builtin_params" in data:
            config.builtin_params.update(data["builtin_params"] or {})
        if data.get("spec_path") is not None:
            config.spec_path = Path(data["spec_path"])
        if "chord" in data:
            config.chord = float(data["chord"])
        if "max_halvings" in data:
            config.max_halvings = int(data["max_halvings"])
        if "view" in data:
            config.view = data["view"]
        if data.get("direction") is not None:
            config.direction = [float(v) for v in _as_list(data["direction"], "direction")]
        if "output_dir" in data:
            config.output_dir = Path(data["output_dir"])
        if "formats" in data:
            config.formats = [str(f) for f in _as_list(data["formats"], "formats")]
        if "svg_gap_fraction" in data:
            config.svg_gap_fraction = float(data["svg_gap_fraction"])
        if "svg_size_inches" in data:
            config.svg_size_inches = float(data["svg_size_inches"])
        if "harmonics" in data:
            config.harmonics = int(data["harmonics"])
    except (TypeError, ValueError) as e:
        if isinstance(e, ConfigError):
            raise
        raise ConfigError(f"bad config value: {e}") from e
    return config


def load_config(path: Optional[Path] = None) -> RunConfig:
    """
    Load configuration from YAML file.

    Args:
        path: Path to config file. If None, returns defaults.

    Returns:
        RunConfig with loaded values merged over defaults.
    """
    config = RunConfig()

    if path is None:
        return config

    try:
        with open(path) as f:
            data = yaml.safe_load(f) or {}
    except yaml.YAMLError as e:
        raise ConfigError(f"{path}: invalid YAML: {e}") from e

    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be a mapping")

    logger.debug(f"loaded config from {path}")
    return apply_mapping(config, data)


def discover_config(start_dir: Optional[Path] = None) -> RunConfig:
    """
    Walk up from start_dir to the first .fourier-knots.yaml.

    The walk stops at a .git root; with no file found, defaults are returned.
    """
    start = start_dir or Path.cwd()
    for parent in [start] + list(start.parents):
        config_file = parent / CONFIG_FILENAME
        if config_file.exists():
            return load_config(config_file)
        if (parent / ".git").exists():
            break
    return RunConfig()
