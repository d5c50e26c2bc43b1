#!/usr/bin/env python3
"""
Run configuration for the fracest CLI.

A RunConfig is a flat set of key-value pairs. It is assembled from, in order
of increasing priority: built-in defaults, a preset under ``templates/``, a
YAML config file, explicit command-line flags and ``--set key=value`` pairs.
Unknown keys are rejected before any computation starts.
"""

from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional

import yaml

from fracest_core.constants import DEFAULT_MAX_MODES
from fracest_core.errors import FracestError
from fracest_core.validation import validate_order
from fracest_stats.models import (
    DEFAULT_DELTA0, DEFAULT_EPS0, DEFAULT_MODE_EXPONENT, DEFAULT_NEIGHBOURS, PerturbationSpec,
    validate_perturbation_spec,
)


class ConfigError(FracestError, ValueError):
    """Invalid or unreadable configuration."""


@dataclass
class RunConfig:
    """All settings any fracest command reads."""
    s: float = 0.5
    m: float = 1.0
    M: int = 12
    N: int = 12
    alpha: float = 0.5
    alpha1: float = 0.25
    alpha2: float = 0.25
    n_trials: int = 80
    seed: int = 20240101
    delta0: float = DEFAULT_DELTA0
    eps0: float = DEFAULT_EPS0
    growth: str = 'linear'
    max_modes: int = DEFAULT_MAX_MODES
    mode_exponent: float = DEFAULT_MODE_EXPONENT
    neighbours: str = DEFAULT_NEIGHBOURS
    workers: int = 1
    verify_trials: int = 200
    output: Optional[str] = None
    summary_output: Optional[str] = None
    field_output: Optional[str] = None
    disturbance_output: Optional[str] = None
    grid_nx: int = 41
    grid_nt: int = 41
    t_max: float = 2.0
    name: Optional[str] = None

    @classmethod
    def keys(cls) -> List[str]:
        return [f.name for f in fields(cls)]

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'RunConfig':
        """Create a config from a mapping; unknown keys raise ConfigError."""
        if data is None:
            data = {}
        if not isinstance(data, dict):
            raise ConfigError(f"configuration must be a mapping, got {type(data).__name__}")
        unknown = sorted(set(data) - set(cls.keys()))
        if unknown:
            raise ConfigError(f"unknown configuration key(s): {', '.join(unknown)}")
        return cls(**data)

    @classmethod
    def from_yaml(cls, text: str) -> 'RunConfig':
        try:
            data = yaml.safe_load(text)
        except yaml.YAMLError as e:
            raise ConfigError(f"malformed configuration: {e}") from e
        return cls.from_dict(data)

    @classmethod
    def from_yaml_file(cls, file_path: str) -> 'RunConfig':
        """Load config from a YAML file"""
        path = Path(file_path)
        if not path.exists():
            raise ConfigError(f"Config file not found: {file_path}")
        with open(path, 'r', encoding='utf-8') as f:
            return cls.from_yaml(f.read())

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    def to_yaml(self) -> str:
        return yaml.safe_dump(self.to_dict(), sort_keys=False)

    def merged(self, overrides: Dict[str, Any]) -> 'RunConfig':
        """Copy with ``overrides`` applied; unknown keys raise ConfigError."""
        unknown = sorted(set(overrides) - set(self.keys()))
        if unknown:
            raise ConfigError(f"unknown configuration key(s): {', '.join(unknown)}")
        return replace(self, **overrides)

    def to_perturbation_spec(self) -> PerturbationSpec:
        return PerturbationSpec(
            M=self.M, N=self.N, m=self.m, delta0=self.delta0, eps0=self.eps0,
            n_trials=self.n_trials, alpha=self.alpha, seed=self.seed, growth=self.growth,
            max_modes=self.max_modes, mode_exponent=self.mode_exponent, neighbours=self.neighbours,
        )

    def validate(self, command: str = 'experiment') -> List[str]:
        """
        Validate the settings a command uses.

        Args:
            command: CLI command name; selects which keys are checked

        Returns:
            List of error messages (empty if valid)
        """
        errors = list(validate_order(self.s))
        for name in ('workers', 'verify_trials', 'grid_nx', 'grid_nt', 'max_modes'):
            value = getattr(self, name)
            if not isinstance(value, int) or isinstance(value, bool) or value < 1:
                errors.append(f"{name}: must be a positive integer, got {value!r}")
        if not isinstance(self.t_max, (int, float)) or isinstance(self.t_max, bool) or not self.t_max > 0:
            errors.append(f"t_max: must be a positive number, got {self.t_max!r}")
        for name in ('output', 'summary_output', 'field_output', 'disturbance_output', 'name'):
            value = getattr(self, name)
            if value is not None and not isinstance(value, str):
                errors.append(f"{name}: must be a string, got {type(value).__name__}")
        if command in ('experiment', 'table'):
            if not validate_order(self.s) and self.s != 0.5:
                errors.append(f"s: perturbation series use the closed-form s = 0.5 extension, got {self.s}")
            errors.extend(validate_perturbation_spec(self.to_perturbation_spec()))
        elif command == 'verify':
            for name in ('alpha1', 'alpha2'):
                value = getattr(self, name)
                if not isinstance(value, (int, float)) or isinstance(value, bool) or not value > 0:
                    errors.append(f"{name}: must be a positive number, got {value!r}")
        elif command == 'solve':
            if not isinstance(self.M, int) or isinstance(self.M, bool) or not 0 <= self.M <= self.max_modes:
                errors.append(f"M: must be an integer in 0..{self.max_modes}, got {self.M!r}")
            if not isinstance(self.m, (int, float)) or isinstance(self.m, bool):
                errors.append(f"m: must be a number, got {self.m!r}")
        return errors


def parse_assignments(items: Iterable[str]) -> Dict[str, Any]:
    """Parse ``key=value`` strings; values are read as YAML scalars."""
    result: Dict[str, Any] = {}
    for item in items or ():
        key, sep, raw = item.partition('=')
        key = key.strip()
        if not sep or not key:
            raise ConfigError(f"expected key=value, got {item!r}")
        try:
            result[key] = yaml.safe_load(raw) if raw.strip() else None
        except yaml.YAMLError as e:
            raise ConfigError(f"cannot parse value of {key!r}: {e}") from e
    return result


def resolve_config(preset: Optional[Dict[str, Any]] = None, config_file: Optional[str] = None,
                   flags: Optional[Dict[str, Any]] = None, assignments: Iterable[str] = ()) -> RunConfig:
    """Layer preset, file, flags and key=value assignments over the defaults."""
    config = RunConfig()
    if preset:
        config = config.merged(preset)
    if config_file:
        config = config.merged(load_config_mapping(config_file))
    if flags:
        config = config.merged({k: v for k, v in flags.items() if v is not None})
    parsed = parse_assignments(assignments)
    if parsed:
        config = config.merged(parsed)
    return config


def load_config_mapping(file_path: str) -> Dict[str, Any]:
    """Read a YAML config file as a mapping of explicitly given keys."""
    path = Path(file_path)
    if not path.exists():
        raise ConfigError(f"Config file not found: {file_path}")
    try:
        with open(path, 'r', encoding='utf-8') as f:
            data = yaml.safe_load(f) or {}
    except yaml.YAMLError as e:
        raise ConfigError(f"malformed configuration in {file_path}: {e}") from e
    RunConfig.from_dict(data)
    return data
