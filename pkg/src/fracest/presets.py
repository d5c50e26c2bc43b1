#!/usr/bin/env python3
"""
Named configuration presets stored as YAML files under ``templates/``.

A preset file holds a ``config`` mapping of RunConfig keys, an optional
``description`` and an optional ``reference`` mapping with expected
efficiency indexes for comparison output.
"""

from pathlib import Path
from typing import Any, Dict, List, Optional

import yaml

from .config import ConfigError, RunConfig

TABLE_PRESETS = [f"series-{i}" for i in range(1, 9)]

# Cache for loaded presets
_preset_cache: Dict[str, Dict[str, Any]] = {}


def _search_dirs() -> List[Path]:
    current_file = Path(__file__).parent
    return [
        (current_file / ".." / ".." / "templates").resolve(),   # From src/fracest/
        (current_file / ".." / "templates").resolve(),          # From src/
        (Path.cwd() / "templates").resolve(),                    # From current directory
    ]


def _get_preset_path(name: str) -> Path:
    """Get path to a preset file"""
    for directory in _search_dirs():
        candidate = directory / f"{name}.yaml"
        if candidate.exists():
            return candidate
    raise ConfigError(
        f"Could not find preset {name}.yaml in any of these locations: {[str(d) for d in _search_dirs()]}"
    )


def load_preset(name: str) -> Dict[str, Any]:
    """Load a preset with caching; the ``config`` section is checked against RunConfig keys."""
    if name not in _preset_cache:
        path = _get_preset_path(name)
        with open(path, 'r', encoding='utf-8') as f:
            data = yaml.safe_load(f) or {}
        if not isinstance(data, dict) or not isinstance(data.get('config', {}), dict):
            raise ConfigError(f"preset {name} must be a mapping with a 'config' section")
        RunConfig.from_dict(data.get('config', {}))
        _preset_cache[name] = data
    return dict(_preset_cache[name])


def preset_config(name: str) -> Dict[str, Any]:
    """The RunConfig overrides of a preset, with ``name`` filled in."""
    config = dict(load_preset(name).get('config', {}))
    config.setdefault('name', name)
    return config


def preset_reference(name: str) -> Optional[Dict[str, float]]:
    return load_preset(name).get('reference')


def list_presets() -> List[str]:
    names = set()
    for directory in _search_dirs():
        if directory.is_dir():
            names.update(p.stem for p in directory.glob("*.yaml"))
    return sorted(names)
