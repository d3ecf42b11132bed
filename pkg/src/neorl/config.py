"""Experiment configuration files (YAML).

Schema (every key optional; missing keys take the built-in defaults)::

    preset: D                # A, B, C, D, or a comma list such as "A,B,C,D"
    steps: 36000
    seeds: 20                # a count (seeds 0..n-1) or an explicit list
    sample_interval: 300
    steps_per_second: 30
    workers: 1
    env:                     # EnvParams fields
      accel_per_step: 0.012
    overrides:               # preset constants
      gamma: 0.95
      epsilon: 0.1

Values are layered: built-in defaults, then the file, then command-line flags.
"""
from __future__ import annotations

import copy

import yaml

from .errors import ConfigurationError
from .experiment import DEFAULT_OVERRIDES, ExperimentConfig, PRESETS
from .waterworld import EnvParams

DEFAULTS = {
    "preset": "D",
    "steps": 36_000,
    "seeds": 20,
    "sample_interval": 300,
    "steps_per_second": 30,
    "workers": 1,
    "env": EnvParams().to_dict(),
    "overrides": dict(DEFAULT_OVERRIDES),
}


def load_file(path) -> dict:
    with open(path) as fh:
        data = yaml.safe_load(fh) or {}
    if not isinstance(data, dict):
        raise ConfigurationError(f"{path}: top level must be a mapping")
    unknown = set(data) - set(DEFAULTS)
    if unknown:
        raise ConfigurationError(f"{path}: unknown key(s) {', '.join(sorted(unknown))}")
    return data


def merge(*layers: dict) -> dict:
    """Later layers win; ``env`` and ``overrides`` merge key by key."""
    out = copy.deepcopy(DEFAULTS)
    for layer in layers:
        for key, value in layer.items():
            if value is None:
                continue
            if key in ("env", "overrides"):
                unknown = set(value) - set(DEFAULTS[key])
                if unknown:
                    raise ConfigurationError(f"unknown {key} key(s): {', '.join(sorted(unknown))}")
                out[key].update(value)
            else:
                out[key] = value
    return out


def preset_names(resolved: dict) -> list[str]:
    names = [p.strip().upper() for p in str(resolved["preset"]).split(",") if p.strip()]
    bad = [p for p in names if p not in PRESETS]
    if bad or not names:
        raise ConfigurationError(f"unknown preset(s) {bad or resolved['preset']!r}; expected from {', '.join(PRESETS)}")
    return names


def seed_list(resolved: dict) -> tuple[int, ...]:
    seeds = resolved["seeds"]
    if isinstance(seeds, int):
        if seeds < 1:
            raise ConfigurationError("seeds must be >= 1")
        return tuple(range(seeds))
    return tuple(int(s) for s in seeds)


def experiment_config(resolved: dict, preset: str, seeds=None) -> ExperimentConfig:
    env = dict(resolved["env"])
    return ExperimentConfig(
        preset=preset,
        env=EnvParams(**env),
        steps=int(resolved["steps"]),
        seeds=seed_list(resolved) if seeds is None else tuple(seeds),
        overrides={k: v for k, v in resolved["overrides"].items() if v != DEFAULT_OVERRIDES[k]},
        sample_interval=int(resolved["sample_interval"]),
        steps_per_second=float(resolved["steps_per_second"]),
    )


def dump(resolved: dict) -> str:
    return yaml.safe_dump(resolved, sort_keys=False)
