"""Flat JSON experiment configs.

Keys are dotted names, e.g.::

    {"problem.preset": "model", "grid.n1": 100, "grid.n2": 100,
     "alpha": 0.5, "theta": 1.0, "scheme.kind": "two_level",
     "scheme.sigma": 0.5, "steps": 20, "solver.tol": 1e-12}

Sweep configs may give lists for ``grid.n1``, ``grid.n2``, ``alpha``,
``theta``, ``scheme.sigma`` and ``steps``. Unknown keys are rejected.
"""

from __future__ import annotations

import json
from pathlib import Path

from .experiments import ExperimentSpec

KEYS = {
    "problem.preset": "preset",
    "grid.n1": "n1",
    "grid.n2": "n2",
    "grid.l1": "l1",
    "grid.l2": "l2",
    "alpha": "alpha",
    "theta": "theta",
    "scheme.kind": "scheme",
    "scheme.sigma": "sigma",
    "scheme.sigma1": "sigma1",
    "scheme.sigma2": "sigma2",
    "scheme.coupling": "coupling",
    "steps": "steps",
    "solver.tol": "tol",
    "delta.rule": "delta_rule",
}
LIST_KEYS = {"grid.n1", "grid.n2", "alpha", "theta", "scheme.sigma", "steps"}


class ConfigError(ValueError):
    pass


def parse_config(doc: dict, allow_lists: bool) -> ExperimentSpec:
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object of dotted keys")
    unknown = sorted(set(doc) - set(KEYS))
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
    kwargs = {}
    for key, value in doc.items():
        if isinstance(value, list):
            if not allow_lists:
                raise ConfigError(f"{key}: lists are only allowed in sweep configs")
            if key not in LIST_KEYS:
                raise ConfigError(f"{key} cannot be swept")
        kwargs[KEYS[key]] = value
    try:
        return ExperimentSpec(**kwargs)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


def load_config(path, allow_lists: bool = False) -> ExperimentSpec:
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config(doc, allow_lists)
