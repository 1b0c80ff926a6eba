"""Run configuration: parsing, validation and canonical serialisation.

A config is a YAML (or JSON) mapping.  Every key is optional; unknown keys
are rejected with their full path.  Defaults::

    scheme:      {kind: fibonacci}        # or {basis: [[a, b], [c, d]]}, kind identity|silver
    window:      [0, 1]                   # half-open [lo, hi); or a list of interval mappings
    spectrum:    [-0.1, 0.1]              # closed [lo, hi] for a pair
    weights:
      h: {kind: outer_trapezoid, w: 1, u: 0.5}
      g: {kind: outer_trapezoid, w: 1, u: 0.5}
    truncations: [50, 100, 200, 400]
    radius:      500
    van_hove:    {T0: 25, levels: 9, ratio: 2, shift_span: 1000, n_shifts: 64}
    fejer:       {ns: [8, 16, 32, 64], n_shifts: 20, shift_span: 10}
    smoothing:   {u: null, v: null}       # null picks 1/(4b), capped to keep a core
    tolerances:  {tail_target: 1.0e-5, threshold_frac: 0.05, critical_band: 0.05, landau_tol: 0.02}
    sweep:       {n_configs: 30}
    output:      {dir: out, format: null}     # null: csv for gen, json otherwise
    seed:        0
"""
from __future__ import annotations

import copy
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np
import yaml

from .errors import ConfigError, CutProjectError
from .intervals import IntervalSet, as_interval_set
from .scheme import LatticeScheme, fibonacci_scheme, make_scheme
from .weights import weight_from_dict

SILVER = 1 + math.sqrt(2)

DEFAULTS: dict = {
    "scheme": {"kind": "fibonacci"},
    "window": [0.0, 1.0],
    "spectrum": {"lo": -0.1, "hi": 0.1, "lo_closed": True, "hi_closed": True},
    "weights": {"h": {"kind": "outer_trapezoid", "w": 1.0, "u": 0.5},
                "g": {"kind": "outer_trapezoid", "w": 1.0, "u": 0.5}},
    "truncations": [50.0, 100.0, 200.0, 400.0],
    "radius": 500.0,
    "van_hove": {"T0": 25.0, "levels": 9, "ratio": 2.0, "shift_span": 1000.0, "n_shifts": 64},
    "fejer": {"ns": [8, 16, 32, 64], "n_shifts": 20, "shift_span": 10.0},
    "smoothing": {"u": None, "v": None},
    "tolerances": {"tail_target": 1e-5, "threshold_frac": 0.05, "critical_band": 0.05,
                   "landau_tol": 0.02},
    "sweep": {"n_configs": 30},
    "output": {"dir": "out", "format": None},
    "seed": 0,
}

# keys whose values are free-form (validated by their own parsers)
_OPAQUE = {"scheme", "window", "spectrum", "weights"}
_FORMATS = ("json", "csv")


def _check_keys(data: dict, ref: dict, path: str) -> None:
    for key, val in data.items():
        p = f"{path}.{key}"
        if key not in ref:
            raise ConfigError(f"unknown key '{p}'")
        if isinstance(ref[key], dict) and key not in _OPAQUE:
            if not isinstance(val, dict):
                raise ConfigError(f"'{p}' must be a mapping")
            _check_keys(val, ref[key], p)


def _merge(base: dict, over: dict) -> dict:
    out = copy.deepcopy(base)
    for k, v in over.items():
        if k == "weights" and isinstance(v, dict):
            out[k] = {**out[k], **copy.deepcopy(v)}
        elif isinstance(v, dict) and isinstance(out.get(k), dict) and k not in ("scheme", "spectrum"):
            out[k] = _merge(out[k], v)
        else:
            out[k] = copy.deepcopy(v)
    return out


def _scheme_from(d) -> LatticeScheme:
    if not isinstance(d, dict):
        raise ConfigError("'config.scheme' must be a mapping")
    extra = set(d) - {"kind", "basis"}
    if extra:
        raise ConfigError(f"unknown key 'config.scheme.{sorted(extra)[0]}'")
    if "basis" in d:
        return make_scheme(np.asarray(d["basis"], dtype=float))
    kind = d.get("kind", "fibonacci")
    if kind == "fibonacci":
        return fibonacci_scheme()
    if kind == "identity":
        return make_scheme(np.eye(2))
    if kind == "silver":
        return make_scheme([[1.0, SILVER], [1.0, 1 - SILVER]])
    raise ConfigError(f"'config.scheme.kind': unknown scheme {kind!r}")


def _positive(val, path, integer=False):
    try:
        x = int(val) if integer else float(val)
    except (TypeError, ValueError):
        raise ConfigError(f"'{path}' must be a number, got {val!r}") from None
    if integer and x != val:
        raise ConfigError(f"'{path}' must be an integer, got {val!r}")
    if not x > 0 or not math.isfinite(x):
        raise ConfigError(f"'{path}' must be positive and finite, got {val!r}")
    return x


@dataclass
class RunConfig:
    """Validated configuration; ``raw`` is the merged mapping it was built from."""

    raw: dict
    scheme: LatticeScheme = field(init=False)
    window: IntervalSet = field(init=False)
    spectrum: IntervalSet = field(init=False)
    weights: dict = field(init=False)

    def __post_init__(self):
        r = self.raw
        try:
            self.scheme = _scheme_from(r["scheme"])
            self.window = as_interval_set(r["window"])
            self.spectrum = as_interval_set(r["spectrum"])
            self.weights = {}
            for name, spec in r["weights"].items():
                if not isinstance(spec, dict):
                    raise ConfigError(f"'config.weights.{name}' must be a mapping")
                self.weights[name] = weight_from_dict(spec)
        except ConfigError:
            raise
        except (CutProjectError, ValueError, KeyError, TypeError) as exc:
            raise ConfigError(f"invalid config: {exc}") from exc
        if self.window.is_empty or self.spectrum.is_empty:
            raise ConfigError("'config.window' and 'config.spectrum' must be non-empty")
        tr = [_positive(t, "config.truncations") for t in r["truncations"]]
        if not tr or any(b <= a for a, b in zip(tr, tr[1:])):
            raise ConfigError("'config.truncations' must be strictly increasing")
        _positive(r["radius"], "config.radius")
        vh = r["van_hove"]
        for k in ("T0", "ratio", "shift_span"):
            _positive(vh[k], f"config.van_hove.{k}")
        for k in ("levels", "n_shifts"):
            _positive(vh[k], f"config.van_hove.{k}", integer=True)
        fj = r["fejer"]
        for n in fj["ns"]:
            _positive(n, "config.fejer.ns", integer=True)
        _positive(fj["n_shifts"], "config.fejer.n_shifts", integer=True)
        _positive(fj["shift_span"], "config.fejer.shift_span")
        for k in ("u", "v"):
            if r["smoothing"][k] is not None:
                _positive(r["smoothing"][k], f"config.smoothing.{k}")
        for k, v in r["tolerances"].items():
            _positive(v, f"config.tolerances.{k}")
        _positive(r["sweep"]["n_configs"], "config.sweep.n_configs", integer=True)
        if r["output"]["format"] is not None and r["output"]["format"] not in _FORMATS:
            raise ConfigError(f"'config.output.format' must be one of {_FORMATS}")
        if not isinstance(r["seed"], int) or isinstance(r["seed"], bool):
            raise ConfigError("'config.seed' must be an integer")

    def __getattr__(self, name):
        raw = self.__dict__.get("raw")
        if raw is not None and name in raw:
            return raw[name]
        raise AttributeError(name)

    def to_dict(self) -> dict:
        """Canonical mapping; parsing it again gives the same mapping."""
        d = copy.deepcopy(self.raw)
        d["scheme"] = {"basis": self.scheme.basis.tolist()}
        d["window"] = self.window.to_json()
        d["spectrum"] = self.spectrum.to_json()
        d["truncations"] = [float(t) for t in d["truncations"]]
        d["radius"] = float(d["radius"])
        return d

    def dumps(self) -> str:
        return yaml.safe_dump(self.to_dict(), sort_keys=True)


def parse_config(data: Optional[dict] = None, overrides: Optional[dict] = None) -> RunConfig:
    data = {} if data is None else data
    if not isinstance(data, dict):
        raise ConfigError("config must be a mapping at top level")
    _check_keys(data, DEFAULTS, "config")
    merged = _merge(DEFAULTS, data)
    if overrides:
        merged = _merge(merged, overrides)
    return RunConfig(merged)


def load_config(path, overrides: Optional[dict] = None) -> RunConfig:
    """Read YAML or JSON (chosen by suffix, YAML otherwise)."""
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"config file not found: {p}")
    text = p.read_text()
    try:
        data = json.loads(text) if p.suffix.lower() == ".json" else yaml.safe_load(text)
    except (json.JSONDecodeError, yaml.YAMLError) as exc:
        raise ConfigError(f"cannot parse {p}: {exc}") from exc
    return parse_config(data or {}, overrides)
