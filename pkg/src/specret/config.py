"""Experiment configuration: a single JSON document, schema-validated,
with CLI flags overriding fields one-to-one."""
from __future__ import annotations

import json

import jsonschema

CONFIG_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "signal": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "kind": {"enum": ["chirp", "mixture", "wav"]},
                "path": {"type": "string"},
            },
            "required": ["kind"],
        },
        "scheme": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "kind": {"enum": ["frft_gauss", "hermite"]},
                "a": {"type": "number", "exclusiveMinimum": 0},
                "n_windows": {"type": "integer", "minimum": 1},
                "angles": {"type": "array", "items": {"type": "number"}, "minItems": 1},
                "degrees": {
                    "type": "array",
                    "items": {"type": "integer", "minimum": 0},
                    "minItems": 1,
                },
            },
            "required": ["kind"],
        },
        "epsilon": {"type": "number", "exclusiveMinimum": 0},
        "noise": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "model": {"enum": ["none", "additive", "multiplicative"]},
                "level": {"type": "number", "minimum": 0},
                "seed": {"type": "integer", "minimum": 0},
            },
            "required": ["model"],
        },
        "grid": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "T": {"type": "number", "exclusiveMinimum": 0},
                "L": {"type": "integer", "minimum": 2},
            },
            "required": ["T", "L"],
        },
        "anchor": {"type": ["integer", "null"]},
        "algorithm": {"enum": ["alg1", "alg2"]},
        "out": {"type": "string"},
        "emit": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "csv": {"type": "boolean"},
                "pgm": {"type": "boolean"},
                "json": {"type": "boolean"},
                "wav": {"type": "boolean"},
            },
        },
        "study": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "count": {"type": "integer", "minimum": 1},
                "degree_min": {"type": "integer", "minimum": 0},
                "degree_max": {"type": "integer", "minimum": 0},
                "trials": {"type": "integer", "minimum": 1},
            },
        },
        "seed": {"type": "integer", "minimum": 0},
    },
}

DEFAULTS = {
    "signal": {"kind": "chirp"},
    "scheme": {"kind": "frft_gauss", "a": 15.0, "n_windows": 40},
    "epsilon": 1e-3,
    "noise": {"model": "none"},
    "grid": {"T": 8.0, "L": 1024},
    "anchor": None,
    "algorithm": None,  # resolved from the scheme when absent
    "out": "out",
    "emit": {"csv": True, "pgm": True, "json": True, "wav": False},
    "study": {"count": 6, "degree_min": 0, "degree_max": 50, "trials": 100},
    "seed": 0,
}


class ConfigError(ValueError):
    pass


def load_config(path: str | None, overrides: dict | None = None) -> dict:
    """Merge defaults, an optional JSON document, and CLI overrides."""
    cfg = json.loads(json.dumps(DEFAULTS))  # deep copy
    cfg["algorithm"] = None
    if path is not None:
        try:
            with open(path) as fh:
                doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from exc
        _validate(doc)
        _merge(cfg, doc)
    if overrides:
        _merge(cfg, {k: v for k, v in overrides.items() if v is not None})
    _validate({k: v for k, v in cfg.items() if v is not None})
    _check_semantics(cfg)
    return cfg


_UNION_KEYS = ("signal", "scheme", "noise")  # replaced whole, never merged


def _merge(base: dict, extra: dict):
    for key, value in extra.items():
        if key not in _UNION_KEYS and isinstance(value, dict) and isinstance(base.get(key), dict):
            base[key].update(value)
        else:
            base[key] = value


def _validate(doc: dict):
    try:
        jsonschema.validate(doc, CONFIG_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise ConfigError(f"invalid config: {exc.message}") from exc


def _check_semantics(cfg: dict):
    grid = cfg["grid"]
    if grid["L"] % 2 != 0:
        raise ConfigError(f"grid L must be even, got {grid['L']}")
    scheme = cfg["scheme"]
    if scheme["kind"] == "frft_gauss":
        if "a" not in scheme:
            raise ConfigError("frft_gauss scheme needs the dilation 'a'")
        if "n_windows" not in scheme and "angles" not in scheme:
            raise ConfigError("frft_gauss scheme needs 'n_windows' or 'angles'")
    else:
        degrees = scheme.get("degrees")
        if not degrees:
            raise ConfigError("hermite scheme needs a 'degrees' list")
        if any(b <= a for a, b in zip(degrees, degrees[1:])):
            raise ConfigError(f"hermite degrees must be strictly increasing: {degrees}")
    if cfg["signal"]["kind"] == "wav" and "path" not in cfg["signal"]:
        raise ConfigError("wav signal needs a 'path'")
    noise = cfg["noise"]
    if noise["model"] != "none" and "level" not in noise:
        raise ConfigError(f"{noise['model']} noise needs a 'level'")
    study = cfg["study"]
    span = study["degree_max"] - study["degree_min"] + 1
    if span < study["count"]:
        raise ConfigError(
            f"cannot draw {study['count']} distinct degrees from a range of {span}"
        )
