"""
Strict JSON configuration loading.

Keys mirror the dataclass field names. Unknown keys and invalid values are
reported as :class:`ConfigError` carrying the dotted key path, e.g.
``ga.mutation_prob``.
"""
from __future__ import annotations

import dataclasses
import json
from typing import Any, Optional

from .ale import AleConfig
from .channel import NoiseSpec
from .harness import KIND_DEFAULTS, KINDS, ExperimentSpec
from .modem import ModemConfig
from .optimizers import GAConfig, LMSConfig, PSOConfig

SECTIONS = {
    "modem": ModemConfig,
    "ale": AleConfig,
    "noise": NoiseSpec,
    "lms": LMSConfig,
    "ga": GAConfig,
    "pso": PSOConfig,
}
TOP_LEVEL = {
    "experiment",
    "grid",
    "trials",
    "master_seed",
    "n_bits",
    "snr_db",
    "algorithms",
    "algorithm",
    "output_path",
    "timing",
} | set(SECTIONS)


class ConfigError(ValueError):
    def __init__(self, key_path: str, message: str):
        self.key_path = key_path
        super().__init__(f"{key_path}: {message}")


def _number(value, path):
    if isinstance(value, str) and value.lower() in ("inf", "+inf", "infinity", "-inf"):
        return float(value)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(path, f"expected a number, got {value!r}")
    return value


def _coerce(value, default, path):
    if isinstance(default, tuple) or (default is None and isinstance(value, list)):
        if not isinstance(value, list):
            raise ConfigError(path, f"expected a list, got {value!r}")
        return tuple(_number(v, f"{path}[{i}]") for i, v in enumerate(value))
    if isinstance(default, bool):
        if not isinstance(value, bool):
            raise ConfigError(path, f"expected true/false, got {value!r}")
        return value
    if isinstance(default, int):
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(path, f"expected an integer, got {value!r}")
        return value
    if isinstance(default, float) or default is None:
        return value if value is None else _number(value, path)
    return value


def build_section(cls, data: Optional[dict], base=None, path: str = ""):
    """Overlay ``data`` onto ``base`` (or the class defaults) with strict keys."""
    base = base if base is not None else cls()
    if data is None:
        return base
    if not isinstance(data, dict):
        raise ConfigError(path, "expected an object")
    names = {f.name for f in dataclasses.fields(cls)}
    changes = {}
    for key, value in data.items():
        sub = f"{path}.{key}" if path else key
        if key not in names:
            raise ConfigError(sub, "unknown key")
        changes[key] = _coerce(value, getattr(base, key), sub)
    try:
        return dataclasses.replace(base, **changes)
    except (TypeError, ValueError) as err:
        raise ConfigError(path, str(err)) from err


def check_keys(data: dict) -> None:
    for key in data:
        if key not in TOP_LEVEL:
            raise ConfigError(key, "unknown key")


def spec_from_dict(data: dict, kind: Optional[str] = None, overrides: Optional[dict] = None) -> ExperimentSpec:
    """
    Build an :class:`ExperimentSpec` from a parsed config.

    ``kind`` (the ``--experiment`` flag) wins over the file's ``experiment``;
    ``overrides`` holds further flag values and wins over everything.
    Per-kind section defaults (e.g. 200 generations for the population
    sweep) sit underneath the file's own sections.
    """
    data = dict(data or {})
    check_keys(data)
    kind = kind or data.get("experiment")
    if kind is None:
        raise ConfigError("experiment", "no experiment kind given")
    if kind not in KINDS:
        raise ConfigError("experiment", f"unknown kind {kind!r}")
    data.update({k: v for k, v in (overrides or {}).items() if v is not None})

    sections = {}
    for name, cls in SECTIONS.items():
        base = build_section(cls, KIND_DEFAULTS[kind].get(name), path=name)
        sections[name] = build_section(cls, data.get(name), base, path=name)

    kwargs: dict[str, Any] = {"kind": kind, **sections}
    for key, conv in (("trials", int), ("master_seed", int), ("n_bits", int)):
        if key in data:
            value = data[key]
            if isinstance(value, bool) or not isinstance(value, int):
                raise ConfigError(key, f"expected an integer, got {value!r}")
            kwargs[key] = conv(value)
    if "snr_db" in data:
        kwargs["snr_db"] = float(_number(data["snr_db"], "snr_db"))
    if "grid" in data:
        grid = data["grid"]
        if isinstance(grid, dict):
            kwargs["grid"] = {k: tuple(_number(v, f"grid.{k}[{i}]") for i, v in enumerate(vals)) for k, vals in grid.items()}
        elif isinstance(grid, list):
            kwargs["grid"] = tuple(_number(v, f"grid[{i}]") for i, v in enumerate(grid))
        else:
            raise ConfigError("grid", "expected a list or an object of lists")
    if "algorithms" in data:
        kwargs["algorithms"] = tuple(data["algorithms"])
    if "output_path" in data:
        kwargs["output_path"] = data["output_path"]
    if "timing" in data:
        if not isinstance(data["timing"], bool):
            raise ConfigError("timing", "expected true/false")
        kwargs["timing"] = data["timing"]
    try:
        return ExperimentSpec(**kwargs)
    except ValueError as err:
        raise ConfigError(_guess_path(str(err)), str(err)) from err


def _guess_path(message: str) -> str:
    for key in ("grid", "trials", "master_seed", "n_bits", "algorithms"):
        if key in message:
            return key
    return "experiment"


def load_json(path) -> dict:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except json.JSONDecodeError as err:
        raise ConfigError(str(path), f"invalid JSON: {err}") from err
    if not isinstance(data, dict):
        raise ConfigError(str(path), "top level must be an object")
    return data


def spec_to_json(spec: ExperimentSpec) -> str:
    # an infinite SNR is written as the JSON extension token ``Infinity``
    return json.dumps(spec.to_dict(), indent=2)
