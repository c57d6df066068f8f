"""TOML sweep configuration files.

Schema (every key except ``axes`` optional; unknown keys are rejected)::

    name = "my-sweep"
    resonance_lock = true             # lock unswept Delta_1, Delta_b to omega_m'
    outputs = ["stable", "variance_db"]

    [base]                            # any SystemParams field
    G_c = 0.15
    n_m = 100

    [[axes]]                          # one or two entries
    name = "G_b"
    min = 0.0
    max = 0.3
    count = 61
    spacing = "linear"                # or "log"

    [[series]]                        # optional; each repeats the grid
    label = "no-BSBS"
    G_b = 0.0
"""

from __future__ import annotations

import sys

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .errors import ConfigError, ParameterError
from .model import SystemParams
from .sweep import DEFAULT_OUTPUTS, Axis, Series, SweepConfig

__all__ = ["load_config", "parse_config"]

_TOP_KEYS = {"name", "resonance_lock", "outputs", "base", "axes", "series"}
_AXIS_KEYS = {"name", "min", "max", "count", "spacing"}
_PARAM_NAMES = set(SystemParams.field_names())


def _reject_unknown(section, table, allowed):
    unknown = set(table) - set(allowed)
    if unknown:
        raise ConfigError(f"unknown key(s) in {section}: {', '.join(sorted(unknown))}")


def _number(section, key, value):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{section}.{key} must be a number")
    return float(value)


def base_params(table, section="base") -> SystemParams:
    if not isinstance(table, dict):
        raise ConfigError(f"[{section}] must be a table")
    _reject_unknown(f"[{section}]", table, _PARAM_NAMES)
    values = {k: _number(section, k, v) for k, v in table.items()}
    try:
        return SystemParams(**values)
    except ParameterError as exc:
        raise ConfigError(f"[{section}]: {exc}") from exc


def parse_config(data: dict) -> SweepConfig:
    _reject_unknown("top level", data, _TOP_KEYS)
    base = base_params(data.get("base", {}))
    raw_axes = data.get("axes")
    if not isinstance(raw_axes, list) or not raw_axes:
        raise ConfigError("config needs an [[axes]] array with one or two entries")
    axes = []
    for i, ax in enumerate(raw_axes):
        section = f"axes[{i}]"
        if not isinstance(ax, dict):
            raise ConfigError(f"{section} must be a table")
        _reject_unknown(section, ax, _AXIS_KEYS)
        missing = {"name", "min", "max", "count"} - set(ax)
        if missing:
            raise ConfigError(f"{section} missing {', '.join(sorted(missing))}")
        count = ax["count"]
        if isinstance(count, bool) or not isinstance(count, int):
            raise ConfigError(f"{section}.count must be an integer")
        axes.append(
            Axis(
                name=ax["name"],
                min=_number(section, "min", ax["min"]),
                max=_number(section, "max", ax["max"]),
                count=count,
                spacing=ax.get("spacing", "linear"),
            )
        )
    series = []
    for i, s in enumerate(data.get("series", [])):
        section = f"series[{i}]"
        if not isinstance(s, dict) or "label" not in s:
            raise ConfigError(f"{section} must be a table with a label")
        overrides = {k: v for k, v in s.items() if k != "label"}
        _reject_unknown(section, overrides, _PARAM_NAMES)
        series.append(
            Series(str(s["label"]), tuple((k, _number(section, k, v)) for k, v in overrides.items()))
        )
    lock = data.get("resonance_lock", True)
    if not isinstance(lock, bool):
        raise ConfigError("resonance_lock must be true or false")
    outputs = data.get("outputs", list(DEFAULT_OUTPUTS))
    if not isinstance(outputs, list) or not all(isinstance(o, str) for o in outputs):
        raise ConfigError("outputs must be a list of metric names")
    return SweepConfig(
        base=base,
        axes=tuple(axes),
        outputs=tuple(outputs),
        resonance_lock=lock,
        series=tuple(series),
        name=str(data.get("name", "custom")),
    )


def load_config(path) -> SweepConfig:
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"malformed config {path}: {exc}") from exc
    return parse_config(data)
