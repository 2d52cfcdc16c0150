"""Run configuration: defaults, config file, CLI overrides, echo for reports.

A config file is a flat JSON object; unknown keys are rejected so typos
cannot silently fall back to defaults.  Command-line flags override file
values, which override defaults.  Every emitted report embeds the fully
resolved configuration so any output can be reproduced from itself (a
previously emitted JSON report is itself accepted as a config file).
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path

from .basis import PhysicalParams
from .errors import ConfigError
from .evolution import TimeGrid

_TWO_PI = 2.0 * math.pi

DEFAULTS: dict = {
    "L": _TWO_PI,
    "m": 2.0,
    "q": 0.01,
    "w": 1,
    "T": None,  # resolved to 500/m when not given
    "dt": None,  # None: adaptive; 0: contract fixed step; >0: explicit step
    "rtol": 1e-10,
    "atol": 1e-12,
    "band": 3,
    "margin": None,  # band-edge margin, default 0.05*m downstream
    "r_max": 10,
    "r_sum": 5,
    "r_list": [10, 25, 50, 100, 200],
    "q_list": [0.0025, 0.005, 0.01, 0.02],
    "workers": 1,
    "format": "json",
    "output": None,
    "verbosity": 0,
}

_INT_KEYS = {"w", "band", "r_max", "r_sum", "workers", "verbosity"}
_FLOAT_KEYS = {"L", "m", "q", "T", "dt", "rtol", "atol", "margin"}


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved settings for one CLI invocation."""

    L: float = _TWO_PI
    m: float = 2.0
    q: float = 0.01
    w: int = 1
    T: float | None = None
    dt: float | None = None
    rtol: float = 1e-10
    atol: float = 1e-12
    band: int = 3
    margin: float | None = None
    r_max: int = 10
    r_sum: int = 5
    r_list: list[int] = field(default_factory=lambda: list(DEFAULTS["r_list"]))
    q_list: list[float] = field(default_factory=lambda: list(DEFAULTS["q_list"]))
    workers: int = 1
    format: str = "json"
    output: str | None = None
    verbosity: int = 0

    def physical(self) -> PhysicalParams:
        return PhysicalParams(L=self.L, m=self.m, q=self.q, w=self.w)

    @property
    def half_window(self) -> float:
        return self.T if self.T is not None else 500.0 / self.m

    def grid(self) -> TimeGrid:
        return TimeGrid(half_window=self.half_window, dt=self.dt, rtol=self.rtol, atol=self.atol)

    def validate(self) -> "RunConfig":
        self.physical()  # checks L, m, w, q, bandlimit
        self.grid()      # checks T, dt, tolerances
        if self.format not in ("csv", "json", "both"):
            raise ConfigError(f"format must be csv, json or both, got {self.format!r}")
        if self.band < 1:
            raise ConfigError(f"band must be >= 1, got {self.band}")
        for name in ("r_max", "r_sum"):
            if getattr(self, name) < 0:
                raise ConfigError(f"{name} must be >= 0, got {getattr(self, name)}")
        if self.workers < 1:
            raise ConfigError(f"workers must be >= 1, got {self.workers}")
        if self.margin is not None and self.margin <= 0:
            raise ConfigError(f"margin must be positive, got {self.margin}")
        if not self.r_list or sorted(self.r_list) != list(self.r_list):
            raise ConfigError("r_list must be non-empty and ascending")
        if len(self.q_list) < 4:
            raise ConfigError("q_list needs at least 4 entries for a scaling fit")
        return self

    def echo(self) -> dict:
        """JSON-ready dict of the resolved configuration."""
        return asdict(self)


def _coerce(key: str, value):
    if value is None:
        return None
    if key in _INT_KEYS:
        if isinstance(value, bool) or (isinstance(value, float) and value != int(value)):
            raise ConfigError(f"config key {key!r} must be an integer, got {value!r}")
        return int(value)
    if key in _FLOAT_KEYS:
        return float(value)
    if key == "r_list":
        return [int(v) for v in value]
    if key == "q_list":
        return [float(v) for v in value]
    return value


def load_config_file(path: str | Path) -> dict:
    """Read a flat JSON config; also accepts a previously emitted report."""
    try:
        raw = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"config file {path} must contain a JSON object")
    if "config" in raw and "payload" in raw:  # report envelope: reuse its echo
        raw = raw["config"]
    unknown = sorted(set(raw) - set(DEFAULTS))
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
    return {k: _coerce(k, v) for k, v in raw.items()}


def resolve_config(file_values: dict | None, overrides: dict) -> RunConfig:
    """defaults < config file < explicit CLI flags, then validate."""
    merged = dict(DEFAULTS)
    merged.update(file_values or {})
    merged.update({k: _coerce(k, v) for k, v in overrides.items() if v is not None})
    cfg = RunConfig(**merged)
    return cfg.validate()
