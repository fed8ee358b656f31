"""Run configuration: a flat ``key = value`` text format.

Example::

    # catenoid in H^2 x R
    family = sqrtshift:a=0.5
    epsilon = -1
    phi0 = 1.0
    sigma = 1
    s_max = 20
    tolerances = 1e-10, 1e-12
    output_dir = out
    mesh_theta_segments = 32
    sweep_range = 0.3, 1.2, 10

Angles accept ``pi`` multiples such as ``pi/4`` or ``3*pi/8``.
"""
from __future__ import annotations

import math
import os
import re
from dataclasses import dataclass, fields, replace
from typing import Optional

from .elliptic import parse_family

__all__ = ["RunConfig", "ConfigError", "parse_config", "load_config", "serialize_config", "parse_number"]

OUTPUT_DIR_ENV = "WG_OUTPUT_DIR"


class ConfigError(ValueError):
    pass


_PI_RE = re.compile(r"^(?:(?P<num>[-+]?\d+(?:\.\d*)?)\s*\*\s*)?(?P<neg>-)?pi(?:\s*/\s*(?P<den>\d+(?:\.\d*)?))?$")


def parse_number(text: str) -> float:
    """A float literal or a multiple of pi (``pi/4``, ``3*pi/8``, ``-pi``)."""
    text = text.strip()
    try:
        value = float(text)
    except ValueError:
        m = _PI_RE.match(text)
        if m is None:
            raise ConfigError(f"not a number: {text!r}") from None
        value = math.pi
        if m.group("num"):
            value *= float(m.group("num"))
        if m.group("neg"):
            value = -value
        if m.group("den"):
            value /= float(m.group("den"))
    if not math.isfinite(value):
        raise ConfigError(f"non-finite value: {text!r}")
    return value


def _parse_bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"not a boolean: {text!r}")


def _parse_int(text: str) -> int:
    try:
        return int(text.strip())
    except ValueError:
        raise ConfigError(f"not an integer: {text!r}") from None


@dataclass(frozen=True)
class RunConfig:
    family: str = "zero"
    epsilon: int = -1
    phi0: float = 1.0
    sigma: int = 1
    s_max: Optional[float] = None
    tolerances: tuple = (1e-10, 1e-12)
    output_dir: str = ""
    mesh_theta_segments: int = 32
    sweep_range: Optional[tuple] = None
    poincare: bool = False
    diagnostic: bool = False

    def __post_init__(self):
        parse_family(self.family)
        if self.epsilon not in (1, -1):
            raise ConfigError(f"epsilon must be 1 or -1, got {self.epsilon!r}")
        if self.sigma not in (1, -1):
            raise ConfigError(f"sigma must be 1 or -1, got {self.sigma!r}")
        if not math.isfinite(self.phi0):
            raise ConfigError("phi0 must be finite")
        if self.s_max is not None and not (math.isfinite(self.s_max) and self.s_max > 0):
            raise ConfigError("s_max must be a positive finite number")
        if len(self.tolerances) != 2 or not all(math.isfinite(x) and x > 0 for x in self.tolerances):
            raise ConfigError("tolerances must be two positive finite numbers")
        if self.mesh_theta_segments < 8:
            raise ConfigError("mesh_theta_segments must be at least 8")
        if self.sweep_range is not None:
            if len(self.sweep_range) != 3:
                raise ConfigError("sweep_range needs start, end, count")
            start, end, count = self.sweep_range
            if not (math.isfinite(start) and math.isfinite(end)):
                raise ConfigError("sweep_range bounds must be finite")
            if int(count) != count or count < 2:
                raise ConfigError("sweep_range count must be an integer >= 2")
        if not self.output_dir:
            object.__setattr__(self, "output_dir", os.environ.get(OUTPUT_DIR_ENV, "."))

    @property
    def rel_tol(self) -> float:
        return self.tolerances[0]

    @property
    def abs_tol(self) -> float:
        return self.tolerances[1]


def _split(value: str, n: int, key: str) -> list:
    parts = [p for p in re.split(r"[,\s]+", value.strip()) if p]
    if len(parts) != n:
        raise ConfigError(f"{key} expects {n} values, got {value!r}")
    return parts


def _convert(key: str, value: str):
    if key == "family":
        try:
            parse_family(value)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        return value.strip()
    if key in ("epsilon", "sigma", "mesh_theta_segments"):
        return _parse_int(value)
    if key == "phi0":
        return parse_number(value)
    if key == "s_max":
        v = value.strip().lower()
        return None if v in ("", "none", "default") else parse_number(value)
    if key == "tolerances":
        return tuple(parse_number(p) for p in _split(value, 2, key))
    if key == "output_dir":
        return value.strip()
    if key == "sweep_range":
        v = value.strip().lower()
        if v in ("", "none"):
            return None
        a, b, c = _split(value, 3, key)
        return (parse_number(a), parse_number(b), _parse_int(c))
    if key in ("poincare", "diagnostic"):
        return _parse_bool(value)
    raise ConfigError(f"unknown config key {key!r}")


_KEYS = [f.name for f in fields(RunConfig)]


def parse_config(text: str, base: Optional[RunConfig] = None, **overrides) -> RunConfig:
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value, got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in _KEYS:
            raise ConfigError(f"line {lineno}: unknown config key {key!r}")
        values[key] = _convert(key, value)
    values.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return replace(base or RunConfig(), **values)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from None


def load_config(path, **overrides) -> RunConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read(), **overrides)


def serialize_config(cfg: RunConfig) -> str:
    def num(x):
        return repr(float(x))

    lines = [
        f"family = {cfg.family}",
        f"epsilon = {cfg.epsilon}",
        f"phi0 = {num(cfg.phi0)}",
        f"sigma = {cfg.sigma}",
        f"s_max = {'none' if cfg.s_max is None else num(cfg.s_max)}",
        f"tolerances = {num(cfg.tolerances[0])}, {num(cfg.tolerances[1])}",
        f"output_dir = {cfg.output_dir}",
        f"mesh_theta_segments = {cfg.mesh_theta_segments}",
    ]
    if cfg.sweep_range is None:
        lines.append("sweep_range = none")
    else:
        a, b, c = cfg.sweep_range
        lines.append(f"sweep_range = {num(a)}, {num(b)}, {int(c)}")
    lines.append(f"poincare = {str(cfg.poincare).lower()}")
    lines.append(f"diagnostic = {str(cfg.diagnostic).lower()}")
    return "\n".join(lines) + "\n"
