"""Run configuration for the command-line driver."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional

from polygonflow.errors import DivisionPointOutOfRange, ParseError, ValidationError
from polygonflow.polygon import NORMALIZED, UNNORMALIZED, DivisionScheme, PerSegment, Uniform

DEFAULT_SWEEP = (0.2, 0.25, 0.4)


@dataclass
class RunConfig:
    n: Optional[int] = None
    scheme: Optional[DivisionScheme] = None
    steps: int = 100
    seed: Optional[int] = None
    mode: str = NORMALIZED
    input_path: Optional[str] = None
    out_trace: Optional[str] = None
    out_svg: Optional[str] = None
    out_report: Optional[str] = None
    out_polygon: Optional[str] = None
    qmax: int = 1000
    theta_u: float = 0.3
    theta_v: float = 1.2
    k: Optional[int] = None
    half_width: float = 1.0
    sweep_xis: tuple = field(default=DEFAULT_SWEEP)


_KEYS = {
    "n", "xi", "xi_list", "steps", "seed", "mode", "input_path", "out_trace",
    "out_svg", "out_report", "out_polygon", "qmax", "theta_u", "theta_v", "k",
    "half_width", "sweep_xis",
}


def _int(data, key, lo=None):
    v = data[key]
    if isinstance(v, bool) or not isinstance(v, int):
        raise ValidationError(key, f"expected an integer, got {v!r}")
    if lo is not None and v < lo:
        raise ValidationError(key, f"must be at least {lo}, got {v}")
    return v


def _real(data, key):
    v = data[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
        raise ValidationError(key, f"expected a finite number, got {v!r}")
    return float(v)


def _str(data, key):
    v = data[key]
    if not isinstance(v, str):
        raise ValidationError(key, f"expected a string, got {v!r}")
    return v


def _reals(data, key):
    v = data[key]
    if not isinstance(v, (list, tuple)) or not v:
        raise ValidationError(key, "expected a nonempty array of numbers")
    return [_real({f"{key}[{i}]": x}, f"{key}[{i}]") for i, x in enumerate(v)]


def config_from_mapping(data: dict) -> RunConfig:
    unknown = sorted(set(data) - _KEYS)
    if unknown:
        raise ValidationError(unknown[0], "unknown key")
    cfg = RunConfig()
    if "n" in data:
        cfg.n = _int(data, "n", 3)
    if "xi" in data and "xi_list" in data:
        raise ValidationError("xi_list", "give either xi or xi_list, not both")
    try:
        if "xi" in data:
            cfg.scheme = Uniform(_real(data, "xi"))
        elif "xi_list" in data:
            cfg.scheme = PerSegment(tuple(_reals(data, "xi_list")))
    except DivisionPointOutOfRange as exc:
        key = "xi" if "xi" in data else "xi_list"
        raise ValidationError(key, "division points must lie in the open interval (0, 1): " + str(exc)) from None
    if isinstance(cfg.scheme, PerSegment) and cfg.n is not None and len(cfg.scheme.xis) != cfg.n:
        raise ValidationError("xi_list", f"has {len(cfg.scheme.xis)} entries but n = {cfg.n}")
    if "steps" in data:
        cfg.steps = _int(data, "steps", 0)
    if "seed" in data:
        cfg.seed = _int(data, "seed")
        if not -(2**63) <= cfg.seed < 2**64:
            raise ValidationError("seed", "must fit in 64 bits")
    if "mode" in data:
        mode = _str(data, "mode")
        if mode not in (NORMALIZED, UNNORMALIZED):
            raise ValidationError("mode", f"must be {NORMALIZED!r} or {UNNORMALIZED!r}")
        cfg.mode = mode
    for key in ("input_path", "out_trace", "out_svg", "out_report", "out_polygon"):
        if key in data and data[key] is not None:
            setattr(cfg, key, _str(data, key))
    if cfg.input_path is not None and cfg.seed is not None:
        raise ValidationError("input_path", "give either input_path or n+seed, not both")
    if "qmax" in data:
        cfg.qmax = _int(data, "qmax", 1)
    for key in ("theta_u", "theta_v"):
        if key in data:
            setattr(cfg, key, _real(data, key))
    if "k" in data:
        cfg.k = _int(data, "k", 0)
    if "half_width" in data:
        cfg.half_width = _real(data, "half_width")
        if cfg.half_width <= 0:
            raise ValidationError("half_width", "must be positive")
    if "sweep_xis" in data:
        vals = _reals(data, "sweep_xis")
        for i, v in enumerate(vals):
            if not 0 < v < 1:
                raise ValidationError(f"sweep_xis[{i}]", "must lie in the open interval (0, 1)")
        cfg.sweep_xis = tuple(vals)
    return cfg


def parse_config(text: str) -> RunConfig:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise ParseError("configuration must be a JSON object")
    return config_from_mapping(data)
