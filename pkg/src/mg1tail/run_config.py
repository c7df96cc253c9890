#!/usr/bin/env python3
# Copyright (C) 2026 by the mg1tail developers
# License: GNU General Public License v3.0 (see LICENSE file for details)

"""
Run configuration: a JSON run file merged with command-line flags (flags win).
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Any, Mapping, Sequence

import numpy as np

from . import constants
from .Debug import get_logger
from .dist import load_model, model_from_config, parse_inline_model
from .errors import ConfigError
from .models import IntegratedTailModel

logger = get_logger(__file__)

PRESETS: dict[str, dict[str, Any]] = {
    "lognormal": {"model": {"family": "lognormal", "alpha": 0.0, "beta": 1.0}, "rho": [0.9], "x": "log:1:200:25"},
    "weibull": {"model": {"family": "weibull", "alpha": 0.5, "beta": 0.22361}, "rho": [0.9], "x": "log:10:10000:25"},
}


def parse_grid(spec: str | float | Sequence[float]) -> list[float]:
    """
    Grid from a list, a number, or text:
    "a,b,c" explicit values, "lo:hi:num" linear, "log:lo:hi:num" geometric
    """
    if isinstance(spec, (int, float)):
        return [float(spec)]
    if not isinstance(spec, str):
        try:
            return [float(v) for v in spec]
        except (TypeError, ValueError) as e:
            raise ConfigError(f"grid must hold numbers, got {spec!r}") from e
    text = spec.strip()
    try:
        if text.startswith("log:"):
            lo, hi, num = text[4:].split(":")
            return [float(v) for v in np.geomspace(float(lo), float(hi), int(num))]
        if ":" in text:
            lo, hi, num = text.split(":")
            return [float(v) for v in np.linspace(float(lo), float(hi), int(num))]
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as e:
        raise ConfigError(f"cannot parse grid {spec!r}: {e}") from e


def parse_int_grid(spec: str | Sequence[int]) -> list[int]:
    values = parse_grid(spec)
    if any(v != int(v) or v < 1 for v in values):
        raise ConfigError(f"n grid must hold positive integers, got {spec!r}")
    return [int(v) for v in values]


def resolve_threads(threads: int | None) -> int:
    """--threads, else MG1_THREADS, else the available parallelism"""
    if threads is None:
        env = os.environ.get(constants.THREADS_ENV)
        if env:
            try:
                threads = int(env)
            except ValueError as e:
                raise ConfigError(f"{constants.THREADS_ENV} must be an integer, got {env!r}") from e
    if threads is None:
        threads = len(os.sched_getaffinity(0)) if hasattr(os, "sched_getaffinity") else (os.cpu_count() or 1)
    if threads < 1:
        raise ConfigError(f"threads must be >= 1, got {threads}")
    return threads


@dataclass
class RunConfig:
    command: str
    model: IntegratedTailModel | None = None
    rho: list[float] = field(default_factory=list)
    x: list[float] = field(default_factory=list)
    n: list[int] = field(default_factory=list)
    reps: int = constants.DEFAULT_REPS
    seed: int = constants.DEFAULT_SEED
    eps: float = constants.EPS
    threads: int = 1
    out: str | None = None
    simplified_heavy_tail: bool = False
    unit_mean: bool = False
    poly: bool = False
    csv: bool = False

    @classmethod
    def from_sources(cls, command: str, flags: Mapping[str, Any]) -> RunConfig:
        """Merge the run file named by flags["config"] (if any) with the non-None flags"""
        merged: dict[str, Any] = {}
        if flags.get("preset"):
            merged.update(PRESETS[flags["preset"]])
        if flags.get("config"):
            merged.update(_read_run_file(flags["config"]))
        for key, value in flags.items():
            if key in ("config", "preset", "command") or value is None or value is False:
                continue
            merged[key] = value

        known = {f.name for f in fields(cls)}
        unknown = sorted(set(merged) - known)
        if unknown:
            raise ConfigError(f"unknown run configuration keys: {unknown}")

        cfg = cls(command=command)
        if "model" in merged:
            cfg.model = _model(merged["model"])
        if "rho" in merged:
            cfg.rho = parse_grid(merged["rho"])
        if "x" in merged:
            cfg.x = parse_grid(merged["x"])
        if "n" in merged:
            cfg.n = parse_int_grid(merged["n"])
        for key in ("reps", "seed"):
            if key in merged:
                setattr(cfg, key, _integer(key, merged[key]))
        if "eps" in merged:
            cfg.eps = _real("eps", merged["eps"])
        for key in ("simplified_heavy_tail", "unit_mean", "poly", "csv"):
            if key in merged:
                setattr(cfg, key, bool(merged[key]))
        cfg.out = merged.get("out")
        cfg.threads = resolve_threads(_integer("threads", merged["threads"]) if "threads" in merged else None)
        cfg.validate()
        logger.debug("run config: %s", cfg)
        return cfg

    def validate(self) -> None:
        if self.model is None:
            raise ConfigError("no model given (use --model FILE or --model FAMILY key=value ...)")
        if any(not 0 < r < 1 for r in self.rho):
            raise ConfigError(f"rho values must lie in (0,1), got {self.rho}")
        if any(not v > 0 for v in self.x):
            raise ConfigError(f"x values must be > 0, got {self.x}")
        if not 0 < self.eps < 1:
            raise ConfigError(f"eps must lie in (0,1), got {self.eps}")
        if self.reps < constants.SIM_MIN_REPS:
            raise ConfigError(f"reps must be >= {constants.SIM_MIN_REPS}, got {self.reps}")

    def require(self, *names: str) -> None:
        for name in names:
            if not getattr(self, name):
                raise ConfigError(f"{self.command}: the {name} grid must not be empty")


def _integer(key: str, value: Any) -> int:
    try:
        if int(value) != float(value):
            raise ValueError(value)
        return int(value)
    except (TypeError, ValueError) as e:
        raise ConfigError(f"{key} must be an integer, got {value!r}") from e


def _real(key: str, value: Any) -> float:
    try:
        return float(value)
    except (TypeError, ValueError) as e:
        raise ConfigError(f"{key} must be a number, got {value!r}") from e


def _model(value: Any) -> IntegratedTailModel:
    if isinstance(value, IntegratedTailModel):
        return value
    if isinstance(value, Mapping):
        return model_from_config(value)
    tokens = value.split() if isinstance(value, str) else list(value)
    if len(tokens) == 1 and (tokens[0].endswith(".json") or Path(tokens[0]).is_file()):
        return load_model(tokens[0])
    return model_from_config(parse_inline_model(tokens))


def _read_run_file(path: str) -> dict[str, Any]:
    try:
        with Path(path).open(encoding="utf-8") as f:
            data = json.load(f)
    except OSError as e:
        raise ConfigError(f"cannot read run config {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"run config {path} is not valid JSON: {e}") from e
    if not isinstance(data, dict):
        raise ConfigError(f"run config {path} must hold a JSON object")
    return data
