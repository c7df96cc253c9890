#!/usr/bin/env python3
# Copyright (C) 2026 by the mg1tail developers
# License: GNU General Public License v3.0 (see LICENSE file for details)

"""
Integrated-Tail Distribution Operations

Functional front end over the family models in ``mg1tail.models``: tail values,
cumulative hazard, hazard rate, raw moments, analytic hazard index, the Assumption
diagnostic, inverse-tail sampling and model construction from a structured config.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Mapping

import numpy as np
from numpy.typing import ArrayLike

from .Debug import get_logger
from .errors import ConfigError, DomainError
from .models import FAMILIES, IntegratedTailModel, load_family_config

logger = get_logger(__file__)

PARAM_ALIASES = {"b": "scale", "alpha_ln": "alpha", "beta_ln": "beta"}


def tail(model: IntegratedTailModel, t: ArrayLike) -> Any:
    return model.tail(t)


def log_tail(model: IntegratedTailModel, t: ArrayLike) -> Any:
    return model.log_tail(t)


def cumulative_hazard(model: IntegratedTailModel, t: ArrayLike) -> Any:
    return model.cumulative_hazard(t)


def cumulative_hazard_approx(model: IntegratedTailModel, t: ArrayLike) -> Any:
    return model.cumulative_hazard_approx(t)


def hazard_rate(model: IntegratedTailModel, t: ArrayLike) -> Any:
    return model.hazard_rate(t)


def raw_moment(model: IntegratedTailModel, k: int) -> float:
    return model.raw_moment(k)


def hazard_index(model: IntegratedTailModel) -> tuple[float, int]:
    return model.hazard_index()


def sample_x(model: IntegratedTailModel, u: ArrayLike) -> Any:
    """Inverse-CDF draw F̄⁻¹(1 - u) for u in (0, 1)"""
    u = np.asarray(u, dtype=float)
    if np.any((u <= 0) | (u >= 1)):
        raise DomainError(f"u must lie in (0,1), got {u}")
    return model.inverse_tail(1.0 - u)


def assumption_level(r: float) -> float:
    """a(r): 2 when r = 0, 4/(1 - r) otherwise"""
    return 2.0 if r == 0 else 4.0 / (1.0 - r)


@dataclass(frozen=True)
class DiagnosticReport:
    r: float
    kappa: int
    a_r: float
    min_tq: float
    min_q_over_log: float
    hazard_ok: bool
    log_growth_ok: bool

    @property
    def passed(self) -> bool:
        return self.hazard_ok and self.log_growth_ok


def check_assumption(model: IntegratedTailModel, t_grid: ArrayLike) -> DiagnosticReport:
    """
    Finite-grid diagnostic of the hazard assumption

    Reports a(r), the minimum of t·q(t) over the upper half of the grid and the minimum
    of Q(t)/log t over the points of that half with t > 1. A diagnostic only: limits
    are not decidable from a finite grid.
    """
    t = np.sort(np.asarray(t_grid, dtype=float))
    if t.size == 0:
        raise DomainError("t_grid must be nonempty")
    if np.any(t <= 0):
        raise DomainError("t_grid must hold positive values")
    upper = t[t.size // 2:]
    r, kappa = model.hazard_index()
    a_r = assumption_level(r)
    min_tq = float(np.min(upper * model.hazard_rate(upper)))
    above_one = upper[upper > 1.0]
    if above_one.size:
        min_q_over_log = float(np.min(model.cumulative_hazard(above_one) / np.log(above_one)))
    else:
        min_q_over_log = math.nan
    report = DiagnosticReport(
        r=r,
        kappa=kappa,
        a_r=a_r,
        min_tq=min_tq,
        min_q_over_log=min_q_over_log,
        hazard_ok=min_tq > a_r,
        log_growth_ok=bool(min_q_over_log > a_r),
    )
    logger.debug("%s: %s", model, report)
    return report


def model_from_config(config: Mapping[str, Any]) -> IntegratedTailModel:
    """Build a model from {"family": ..., "alpha": ..., "beta"|"scale": ...}"""
    if "family" not in config:
        raise ConfigError("model config needs a 'family' key")
    family = str(config["family"]).lower()
    if family not in FAMILIES:
        raise ConfigError(f"unknown family {family!r}, expected one of {sorted(FAMILIES)}")
    cls = FAMILIES[family]
    family_config = load_family_config(family)
    params = dict(family_config.get("defaults", {}))
    for key, value in config.items():
        if key in ("family", "title", "description"):
            continue
        name = PARAM_ALIASES.get(key, key)
        if name not in cls.param_names:
            raise ConfigError(f"{family}: unknown parameter {key!r}, expected {list(cls.param_names)}")
        try:
            params[name] = float(value)
        except (TypeError, ValueError) as e:
            raise ConfigError(f"{family}: parameter {key!r} is not a number: {value!r}") from e
    model = cls(**params)
    logger.info("model: %s", model)
    return model


def parse_inline_model(tokens: list[str]) -> dict[str, Any]:
    """['lognormal', 'alpha=0', 'beta=1'] -> config mapping"""
    if not tokens:
        raise ConfigError("empty model specification")
    config: dict[str, Any] = {"family": tokens[0]}
    for token in tokens[1:]:
        key, sep, value = token.partition("=")
        if not sep or not key:
            raise ConfigError(f"model parameter must be key=value, got {token!r}")
        config[key.strip()] = value.strip()
    return config


def load_model(path: str | Path) -> IntegratedTailModel:
    """Read a model config file (JSON); a top-level "model" object is accepted too"""
    try:
        with Path(path).open(encoding="utf-8") as f:
            config = json.load(f)
    except OSError as e:
        raise ConfigError(f"cannot read model config {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"model config {path} is not valid JSON: {e}") from e
    if isinstance(config, dict) and isinstance(config.get("model"), dict):
        config = config["model"]
    if not isinstance(config, dict):
        raise ConfigError(f"model config {path} must hold a JSON object")
    return model_from_config(config)
