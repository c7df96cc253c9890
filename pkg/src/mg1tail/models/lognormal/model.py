#!/usr/bin/env python3
# Copyright (C) 2026 by the mg1tail developers
# License: GNU General Public License v3.0 (see LICENSE file for details)

"""
Lognormal integrated tail: F̄(t) = 1 - Φ((log t - alpha)/beta).

Tail values, moments and sampling use the exact law. The threshold machinery uses the
quadratic surrogate Q(t) = ((log t - alpha)⁺)² / (2 beta²), which tracks -log F̄ well
in practice and keeps omega_1, omega_2 and b in closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, ClassVar

import numpy as np
from numpy.typing import ArrayLike
from scipy.special import log_ndtr, ndtri

from ..base_model import IntegratedTailModel, as_float_array

LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)


@dataclass(frozen=True)
class LognormalTail(IntegratedTailModel):
    alpha: float = 0.0
    beta: float = 1.0

    family: ClassVar[str] = "lognormal"
    param_names: ClassVar[tuple[str, ...]] = ("alpha", "beta")

    def __post_init__(self):
        self._require(math.isfinite(self.alpha), f"lognormal: alpha must be finite, got {self.alpha}")
        self._require(self.beta > 0, f"lognormal: beta must be > 0, got {self.beta}")

    def _z(self, t):
        with np.errstate(divide="ignore"):
            return (np.log(t) - self.alpha) / self.beta

    def log_tail(self, t: ArrayLike) -> Any:
        t = as_float_array(t)
        out = np.zeros_like(t)
        pos = t > 0
        out[pos] = log_ndtr(-self._z(t[pos]))
        return out[()]

    def _cumulative_hazard(self, t):
        return -log_ndtr(-self._z(t))

    def _hazard_rate(self, t):
        z = self._z(t)
        return np.exp(-0.5 * z * z - LOG_SQRT_2PI - np.log(self.beta * t) - log_ndtr(-z))

    def cumulative_hazard_approx(self, t: ArrayLike) -> Any:
        t = as_float_array(t)
        with np.errstate(divide="ignore"):
            excess = np.maximum(np.log(t) - self.alpha, 0.0)
        return (excess * excess / (2.0 * self.beta * self.beta))[()]

    def _raw_moment(self, k: int) -> float:
        return math.exp(k * self.alpha + 0.5 * k * k * self.beta * self.beta)

    def hazard_index(self) -> tuple[float, int]:
        return 0.0, 2

    def inverse_tail(self, p: ArrayLike) -> Any:
        p = as_float_array(p)
        return np.exp(self.alpha - self.beta * ndtri(p))[()]

    def scaled(self, factor: float) -> LognormalTail:
        return LognormalTail(alpha=self.alpha + math.log(factor), beta=self.beta)
