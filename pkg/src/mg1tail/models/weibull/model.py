#!/usr/bin/env python3
# Copyright (C) 2026 by the mg1tail developers
# License: GNU General Public License v3.0 (see LICENSE file for details)

"""
Weibull-type integrated tail: F̄(t) = exp(-beta t^alpha), 0 < alpha < 1.

The rate parameterization is the one used for the shipped figure preset; the
alternative scale form exp(-(t/s)^alpha) corresponds to beta = s^(-alpha).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, ClassVar

import numpy as np
from numpy.typing import ArrayLike
from scipy.special import gammaln

from ..base_model import IntegratedTailModel, as_float_array, kappa_from_exponent


@dataclass(frozen=True)
class WeibullTail(IntegratedTailModel):
    alpha: float
    beta: float = 1.0

    family: ClassVar[str] = "weibull"
    param_names: ClassVar[tuple[str, ...]] = ("alpha", "beta")

    def __post_init__(self):
        self._require(0 < self.alpha < 1, f"weibull: alpha must be in (0,1), got {self.alpha}")
        self._require(self.beta > 0, f"weibull: beta must be > 0, got {self.beta}")

    def log_tail(self, t: ArrayLike) -> Any:
        t = as_float_array(t)
        return (-self.beta * np.maximum(t, 0.0) ** self.alpha)[()]

    def _cumulative_hazard(self, t):
        return self.beta * t ** self.alpha

    def _hazard_rate(self, t):
        return self.alpha * self.beta * t ** (self.alpha - 1.0)

    def _raw_moment(self, k: int) -> float:
        return math.exp(gammaln(1.0 + k / self.alpha) - (k / self.alpha) * math.log(self.beta))

    def hazard_index(self) -> tuple[float, int]:
        return float(self.alpha), kappa_from_exponent(self.alpha)

    def inverse_tail(self, p: ArrayLike) -> Any:
        p = as_float_array(p)
        return ((-np.log(p) / self.beta) ** (1.0 / self.alpha))[()]

    def scaled(self, factor: float) -> WeibullTail:
        return WeibullTail(alpha=self.alpha, beta=self.beta * factor ** (-self.alpha))
