#!/usr/bin/env python3
# Copyright (C) 2026 by the mg1tail developers
# License: GNU General Public License v3.0 (see LICENSE file for details)

"""
Pareto (Lomax) integrated tail: F̄(t) = (1 + t/b)^(-alpha), alpha > 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, ClassVar

import numpy as np
from numpy.typing import ArrayLike

from ...errors import UnsupportedOrderError
from ..base_model import IntegratedTailModel, as_float_array


@dataclass(frozen=True)
class ParetoTail(IntegratedTailModel):
    alpha: float
    scale: float = 1.0

    family: ClassVar[str] = "pareto"
    param_names: ClassVar[tuple[str, ...]] = ("alpha", "scale")

    def __post_init__(self):
        self._require(self.alpha > 2, f"pareto: alpha must be > 2, got {self.alpha}")
        self._require(self.scale > 0, f"pareto: scale must be > 0, got {self.scale}")

    def log_tail(self, t: ArrayLike) -> Any:
        t = as_float_array(t)
        return (-self.alpha * np.log1p(np.maximum(t, 0.0) / self.scale))[()]

    def _cumulative_hazard(self, t):
        return self.alpha * np.log1p(t / self.scale)

    def _hazard_rate(self, t):
        return self.alpha / (self.scale + t)

    def _raw_moment(self, k: int) -> float:
        if k >= self.alpha:
            raise UnsupportedOrderError(self.family, k, self.params)
        return self.scale ** k * math.factorial(k) / math.prod(self.alpha - i for i in range(1, k + 1))

    def hazard_index(self) -> tuple[float, int]:
        return 0.0, 2

    def inverse_tail(self, p: ArrayLike) -> Any:
        p = as_float_array(p)
        return (self.scale * np.expm1(-np.log(p) / self.alpha))[()]

    def scaled(self, factor: float) -> ParetoTail:
        return ParetoTail(alpha=self.alpha, scale=self.scale * factor)
