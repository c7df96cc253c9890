#!/usr/bin/env python3
# Copyright (C) 2026 by the mg1tail developers
# License: GNU General Public License v3.0 (see LICENSE file for details)

"""
Integrated-Tail Model Base

Common interface of the subexponential integrated-tail families. Concrete families
implement the analytic pieces (log tail, cumulative hazard, hazard rate, raw moments,
inverse tail, hazard index); everything else is derived here.

All methods accept scalars or numpy arrays and are pure; instances are frozen.
"""

from __future__ import annotations

import enum
import math
from abc import ABC, abstractmethod
from typing import Any, ClassVar

import numpy as np
from numpy.typing import ArrayLike, NDArray

from ..errors import ConfigError, DomainError


class ModelKind(enum.Enum):
    ParetoTail = "pareto"
    WeibullTail = "weibull"
    LognormalTail = "lognormal"


def as_float_array(t: ArrayLike) -> NDArray[np.float64]:
    return np.asarray(t, dtype=float)


class IntegratedTailModel(ABC):
    """Subexponential integrated-tail distribution F parameterized directly by its tail"""

    family: ClassVar[str] = ""
    param_names: ClassVar[tuple[str, ...]] = ()

    @property
    def params(self) -> dict[str, float]:
        return {name: getattr(self, name) for name in self.param_names}

    @property
    def kind(self) -> ModelKind:
        return ModelKind(self.family)

    # analytic pieces

    @abstractmethod
    def log_tail(self, t: ArrayLike) -> Any:
        """log F̄(t); 0 for t <= 0, exact in the log domain for large t"""

    @abstractmethod
    def _cumulative_hazard(self, t: NDArray[np.float64]) -> NDArray[np.float64]:
        """Q(t) for t > 0"""

    @abstractmethod
    def _hazard_rate(self, t: NDArray[np.float64]) -> NDArray[np.float64]:
        """q(t) = Q'(t) for t > 0"""

    @abstractmethod
    def _raw_moment(self, k: int) -> float:
        """k-th raw moment; raise UnsupportedOrderError when infinite"""

    @abstractmethod
    def hazard_index(self) -> tuple[float, int]:
        """Analytic (r, kappa)"""

    @abstractmethod
    def inverse_tail(self, p: ArrayLike) -> Any:
        """F̄⁻¹(p) for p in (0, 1]"""

    @abstractmethod
    def scaled(self, factor: float) -> IntegratedTailModel:
        """Model of factor * X"""

    # derived

    def tail(self, t: ArrayLike) -> Any:
        return np.exp(self.log_tail(t))

    def cumulative_hazard(self, t: ArrayLike) -> Any:
        t = self._positive(t)
        return self._cumulative_hazard(t)[()]

    def hazard_rate(self, t: ArrayLike) -> Any:
        t = self._positive(t)
        return self._hazard_rate(t)[()]

    def cumulative_hazard_approx(self, t: ArrayLike) -> Any:
        """Q used by the threshold machinery, defined for t >= 0 with Q(0) = 0"""
        t = as_float_array(t)
        out = np.zeros_like(t)
        pos = t > 0
        if np.any(pos):
            out[pos] = self._cumulative_hazard(t[pos])
        return out[()]

    def raw_moment(self, k: int) -> float:
        if int(k) != k or k < 1:
            raise DomainError(f"moment order must be a positive integer, got {k!r}")
        return self._raw_moment(int(k))

    def mean(self) -> float:
        return self.raw_moment(1)

    def unit_mean(self) -> IntegratedTailModel:
        return self.scaled(1.0 / self.mean())

    @staticmethod
    def _positive(t: ArrayLike) -> NDArray[np.float64]:
        t = as_float_array(t)
        if np.any(~(t > 0)):
            raise DomainError(f"t must be > 0, got {t}")
        return t

    @staticmethod
    def _require(condition: bool, message: str) -> None:
        if not condition:
            raise ConfigError(message)

    def __str__(self) -> str:
        args = ", ".join(f"{k}={v:g}" for k, v in self.params.items())
        return f"{self.family}({args})"


def kappa_from_exponent(alpha: float) -> int:
    """kappa = max{l : l/(l+1) <= alpha} + 2 for Q(t) ~ t^alpha"""
    if alpha < 0.5:
        return 2
    return int(math.floor(alpha / (1.0 - alpha) + 1e-12)) + 2
