"""Shared fixtures: the three reference families and a test-only exponential family."""

from __future__ import annotations

from dataclasses import dataclass
from typing import ClassVar

import numpy as np
import pytest

from mg1tail.models import LognormalTail, ParetoTail, WeibullTail
from mg1tail.models.base_model import IntegratedTailModel, as_float_array
from mg1tail.queue_model import build_queue_model


@dataclass(frozen=True)
class ExponentialTail(IntegratedTailModel):
    """F̄(t) = exp(-t/m). Not subexponential: only an exactness oracle for the simulator."""

    m: float = 1.0

    family: ClassVar[str] = "exponential"
    param_names: ClassVar[tuple[str, ...]] = ("m",)

    def log_tail(self, t):
        return (-np.maximum(as_float_array(t), 0.0) / self.m)[()]

    def _cumulative_hazard(self, t):
        return t / self.m

    def _hazard_rate(self, t):
        return np.full_like(t, 1.0 / self.m)

    def _raw_moment(self, k):
        return float(np.prod(np.arange(1, k + 1))) * self.m ** k

    def hazard_index(self):
        return 0.0, 2

    def inverse_tail(self, p):
        return (-self.m * np.log(as_float_array(p)))[()]

    def scaled(self, factor):
        return ExponentialTail(self.m * factor)


@pytest.fixture
def pareto():
    return ParetoTail(alpha=3.0, scale=1.0)


@pytest.fixture
def weibull():
    return WeibullTail(alpha=0.5, beta=1.0)


@pytest.fixture
def lognormal():
    return LognormalTail(alpha=0.0, beta=1.0)


@pytest.fixture
def exponential():
    return ExponentialTail(m=1.0)


@pytest.fixture
def pareto_qm(pareto):
    return build_queue_model(pareto)


@pytest.fixture
def weibull_qm(weibull):
    return build_queue_model(weibull)


@pytest.fixture
def lognormal_qm(lognormal):
    return build_queue_model(lognormal)


@pytest.fixture
def exponential_qm(exponential):
    return build_queue_model(exponential)
