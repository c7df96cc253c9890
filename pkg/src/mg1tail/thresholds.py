#!/usr/bin/env python3
# Copyright (C) 2026 by the mg1tail developers
# License: GNU General Public License v3.0 (see LICENSE file for details)

"""
Region Thresholds

omega_1(t) = t²/(Q(t) ∨ 1), omega_2(t) = t²/(Q(t) ∨ 1)², b(t) = t²/(Q̃(t) ∨ 1) with
Q̃(t) = Q(sigma t + mu) - 2 log t, their generalized right inverses, the thresholds
K_r(x) <= M(x) <= N(x) splitting the Pollaczek-Khintchine sum, and the
heavy-tail / heavy-traffic region boundary rho*(x) = exp(-mu Q(x)/x).

Right inverses are first crossings inf{u >= 0 : t <= f(u)}, found by a lazy scan over
log-spaced points followed by bisection. For a continuous f this is also the right
inverse of the running-max envelope sup_{s<=u} f(s), so non-monotone omegas are fine.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
from numpy.typing import ArrayLike

from . import constants
from .Debug import get_logger
from .errors import DomainError, RightInverseError
from .queue_model import QueueModel

logger = get_logger(__file__)

Envelope = Callable[[np.ndarray], np.ndarray]


class Region(enum.Enum):
    HeavyTailRegion = "heavy_tail"
    HeavyTrafficSideRegion = "heavy_traffic_side"


def _decade_grid(k: int, points: int) -> np.ndarray:
    return np.geomspace(10.0 ** k, 10.0 ** (k + 1), points)


def envelope(f: Envelope, u: float, points: int = constants.INVERSE_SCAN_POINTS) -> float:
    """Running maximum sup_{0<=s<=u} f(s), evaluated lazily on a log-spaced scan"""
    best = float(f(np.array([0.0]))[0])
    if u <= 0:
        return best
    top = math.floor(math.log10(u))
    for k in range(constants.INVERSE_MIN_DECADE, top + 1):
        grid = _decade_grid(k, points)
        grid = grid[grid <= u]
        if grid.size:
            best = max(best, float(np.max(f(grid))))
    return max(best, float(f(np.array([u]))[0]))


def right_inverse(f: Envelope, t: float, points: int = constants.INVERSE_SCAN_POINTS) -> float:
    """
    inf{u >= 0 : t <= f(u)} for a continuous nonnegative f with f(u) -> infinity.
    The result is bracketed to BISECTION_TOL relative width, or to adjacent floats.

    Raises RightInverseError if no crossing is found below 10^INVERSE_MAX_DECADE.
    """
    if t <= float(f(np.array([0.0]))[0]):
        return 0.0
    lo = 0.0
    hi = None
    for k in range(constants.INVERSE_MIN_DECADE, constants.INVERSE_MAX_DECADE):
        grid = _decade_grid(k, points)
        hit = np.flatnonzero(f(grid) >= t)
        if hit.size:
            i = int(hit[0])
            hi = float(grid[i])
            if i > 0:
                lo = float(grid[i - 1])
            break
        lo = float(grid[-1])
    if hi is None:
        raise RightInverseError(f"no crossing of level {t!r} below 1e{constants.INVERSE_MAX_DECADE}")
    for _ in range(constants.BISECTION_MAX_ITER):
        if hi - lo <= constants.BISECTION_TOL * hi:
            break
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            break
        if float(f(np.array([mid]))[0]) >= t:
            hi = mid
        else:
            lo = mid
    return hi


@dataclass(frozen=True)
class ThresholdSet:
    """Thresholds and right inverses of one queue model"""

    qm: QueueModel

    @property
    def mu(self) -> float:
        return self.qm.mu

    def hazard(self, t: ArrayLike) -> np.ndarray:
        """Q used by the region machinery (lognormal: quadratic surrogate)"""
        return np.asarray(self.qm.dist.cumulative_hazard_approx(t), dtype=float)

    def omega1(self, t: ArrayLike):
        t = np.asarray(t, dtype=float)
        return (t * t / np.maximum(self.hazard(t), 1.0))[()]

    def omega2(self, t: ArrayLike):
        t = np.asarray(t, dtype=float)
        clamp = np.maximum(self.hazard(t), 1.0)
        return (t * t / (clamp * clamp))[()]

    def q_tilde(self, t: ArrayLike):
        t = np.asarray(t, dtype=float)
        with np.errstate(divide="ignore"):
            return (self.hazard(self.qm.sigma * t + self.mu) - 2.0 * np.log(t))[()]

    def b(self, t: ArrayLike):
        t = np.asarray(t, dtype=float)
        return (t * t / np.maximum(self.q_tilde(t), 1.0))[()]

    def q_tilde_index(self, t: ArrayLike, rel: float = 1e-4):
        """Local index t g'(t)/g(t) of g = Q̃ ∨ 1, by central difference in log t"""
        t = np.asarray(t, dtype=float)
        up = np.log(np.maximum(self.q_tilde(t * (1.0 + rel)), 1.0))
        down = np.log(np.maximum(self.q_tilde(t * (1.0 - rel)), 1.0))
        return ((up - down) / (math.log1p(rel) - math.log1p(-rel)))[()]

    @lru_cache(maxsize=8192)
    def omega1_inv(self, t: float) -> float:
        return right_inverse(self._omega1_vec, float(t))

    @lru_cache(maxsize=8192)
    def omega2_inv(self, t: float) -> float:
        return right_inverse(self._omega2_vec, float(t))

    @lru_cache(maxsize=8192)
    def b_inv(self, t: float) -> float:
        return right_inverse(self._b_vec, float(t))

    def _omega1_vec(self, u):
        return np.asarray(self.omega1(u), dtype=float).reshape(np.shape(u))

    def _omega2_vec(self, u):
        return np.asarray(self.omega2(u), dtype=float).reshape(np.shape(u))

    def _b_vec(self, u):
        return np.asarray(self.b(u), dtype=float).reshape(np.shape(u))

    # thresholds

    @staticmethod
    def _positive(x: float) -> float:
        x = float(x)
        if not x > 0:
            raise DomainError(f"x must be > 0, got {x}")
        return x

    def K_r(self, x: float) -> int:
        x = self._positive(x)
        if self.qm.r < 0.5:
            value = (x - self.omega2_inv(x)) / self.mu
        else:
            value = min(float(self.omega2(x)), x / (2.0 * self.mu))
        return max(math.floor(value), 0)

    def M(self, x: float) -> int:
        x = self._positive(x)
        return max(math.floor((x - self.omega1_inv(x)) / self.mu), 0)

    def N(self, x: float) -> int:
        x = self._positive(x)
        if x <= 1.0:
            return 0
        return max(math.floor((x - math.sqrt(x * math.log(x))) / self.mu), 0)

    def thresholds(self, x: float) -> tuple[int, int, int]:
        return self.K_r(x), self.M(x), self.N(x)

    def ordering_onset(self, x_grid: ArrayLike) -> float | None:
        """Smallest grid point from which K_r <= M <= N holds on the rest of the grid"""
        xs = np.sort(np.asarray(x_grid, dtype=float))
        onset = None
        for x in xs[::-1]:
            k, m, n = self.thresholds(x)
            if not k <= m <= n:
                break
            onset = float(x)
        logger.debug("%s: ordering onset %s", self.qm, onset)
        return onset

    # regions

    def rho_star(self, x: float) -> float:
        x = self._positive(x)
        return math.exp(-self.mu * float(self.hazard(x)) / x)

    def region(self, rho: float, x: float) -> Region:
        if not 0 < rho < 1:
            raise DomainError(f"rho must lie in (0,1), got {rho}")
        if rho < self.rho_star(x):
            return Region.HeavyTailRegion
        return Region.HeavyTrafficSideRegion


def omega1(ts: ThresholdSet, x: ArrayLike):
    return ts.omega1(x)


def omega2(ts: ThresholdSet, x: ArrayLike):
    return ts.omega2(x)


def region(qm: QueueModel, rho: float, x: float) -> Region:
    return ThresholdSet(qm).region(rho, x)
