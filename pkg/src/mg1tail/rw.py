#!/usr/bin/env python3
# Copyright (C) 2026 by the mg1tail developers
# License: GNU General Public License v3.0 (see LICENSE file for details)

"""
Random-Walk Tail Approximations

P(S_n > x) for the sum of n integrated-tail variables, uniformly in n: the big-jump
form n F̄(x - n mu) for n <= K_r(x) and, beyond, the two-piece form

    B_kappa(x, n) = pi_hat(x, n) 1(y <= (1+eps) C_n) + J(y, n) 1(y >= (1-eps) C_n),

y = (x - n mu)/sigma. Plugging both into the Pollaczek-Khintchine sum gives the
intermediate queue approximation S_kappa(rho, x).

The discretized-convolution oracle at the bottom is a deterministic reference for
small n.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import integrate, optimize
from scipy.special import log_ndtr, logsumexp

from . import constants
from .approx import Approximator, log_geometric_tail
from .cramer_poly import log_rho, q_kappa_coefficients
from .Debug import get_logger
from .errors import BracketingError, DomainError, QuadratureWarning, RightInverseError
from .models import IntegratedTailModel
from .queue_model import QueueModel
from .thresholds import ThresholdSet

logger = get_logger(__file__)

LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)
SCALE_POINTS = 65


class Branch:
    HeavyTail = "heavy_tail"
    PiHat = "pi_hat"
    J = "J"
    Both = "pi_hat+J"


def _quad(f, a: float, b: float, what: str) -> float:
    result = integrate.quad(
        f, a, b,
        epsabs=0.0, epsrel=constants.QUAD_REL_TOL, limit=constants.QUAD_LIMIT, full_output=1,
    )
    if len(result) > 3:
        warnings.warn(f"{what}: {result[3]} (value {result[0]:.6g}, abs error {result[1]:.3g})", QuadratureWarning, stacklevel=3)
    return result[0]


@dataclass(frozen=True)
class RwApprox:
    qm: QueueModel
    eps: float = constants.EPS
    ts: ThresholdSet = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not 0 < self.eps < 1:
            raise DomainError(f"eps must lie in (0,1), got {self.eps}")
        object.__setattr__(self, "ts", ThresholdSet(self.qm))

    def y(self, x: float, n: int) -> float:
        return (x - n * self.qm.mu) / self.qm.sigma

    def _q_kappa(self, t):
        return np.polynomial.polynomial.polyval(t, q_kappa_coefficients(self.qm))

    def log_v_bar(self, t):
        """log V̄(t) = log F̄(sigma t + mu), the tail of the standardized summand"""
        return self.qm.dist.log_tail(self.qm.sigma * np.asarray(t, dtype=float) + self.qm.mu)

    @staticmethod
    def _check(x: float, n: int) -> tuple[float, int]:
        if int(n) != n or n < 1:
            raise DomainError(f"n must be a positive integer, got {n!r}")
        return float(x), int(n)

    # pieces of B_kappa

    def hat_pi(self, x: float, n: int) -> float:
        x, n = self._check(x, n)
        if not x > 0:
            raise DomainError(f"x must be > 0, got {x}")
        y = self.y(x, n)
        if self.qm.kappa == 2 or n > self.ts.N(x):
            return float(log_ndtr(-y / math.sqrt(x / self.qm.mu)))
        if not y > 0:
            raise DomainError(f"y must be > 0 for n <= N(x), got y={y} (x={x}, n={n})")
        return 0.5 * math.log(x) - math.log(y) - LOG_SQRT_2PI - 0.5 * math.log(self.qm.mu) + n * float(self._q_kappa(y / n))

    def _h(self, n: int, t):
        return t / 2.0 + n * np.maximum(self.ts.q_tilde(t), 1.0) / t

    @lru_cache(maxsize=65536)
    def c_n(self, n: int) -> float:
        """
        C_n = min_{t >= sqrt(n)} t/2 + n (Q̃(t) ∨ 1)/t

        Searched on [sqrt(n), 4 b^-1(4n)]: h(t) >= t/2 and h(b^-1(2n)) = b^-1(2n), so the
        minimum lies well inside. A log-spaced pre-scan locates it; bounded Brent refines it.
        """
        n = int(n)
        if n < 1:
            raise DomainError(f"n must be a positive integer, got {n!r}")
        lo = math.sqrt(n)
        try:
            hi = 4.0 * self.ts.b_inv(4.0 * n)
        except RightInverseError as e:
            raise BracketingError(f"C_n bracket for n={n}: {e}") from e
        if not hi > lo:
            raise BracketingError(f"C_n bracket for n={n} is empty: [{lo}, {hi}]")
        grid = np.geomspace(lo, hi, constants.CN_SCAN_POINTS)
        values = self._h(n, grid)
        i = int(np.argmin(values))
        a, b = grid[max(i - 1, 0)], grid[min(i + 1, grid.size - 1)]
        res = optimize.minimize_scalar(
            lambda t: float(self._h(n, t)), bounds=(a, b), method="bounded",
            options={"xatol": constants.CN_TOL * grid[i]},
        )
        return float(min(res.fun, values[i]))

    def c_n_bracket(self, n: int) -> tuple[float, float]:
        """
        [b^-1(2(1-s)n), b^-1(2n)] containing C_n

        s = max(r, sup of the local index of Q̃ ∨ 1 on [sqrt(n), b^-1(2n)]) + 0.1.
        h decreases up to the lower end and h(t) >= t from there to b^-1(2n).
        The lower end is 0 once s >= 1.
        """
        n = int(n)
        if n < 1:
            raise DomainError(f"n must be a positive integer, got {n!r}")
        upper = self.ts.b_inv(2.0 * n)
        grid = np.geomspace(math.sqrt(n), max(upper, math.sqrt(n)), constants.CN_INDEX_POINTS)
        s = max(self.qm.r, float(np.max(self.ts.q_tilde_index(grid)))) + constants.CN_INDEX_MARGIN
        lower = self.ts.b_inv(2.0 * (1.0 - s) * n) if s < 1 else 0.0
        return lower, upper

    def j_integral(self, y: float, n: int) -> float:
        """
        log J(y, n)

        J = sqrt(n) { int_{y-sqrt(n)}^inf V̄(t) phi((y-t)/sqrt(n)) dt
                      + (2 pi)^(-1/2) int_{sqrt(n) ∨ (y - b^-1(2(1+eps)n))}^{y-sqrt(n)} V̄(t) e^{n Q_kappa((y-t)/n)} dt }

        The first integral runs over s = (y - t)/sqrt(n) in (-inf, 1]; both integrands are
        scaled by their largest value before quadrature.
        """
        y, n = float(y), int(n)
        root_n = math.sqrt(n)
        parts = []

        scale = float(self.log_v_bar(y - root_n))
        first = _quad(
            lambda s: math.exp(float(self.log_v_bar(y - root_n * s)) - scale - 0.5 * s * s - LOG_SQRT_2PI),
            -np.inf, 1.0, f"J first integral (y={y:g}, n={n})",
        )
        if first > 0:
            parts.append(math.log(n) + scale + math.log(first))

        upper = y - root_n
        lower = max(root_n, y - self.ts.b_inv(2.0 * (1.0 + self.eps) * n))
        if upper > lower:
            def log_integrand(t):
                return self.log_v_bar(t) + n * self._q_kappa((y - t) / n)

            peak = float(np.max(log_integrand(np.linspace(lower, upper, SCALE_POINTS))))
            second = _quad(
                lambda t: math.exp(float(log_integrand(t)) - peak),
                lower, upper, f"J second integral (y={y:g}, n={n})",
            )
            if second > 0:
                parts.append(0.5 * math.log(n) - LOG_SQRT_2PI + peak + math.log(second))

        if not parts:
            return -math.inf
        return float(logsumexp(parts))

    def b_kappa_detail(self, x: float, n: int) -> tuple[str, float]:
        x, n = self._check(x, n)
        y = self.y(x, n)
        c = self.c_n(n)
        use_pi = y <= (1.0 + self.eps) * c
        use_j = y >= (1.0 - self.eps) * c
        parts = []
        if use_pi:
            parts.append(self.hat_pi(x, n))
        if use_j:
            parts.append(self.j_integral(y, n))
        branch = Branch.Both if use_pi and use_j else (Branch.PiHat if use_pi else Branch.J)
        return branch, float(logsumexp(parts))

    def b_kappa(self, x: float, n: int) -> float:
        return self.b_kappa_detail(x, n)[1]

    def rw_tail_detail(self, x: float, n: int) -> tuple[str, float]:
        """(branch, log P(S_n > x)); n <= K_r(x) uses the big-jump form n F̄(x - n mu)"""
        x, n = self._check(x, n)
        if not x > 0:
            raise DomainError(f"x must be > 0, got {x}")
        if n <= self.ts.K_r(x):
            return Branch.HeavyTail, math.log(n) + float(self.qm.dist.log_tail(x - n * self.qm.mu))
        return self.b_kappa_detail(x, n)

    def rw_tail(self, x: float, n: int) -> float:
        return self.rw_tail_detail(x, n)[1]

    # queue

    def s_kappa(self, rho: float, x: float) -> float:
        """
        log S_kappa(rho, x): heavy-tail sum up to K_r(x), then (1-rho) rho^n B_kappa(x, n).

        C_n >= sqrt(2n), so for y < (1-eps) sqrt(2n) only pi_hat contributes and C_n is
        not needed. The n-sum stops once the bound on the remaining weights, taken as
        (1-rho) sum_{m>n} m rho^m, is below SERIES_TOL of the running total and n > N(x).
        """
        lr = log_rho(rho)
        if not x > 0:
            raise DomainError(f"x must be > 0, got {x}")
        x = float(x)
        approximator = Approximator(self.qm)
        total = approximator.heavy_tail_sum(rho, x)
        log1m = math.log1p(-rho)
        log_cut = math.log(constants.SERIES_TOL)
        n_floor = self.ts.N(x) if self.qm.kappa > 2 else 0
        n = self.ts.K_r(x) + 1
        while True:
            y = self.y(x, n)
            if y < (1.0 - self.eps) * math.sqrt(2.0 * n):
                log_b = self.hat_pi(x, n)
            else:
                log_b = self.b_kappa(x, n)
            total = np.logaddexp(total, log1m + n * lr + log_b)
            if n > n_floor:
                remainder = log1m + log_geometric_tail(lr, n, rho)
                if remainder - total < log_cut:
                    break
            n += 1
        logger.debug("S_kappa(rho=%g, x=%g) summed up to n=%d", rho, x, n)
        return float(total)


def hat_pi(qm: QueueModel, x: float, n: int) -> float:
    return RwApprox(qm).hat_pi(x, n)


def c_n(qm: QueueModel, n: int) -> float:
    return RwApprox(qm).c_n(n)


def j_integral(qm: QueueModel, y: float, n: int, eps: float = constants.EPS) -> float:
    return RwApprox(qm, eps).j_integral(y, n)


def b_kappa(qm: QueueModel, x: float, n: int, eps: float = constants.EPS) -> float:
    return RwApprox(qm, eps).b_kappa(x, n)


def rw_tail(qm: QueueModel, x: float, n: int, eps: float = constants.EPS) -> float:
    return RwApprox(qm, eps).rw_tail(x, n)


def s_kappa(qm: QueueModel, rho: float, x: float, eps: float = constants.EPS) -> float:
    return RwApprox(qm, eps).s_kappa(rho, x)


# oracle

def _convolution_tail_at(model: IntegratedTailModel, n: int, x: float, h: float) -> float:
    """
    P(S_n > x) on a grid of step h, accumulated without cancellation:
    P(S_m > x) = P(S_{m-1} > x) + sum_k P(S_{m-1} = s_k) F̄(x - s_k) over s_k <= x,
    with the mass of X on [kh, (k+1)h) placed at (k + 1/2) h.
    """
    cells = int(math.ceil(x / h)) + 1
    edges = np.arange(cells + 1) * h
    mass = -np.diff(model.tail(edges))
    pmf = np.array([1.0])
    tail = 0.0
    for m in range(1, n + 1):
        pos = (np.arange(pmf.size) + 0.5 * (m - 1)) * h
        keep = pos <= x
        tail += float(np.sum(pmf[keep] * model.tail(x - pos[keep])))
        if m < n:
            pmf = np.convolve(pmf[keep], mass)
    return tail


def convolution_tail(model: IntegratedTailModel, n: int, x: float, h: float | None = None, rel_tol: float = 0.01, max_halvings: int = 8) -> float:
    """P(S_n > x) by discretized convolution, halving h until two steps agree to rel_tol"""
    if int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    if not x > 0:
        raise DomainError(f"x must be > 0, got {x}")
    h = float(h) if h is not None else x / 500.0
    previous = _convolution_tail_at(model, int(n), x, h)
    for _ in range(max_halvings):
        h /= 2.0
        current = _convolution_tail_at(model, int(n), x, h)
        if abs(current - previous) <= rel_tol * abs(current):
            return current
        previous = current
    logger.warning("convolution oracle for n=%d x=%g not self-consistent at h=%g", n, x, h)
    return previous
