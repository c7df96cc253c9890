#!/usr/bin/env python3
# Copyright (C) 2026 by the mg1tail developers
# License: GNU General Public License v3.0 (see LICENSE file for details)

"""
Waiting-Time Tail Approximations

Z_kappa(rho, x) and A_kappa(rho, x) for P(W(rho) > x), together with the heavy-tail
asymptotic rho/(1-rho) F̄(x) and the heavy-traffic approximation exp(-x(1-rho)/mu).

All values are natural logs. Sums are accumulated in the log domain so that no term
overflows or underflows; an empty sum is -inf.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.special import log_ndtr, logsumexp

from . import constants
from .cramer_poly import LambdaPoly, log_rho
from .Debug import get_logger
from .errors import DomainError, MG1Error, NoPositiveRootError
from .queue_model import QueueModel
from .thresholds import Region, ThresholdSet

logger = get_logger(__file__)

LOG_2PI = math.log(2.0 * math.pi)
CHUNK = 1024
UNIFORMITY_RHOS = tuple(float(r) for r in np.linspace(0.05, 0.99, 12))


class Regime(enum.Enum):
    HeavyTail = "heavy_tail"
    HeavyTraffic = "heavy_traffic"
    Intermediate = "intermediate"


@dataclass
class Terms:
    log_heavy_tail_sum: float = -math.inf
    log_middle_sum: float | None = None
    log_gauss: float = -math.inf
    log_lambda_term: float = -math.inf
    gauss_T: float = math.nan
    w: float = math.nan
    u_fallback: bool = False
    heavy_tail_exceeds_one: bool = False

    @property
    def flags(self) -> list[str]:
        out = []
        if self.u_fallback:
            out.append("u_fallback")
        if self.heavy_tail_exceeds_one:
            out.append("heavy_tail_exceeds_one")
        return out


@dataclass
class ApproximationReport:
    rho: float
    x: float
    log_Z: float = math.nan
    log_A: float = math.nan
    log_heavy_tail: float = math.nan
    log_heavy_traffic: float = math.nan
    region: Region | None = None
    regime: Regime | None = None
    transition: bool = False
    terms: Terms = field(default_factory=Terms)
    error: str | None = None


@dataclass(frozen=True)
class UniformityReport:
    x: tuple[float, ...]
    gap: tuple[float, ...]
    worst_rho: tuple[float, ...]

    @property
    def failures(self) -> list[tuple[float, float, float]]:
        """(x, D(x), worst rho) wherever D did not drop below its value at the previous x"""
        return [
            (self.x[i], self.gap[i], self.worst_rho[i])
            for i in range(1, len(self.gap))
            if not self.gap[i] < self.gap[i - 1]
        ]

    @property
    def decreasing(self) -> bool:
        return not self.failures


def _check(rho: float, x: float) -> tuple[float, float]:
    rho = float(rho)
    x = float(x)
    if not 0 < rho < 1:
        raise DomainError(f"rho must lie in (0,1), got {rho}")
    if not x > 0:
        raise DomainError(f"x must be > 0, got {x}")
    return rho, x


def log_geometric_tail(lr: float, m: int, rho: float) -> float:
    """log of sum_{n>m} n rho^n = rho^(m+1) ((m+1) - m rho) / (1-rho)²"""
    return (m + 1) * lr + math.log((m + 1) - m * rho) - 2.0 * math.log1p(-rho)


class Approximator:
    """Evaluates every approximation of one queue model"""

    def __init__(self, qm: QueueModel, simplified_heavy_tail: bool = False):
        self.qm = qm
        self.ts = ThresholdSet(qm)
        self.poly = LambdaPoly(qm)
        self.simplified_heavy_tail = simplified_heavy_tail

    # building blocks

    def gauss_geom_expectation(self, rho: float, x: float, T: float) -> float:
        """
        log E[rho^a(x,Z) 1(sigma Z <= sqrt(mu) T)], a(x,z) = (x - sigma z sqrt(x/mu))/mu, Z ~ N(0,1)

        Closed form: (x/mu) log rho + sigma² (log rho)² x/(2 mu³)
        + log Phi(sqrt(mu) T/sigma + sigma sqrt(x) log rho / mu^(3/2)).
        """
        rho, x = _check(rho, x)
        lr = log_rho(rho)
        mu, sigma = self.qm.mu, self.qm.sigma
        if T == -math.inf:
            return -math.inf
        arg = math.sqrt(mu) * T / sigma + sigma * math.sqrt(x) * lr / mu ** 1.5
        return x / mu * lr + sigma * sigma * lr * lr * x / (2.0 * mu ** 3) + float(log_ndtr(arg))

    def heavy_tail_sum(self, rho: float, x: float) -> float:
        """
        log sum_{n=1}^{K_r(x)} (1-rho) rho^n n F̄(x - n mu)

        Evaluated chunkwise; stops once the geometric bound on the remaining terms drops
        below SERIES_TOL of the partial sum. The simplified mode replaces F̄(x - n mu) by F̄(x).
        """
        rho, x = _check(rho, x)
        k_r = self.ts.K_r(x)
        if k_r == 0:
            return -math.inf
        lr = log_rho(rho)
        log1m = math.log1p(-rho)
        mu = self.qm.mu
        dist = self.qm.dist
        log_tail_x = float(dist.log_tail(x))
        log_bound_tail = log_tail_x if self.simplified_heavy_tail else float(dist.log_tail(x - k_r * mu))
        log_cut = math.log(constants.SERIES_TOL)
        total = -math.inf
        start = 1
        while start <= k_r:
            n = np.arange(start, min(start + CHUNK, k_r + 1), dtype=float)
            if self.simplified_heavy_tail:
                log_f = log_tail_x
            else:
                log_f = dist.log_tail(x - n * mu)
            total = np.logaddexp(total, logsumexp(log1m + n * lr + np.log(n) + log_f))
            last = int(n[-1])
            if last < k_r:
                remainder = log1m + log_bound_tail + log_geometric_tail(lr, last, rho)
                if remainder - total < log_cut:
                    logger.debug("heavy-tail sum truncated at n=%d of K_r=%d", last, k_r)
                    break
            start = last + 1
        return float(total)

    def middle_sum(self, rho: float, x: float) -> float:
        """
        log of (sigma sqrt(x) / sqrt(2 pi mu)) sum_{n=M+1}^{N} (1-rho) rho^n e^{n Q_kappa((x-n mu)/(sigma n))} / (x - n mu)
        """
        rho, x = _check(rho, x)
        m, n_top = self.ts.M(x), self.ts.N(x)
        if n_top < m + 1:
            return -math.inf
        lr = log_rho(rho)
        mu, sigma = self.qm.mu, self.qm.sigma
        n = np.arange(m + 1, n_top + 1, dtype=float)
        gap = x - n * mu
        q_coef = np.array([lam / math.factorial(j) for j, lam in enumerate(self.qm.lambdas, start=2)])
        z = gap / (sigma * n)
        powers = np.stack([z ** j for j in range(2, self.qm.kappa + 1)])
        exponent = n * (q_coef @ powers)
        log_terms = math.log1p(-rho) + n * lr + exponent - np.log(gap)
        prefix = math.log(sigma) + 0.5 * math.log(x) - 0.5 * (LOG_2PI + math.log(mu))
        return float(prefix + logsumexp(log_terms))

    def gauss_T(self, x: float) -> float:
        if self.qm.kappa == 2:
            return self.ts.omega1_inv(x) / math.sqrt(x)
        return math.sqrt(max(math.log(x), 0.0))

    # approximations

    def heavy_tail(self, rho: float, x: float) -> float:
        rho, x = _check(rho, x)
        return log_rho(rho) - math.log1p(-rho) + float(self.qm.dist.log_tail(x))

    def heavy_traffic(self, rho: float, x: float) -> float:
        rho = float(rho)
        if not 0 < rho < 1:
            raise DomainError(f"rho must lie in (0,1), got {rho}")
        return -float(x) * (1.0 - rho) / self.qm.mu

    def z_kappa(self, rho: float, x: float) -> tuple[float, Terms]:
        rho, x = _check(rho, x)
        terms = Terms()
        terms.log_heavy_tail_sum = self.heavy_tail_sum(rho, x)
        terms.gauss_T = self.gauss_T(x)
        terms.log_gauss = self.gauss_geom_expectation(rho, x, terms.gauss_T)
        parts = [terms.log_heavy_tail_sum, terms.log_gauss]
        if self.qm.kappa > 2:
            terms.log_middle_sum = self.middle_sum(rho, x)
            parts.append(terms.log_middle_sum)
        return float(logsumexp(parts)), terms

    def w(self, rho: float, x: float) -> tuple[float, bool]:
        """w(rho, x) = min{u(rho), omega_1^-1(x)/x} and whether u(rho) was unavailable"""
        cap = self.ts.omega1_inv(x) / x
        try:
            return min(self.poly.u_star(rho), cap), False
        except NoPositiveRootError:
            logger.warning("u(rho) unavailable for rho=%g, using omega_1^-1(x)/x", rho)
            return cap, True

    def a_kappa(self, rho: float, x: float) -> tuple[float, Terms]:
        rho, x = _check(rho, x)
        terms = Terms()
        terms.log_heavy_tail_sum = self.heavy_tail_sum(rho, x)
        terms.w, terms.u_fallback = self.w(rho, x)
        terms.log_lambda_term = x / self.qm.mu * float(self.poly.lambda_rho(rho, terms.w))
        return float(np.logaddexp(terms.log_heavy_tail_sum, terms.log_lambda_term)), terms

    def regime(self, rho: float, x: float, tol: float = constants.REGIME_TOL) -> Regime:
        """Heavy tail, heavy traffic, or the intermediate band that only exists for kappa > 2"""
        if self.ts.region(rho, x) is Region.HeavyTailRegion:
            return Regime.HeavyTail
        try:
            exponent = x / self.qm.mu * self.poly.lambda_at_u(rho)
        except NoPositiveRootError:
            return Regime.Intermediate
        if abs(exponent - self.heavy_traffic(rho, x)) <= tol:
            return Regime.HeavyTraffic
        return Regime.Intermediate

    def in_transition(self, rho: float, x: float, band: float = constants.TRANSITION_BAND) -> bool:
        """rho within the band around rho*(x) where the regimes hand over"""
        log_star = -self.qm.mu * float(self.ts.hazard(x)) / x
        return abs(log_rho(rho) - log_star) <= band * abs(log_star)

    def evaluate(self, rho: float, x: float) -> ApproximationReport:
        report = ApproximationReport(rho=float(rho), x=float(x))
        try:
            report.log_Z, z_terms = self.z_kappa(rho, x)
            report.log_A, a_terms = self.a_kappa(rho, x)
            report.log_heavy_tail = self.heavy_tail(rho, x)
            report.log_heavy_traffic = self.heavy_traffic(rho, x)
            report.region = self.ts.region(rho, x)
            report.regime = self.regime(rho, x)
            report.transition = self.in_transition(rho, x)
            z_terms.log_lambda_term = a_terms.log_lambda_term
            z_terms.w = a_terms.w
            z_terms.u_fallback = a_terms.u_fallback
            z_terms.heavy_tail_exceeds_one = report.log_heavy_tail > 0
            report.terms = z_terms
        except MG1Error as e:
            logger.error("rho=%g x=%g: %s", rho, x, e)
            report.error = str(e)
        except Exception as e:
            logger.error("rho=%g x=%g: unexpected %s: %s", rho, x, type(e).__name__, e)
            report.error = f"{type(e).__name__}: {e}"
        return report

    def evaluate_grid(self, rho_list: Sequence[float], x_list: Sequence[float], threads: int | None = None) -> list[ApproximationReport]:
        """Reports for every (rho, x) pair, rho-major, in input order"""
        pairs = [(float(r), float(x)) for r in rho_list for x in x_list]
        if threads is not None and threads <= 1:
            return [self.evaluate(r, x) for r, x in pairs]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            reports = list(pool.map(lambda p: self.evaluate(*p), pairs))
        failed = sum(r.error is not None for r in reports)
        if failed:
            logger.warning("%d of %d grid points failed", failed, len(reports))
        return reports

    def _gaps(self, x: float, rho_grid: Sequence[float]) -> list[float]:
        return [abs(math.expm1(self.a_kappa(r, x)[0] - self.z_kappa(r, x)[0])) for r in rho_grid]

    def uniformity_gap(self, x: float, rho_grid: Sequence[float]) -> float:
        """max over rho of |A/Z - 1| at fixed x"""
        return max(self._gaps(x, rho_grid))

    def uniformity_report(self, x_grid: Sequence[float], rho_grid: Sequence[float] = UNIFORMITY_RHOS) -> UniformityReport:
        """
        D(x) = max over rho of |A/Z - 1| along an increasing x grid, with the maximizing rho.

        D should shrink as x grows; points where it does not are logged with their model and rho.
        """
        gaps, worst = [], []
        for x in x_grid:
            values = self._gaps(x, rho_grid)
            i = int(np.argmax(values))
            gaps.append(values[i])
            worst.append(float(rho_grid[i]))
        report = UniformityReport(x=tuple(float(x) for x in x_grid), gap=tuple(gaps), worst_rho=tuple(worst))
        for x, gap, rho in report.failures:
            logger.warning("%s: max |A/Z - 1| = %.4g at x=%g (rho=%g) is not below the previous x", self.qm.dist, gap, x, rho)
        return report


def gauss_geom_expectation(qm: QueueModel, rho: float, x: float, T: float) -> float:
    return Approximator(qm).gauss_geom_expectation(rho, x, T)


def z_kappa(qm: QueueModel, rho: float, x: float) -> tuple[float, Terms]:
    return Approximator(qm).z_kappa(rho, x)


def a_kappa(qm: QueueModel, rho: float, x: float) -> tuple[float, Terms]:
    return Approximator(qm).a_kappa(rho, x)


def heavy_tail(qm: QueueModel, rho: float, x: float) -> float:
    return Approximator(qm).heavy_tail(rho, x)


def heavy_traffic(qm: QueueModel, rho: float, x: float) -> float:
    return Approximator(qm).heavy_traffic(rho, x)


def evaluate_grid(qm: QueueModel, rho_list: Sequence[float], x_list: Sequence[float], threads: int | None = None) -> list[ApproximationReport]:
    return Approximator(qm).evaluate_grid(rho_list, x_list, threads)


def uniformity_report(qm: QueueModel, x_grid: Sequence[float], rho_grid: Sequence[float] = UNIFORMITY_RHOS) -> UniformityReport:
    return Approximator(qm).uniformity_report(x_grid, rho_grid)
