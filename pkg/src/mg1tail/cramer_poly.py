#!/usr/bin/env python3
# Copyright (C) 2026 by the mg1tail developers
# License: GNU General Public License v3.0 (see LICENSE file for details)

"""
Cramér Polynomial Layer

Q_kappa(t) = sum_{j=2}^{kappa} lambda_j t^j / j!, the exponent polynomial

    Lambda_rho(t) = (1 - t) log(rho) + sum_{i=2}^{kappa} c_i t^i,
    c_i = sum_{j=2}^{i} lambda_j mu^j / (j! sigma^j) * C(i-2, i-j),

the t^i coefficients (i <= kappa) of (1 - t) Q_kappa(mu t / (sigma (1 - t))). The binomial
comes from expanding (1 - t)^(1-j) = sum_k C(j-2+k, k) t^k.

its derivative split P_kappa(t) = Lambda_rho'(t) + log(rho) = t * sum_j a_j t^j,
the maximizer u(rho) (smallest positive root of Lambda_rho'), the coefficients b_n
of u(rho) = sum_n b_n (log rho)^n / n!, and Lambda_rho(u(rho)).

The coefficients c_i and a_j do not depend on rho; rho only enters the linear term.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import Polynomial
from numpy.typing import ArrayLike

from .Debug import get_logger
from .errors import DomainError, NoPositiveRootError
from .queue_model import QueueModel, partitions

logger = get_logger(__file__)

MAX_SERIES_ORDER = 6
NEWTON_STEPS = 3


def log_rho(rho: float) -> float:
    """log(rho) via log1p(rho - 1); rho - 1 is exact for rho in [1/2, 1)"""
    rho = float(rho)
    if not 0 < rho < 1:
        raise DomainError(f"rho must lie in (0,1), got {rho}")
    return math.log1p(rho - 1.0) if rho >= 0.5 else math.log(rho)


def q_kappa_coefficients(qm: QueueModel) -> np.ndarray:
    """Power-basis coefficients of Q_kappa (index = power)"""
    coef = np.zeros(qm.kappa + 1)
    for j, lam in enumerate(qm.lambdas, start=2):
        coef[j] = lam / math.factorial(j)
    return coef


def q_kappa(qm: QueueModel, t: ArrayLike):
    return Polynomial(q_kappa_coefficients(qm))(np.asarray(t, dtype=float))[()]


def lambda_coefficients(qm: QueueModel) -> np.ndarray:
    """c_0..c_kappa of the rho-free part of Lambda_rho (c_0 = c_1 = 0)"""
    ratio = qm.mu / qm.sigma
    c = np.zeros(qm.kappa + 1)
    for i in range(2, qm.kappa + 1):
        c[i] = sum(
            qm.lambdas[j - 2] * ratio ** j / math.factorial(j) * math.comb(i - 2, i - j)
            for j in range(2, i + 1)
        )
    return c


@dataclass(frozen=True)
class LambdaPoly:
    qm: QueueModel
    coeff: tuple[float, ...] = field(init=False)
    a: tuple[float, ...] = field(init=False)

    def __post_init__(self):
        c = lambda_coefficients(self.qm)
        object.__setattr__(self, "coeff", tuple(c[2:]))
        object.__setattr__(self, "a", tuple((j + 2) * c[j + 2] for j in range(self.qm.kappa - 1)))

    @property
    def kappa(self) -> int:
        return self.qm.kappa

    def _poly(self) -> Polynomial:
        return Polynomial([0.0, 0.0, *self.coeff])

    def p_kappa(self, t: ArrayLike):
        """P_kappa(t) = t * sum_j a_j t^j"""
        return Polynomial([0.0, *self.a])(np.asarray(t, dtype=float))[()]

    def lambda_rho(self, rho: float, t: ArrayLike):
        lr = log_rho(rho)
        t = np.asarray(t, dtype=float)
        return ((1.0 - t) * lr + self._poly()(t))[()]

    def derivative(self, rho: float, t: ArrayLike):
        return (self._poly().deriv()(np.asarray(t, dtype=float)) - log_rho(rho))[()]

    def second_derivative(self, t: ArrayLike):
        return self._poly().deriv(2)(np.asarray(t, dtype=float))[()]

    def u_star(self, rho: float) -> float:
        """
        Smallest positive root of Lambda_rho'(t) = 0.

        kappa = 2 has the closed form -(sigma²/mu²) log rho. Otherwise all roots of the
        degree kappa-1 polynomial are enumerated (companion matrix), the smallest positive
        real one is picked and polished with a few Newton steps.
        """
        lr = log_rho(rho)
        qm = self.qm
        if qm.kappa == 2:
            return -(qm.sigma2 / qm.mu ** 2) * lr
        dpoly = self._poly().deriv() - lr
        roots = dpoly.roots()
        real = roots[np.abs(roots.imag) <= 1e-9 * np.maximum(1.0, np.abs(roots))].real
        positive = np.sort(real[real > 0])
        if positive.size == 0:
            raise NoPositiveRootError(rho, roots)
        u = float(positive[0])
        ddpoly = dpoly.deriv()
        for _ in range(NEWTON_STEPS):
            slope = ddpoly(u)
            if slope == 0:
                break
            u -= dpoly(u) / slope
        if not ddpoly(u) < 0:
            logger.warning("Lambda_rho not concave at u=%g (rho=%g)", u, rho)
            raise NoPositiveRootError(rho, roots)
        return u

    def u_series_coeffs(self, n_max: int) -> list[float]:
        """
        b_1..b_{n_max} of u(rho) = sum_n b_n (log rho)^n / n!

        b_n = sum over A_{n-1} of (n + s - 1)! (-1)^s a_0^(-n-s) prod_j a_j^(m_j) / m_j!,
        which equals the (-1)^n (sigma²/mu²)^(n+s) form since a_0 = -mu²/sigma².
        """
        if not 1 <= n_max <= MAX_SERIES_ORDER:
            raise DomainError(f"n_max must lie in [1, {MAX_SERIES_ORDER}], got {n_max}")
        a = list(self.a)
        a0 = a[0]
        out = []
        for n in range(1, n_max + 1):
            acc = 0.0
            for vec in partitions(n - 1):
                s = sum(vec)
                term = math.factorial(n + s - 1) * (-1.0) ** s * a0 ** (-n - s)
                for j, m_j in enumerate(vec, start=1):
                    if m_j:
                        a_j = a[j] if j <= self.kappa - 2 else 0.0
                        term *= a_j ** m_j / math.factorial(m_j)
                acc += term
            out.append(acc)
        return out

    def u_series(self, rho: float, n_max: int = 3) -> float:
        lr = log_rho(rho)
        return sum(b * lr ** n / math.factorial(n) for n, b in enumerate(self.u_series_coeffs(n_max), start=1))

    def lambda_at_u(self, rho: float) -> float:
        return float(self.lambda_rho(rho, self.u_star(rho)))

    def lambda_at_u_leading(self, rho: float) -> float:
        """log rho + sigma²/(2 mu²) (log rho)², exact for kappa = 2"""
        lr = log_rho(rho)
        return lr + self.qm.sigma2 / (2.0 * self.qm.mu ** 2) * lr * lr


def lambda_rho(poly: LambdaPoly, rho: float, t: ArrayLike):
    return poly.lambda_rho(rho, t)


def u_star(poly: LambdaPoly, rho: float) -> float:
    return poly.u_star(rho)


def u_series_coeffs(poly: LambdaPoly, n_max: int) -> list[float]:
    return poly.u_series_coeffs(n_max)


def lambda_at_u(poly: LambdaPoly, rho: float) -> float:
    return poly.lambda_at_u(rho)
