#!/usr/bin/env python3
# Copyright (C) 2026 by the mg1tail developers
# License: GNU General Public License v3.0 (see LICENSE file for details)

"""
Queue Model Parameters

Derives the scalar queue parameters from an integrated-tail model: mean and variance
of X ~ F, the cumulants of the standardized variable Y = (X - mu)/sigma up to order
kappa, and the Cramér-series coefficients lambda_2..lambda_kappa (lambda_2 = -1).

Everything is exact polynomial arithmetic on closed-form moments; nothing is sampled.
"""

from __future__ import annotations

import math
from collections.abc import Iterator, Sequence
from dataclasses import dataclass

from .Debug import get_logger
from .models import IntegratedTailModel

logger = get_logger(__file__)


def moments_to_cumulants(m: Sequence[float]) -> list[float]:
    """Raw moments m_1..m_k -> cumulants gamma_1..gamma_k"""
    m = [1.0] + [float(v) for v in m]
    gamma = [0.0]
    for n in range(1, len(m)):
        acc = m[n]
        for j in range(1, n):
            acc -= math.comb(n - 1, j - 1) * gamma[j] * m[n - j]
        gamma.append(acc)
    return gamma[1:]


def cumulants_to_moments(gamma: Sequence[float]) -> list[float]:
    """Inverse of moments_to_cumulants"""
    gamma = [0.0] + [float(v) for v in gamma]
    m = [1.0]
    for n in range(1, len(gamma)):
        acc = gamma[n]
        for j in range(1, n):
            acc += math.comb(n - 1, j - 1) * gamma[j] * m[n - j]
        m.append(acc)
    return m[1:]


def partitions(total: int) -> Iterator[tuple[int, ...]]:
    """
    Multiplicity vectors (n_1, ..., n_total) with sum_m m*n_m = total.

    partitions(3) yields (3,0,0), (1,1,0), (0,0,1) in some order.
    """
    if total == 0:
        yield ()
        return

    def rec(part: int, remaining: int) -> Iterator[list[int]]:
        if part == 0:
            if remaining == 0:
                yield []
            return
        for count in range(remaining // part, -1, -1):
            for rest in rec(part - 1, remaining - count * part):
                yield rest + [count]

    for vec in rec(total, total):
        yield tuple(vec)


def cramer_coefficients(gamma: Sequence[float]) -> list[float]:
    """
    Cramér-series coefficients lambda_3..lambda_k from cumulants gamma_3..gamma_k of a
    zero-mean unit-variance variable.

    lambda_j = sum over A_{j-2} of (j + s - 2)! (-1)^(s+1) prod_m (gamma_{m+2}/(m+1)!)^{n_m} / n_m!
    with s = n_1 + ... + n_{j-2}.
    """
    g = {i + 3: float(v) for i, v in enumerate(gamma)}
    top = 2 + len(gamma)
    lam = []
    for j in range(3, top + 1):
        acc = 0.0
        for vec in partitions(j - 2):
            s = sum(vec)
            term = math.factorial(j + s - 2) * (-1.0) ** (s + 1)
            for m, n_m in enumerate(vec, start=1):
                if n_m:
                    term *= (g[m + 2] / math.factorial(m + 1)) ** n_m / math.factorial(n_m)
            acc += term
        lam.append(acc)
    return lam


@dataclass(frozen=True)
class QueueModel:
    dist: IntegratedTailModel
    mu: float
    sigma2: float
    gamma: tuple[float, ...]
    lambdas: tuple[float, ...]
    r: float
    kappa: int

    @property
    def sigma(self) -> float:
        return math.sqrt(self.sigma2)

    def __str__(self) -> str:
        return f"QueueModel({self.dist}, mu={self.mu:.6g}, sigma2={self.sigma2:.6g}, kappa={self.kappa})"


def central_moments(raw: Sequence[float], mu: float) -> list[float]:
    """Central moments c_1..c_k of X from raw moments m_1..m_k"""
    m = [1.0] + list(raw)
    out = []
    for k in range(1, len(m)):
        out.append(sum(math.comb(k, i) * m[i] * (-mu) ** (k - i) for i in range(k + 1)))
    out[0] = 0.0
    return out


def build_queue_model(dist: IntegratedTailModel) -> QueueModel:
    r, kappa = dist.hazard_index()
    raw = [dist.raw_moment(k) for k in range(1, max(kappa, 2) + 1)]
    mu = raw[0]
    sigma2 = raw[1] - mu * mu
    sigma = math.sqrt(sigma2)
    central = central_moments(raw, mu)
    standardized = [c / sigma ** k for k, c in enumerate(central, start=1)]
    gamma = moments_to_cumulants(standardized)
    lambdas = [-1.0] + cramer_coefficients(gamma[2:kappa])
    qm = QueueModel(
        dist=dist,
        mu=mu,
        sigma2=sigma2,
        gamma=tuple(gamma[:kappa]),
        lambdas=tuple(lambdas),
        r=r,
        kappa=kappa,
    )
    logger.debug("%s gamma=%s lambda=%s", qm, qm.gamma, qm.lambdas)
    return qm
