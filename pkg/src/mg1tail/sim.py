#!/usr/bin/env python3
# Copyright (C) 2026 by the mg1tail developers
# License: GNU General Public License v3.0 (see LICENSE file for details)

"""
Monte Carlo Oracles

Conditional (Asmussen-Kroese) estimator of P(W(rho) > x) from the geometric-sum
representation, and crude indicator estimators for P(S_n > x) and P(W(rho) > x).

Replications are grouped in blocks of SIM_BLOCK_SIZE. Block b draws from a Philox
stream keyed by the seed with counter (0, 0, 0, b), so the block contents and hence
every estimate are bit-identical whatever the number of worker threads.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import constants
from .cramer_poly import log_rho
from .Debug import get_logger
from .dist import sample_x
from .errors import DomainError
from .queue_model import QueueModel

logger = get_logger(__file__)

BlockFn = Callable[[np.random.Generator, int], np.ndarray]


@dataclass(frozen=True)
class SimulationEstimate:
    estimate: float
    std_error: float
    reps: int
    seed: int


def block_generator(seed: int, block: int) -> np.random.Generator:
    """Counter-based stream of one replication block"""
    return np.random.Generator(np.random.Philox(key=int(seed), counter=np.array([0, 0, 0, block], dtype=np.uint64)))


def _check_run(reps: int, seed: int) -> None:
    if int(reps) != reps or reps < constants.SIM_MIN_REPS:
        raise DomainError(f"reps must be an integer >= {constants.SIM_MIN_REPS}, got {reps!r}")
    if int(seed) != seed or not 0 <= seed < 2 ** 64:
        raise DomainError(f"seed must be a 64-bit unsigned integer, got {seed!r}")


def _run_blocks(fn: BlockFn, reps: int, seed: int, threads: int | None) -> SimulationEstimate:
    sizes = [constants.SIM_BLOCK_SIZE] * (reps // constants.SIM_BLOCK_SIZE)
    if reps % constants.SIM_BLOCK_SIZE:
        sizes.append(reps % constants.SIM_BLOCK_SIZE)

    def work(block: int) -> np.ndarray:
        return fn(block_generator(seed, block), sizes[block])

    if threads is not None and threads <= 1:
        chunks = [work(b) for b in range(len(sizes))]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            chunks = list(pool.map(work, range(len(sizes))))
    values = np.concatenate(chunks)
    mean = float(np.mean(values))
    estimate = min(max(mean, 0.0), 1.0)
    if estimate != mean:
        logger.debug("estimate %.17g clamped to %g", mean, estimate)
    std_error = float(np.std(values, ddof=1) / math.sqrt(reps))
    return SimulationEstimate(estimate=estimate, std_error=std_error, reps=int(reps), seed=int(seed))


def _uniform_open(gen: np.random.Generator, size) -> np.ndarray:
    """Uniforms on (0, 1]"""
    return 1.0 - gen.random(size)


def geometric_counts(gen: np.random.Generator, rho: float, size: int) -> np.ndarray:
    """N with P(N = n) = (1 - rho) rho^n, n >= 0, by inversion"""
    return np.floor(np.log(_uniform_open(gen, size)) / log_rho(rho)).astype(np.int64)


def _draw_x(qm: QueueModel, gen: np.random.Generator, size: int) -> np.ndarray:
    if size == 0:
        return np.empty(0)
    u = gen.random(size)
    # u == 0 has probability 2^-53 per draw; map it to the smallest positive double
    u[u == 0.0] = np.nextafter(0.0, 1.0)
    return np.asarray(sample_x(qm.dist, u), dtype=float).reshape(size)


def _segment_sums(counts: np.ndarray, draws: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Per-replication sum and max of consecutive draws; 0 for empty segments"""
    sums = np.zeros(counts.size)
    maxima = np.zeros(counts.size)
    nonempty = counts > 0
    if np.any(nonempty):
        starts = (np.cumsum(counts) - counts)[nonempty]
        sums[nonempty] = np.add.reduceat(draws, starts)
        maxima[nonempty] = np.maximum.reduceat(draws, starts)
    return sums, maxima


def ak_estimate(qm: QueueModel, rho: float, x: float, reps: int = constants.DEFAULT_REPS, seed: int = constants.DEFAULT_SEED, threads: int | None = None) -> SimulationEstimate:
    """
    Asmussen-Kroese estimator of P(W(rho) > x)

    Per replication: N geometric; 0 if N = 0, else N F̄(max(x - S_{N-1}, M_{N-1})) with
    S and M the sum and maximum of N - 1 fresh draws (M = 0 for N = 1).
    """
    log_rho(rho)
    if not x >= 0:
        raise DomainError(f"x must be >= 0, got {x}")
    _check_run(reps, seed)
    x = float(x)

    def block(gen: np.random.Generator, size: int) -> np.ndarray:
        n = geometric_counts(gen, rho, size)
        k = np.maximum(n - 1, 0)
        s, m = _segment_sums(k, _draw_x(qm, gen, int(k.sum())))
        values = n * np.asarray(qm.dist.tail(np.maximum(x - s, m)), dtype=float)
        values[n == 0] = 0.0
        return values

    result = _run_blocks(block, reps, seed, threads)
    logger.info("AK rho=%g x=%g: %.6g +/- %.3g (%d reps)", rho, x, result.estimate, result.std_error, reps)
    return result


def crude_pk_mc(qm: QueueModel, rho: float, x: float, reps: int = constants.DEFAULT_REPS, seed: int = constants.DEFAULT_SEED, threads: int | None = None) -> SimulationEstimate:
    """Indicator estimator 1(S_N > x) of P(W(rho) > x)"""
    log_rho(rho)
    _check_run(reps, seed)
    x = float(x)

    def block(gen: np.random.Generator, size: int) -> np.ndarray:
        n = geometric_counts(gen, rho, size)
        s, _ = _segment_sums(n, _draw_x(qm, gen, int(n.sum())))
        return (s > x).astype(float)

    return _run_blocks(block, reps, seed, threads)


def naive_rw_mc(qm: QueueModel, n: int, x: float, reps: int = constants.DEFAULT_REPS, seed: int = constants.DEFAULT_SEED, threads: int | None = None) -> SimulationEstimate:
    """Indicator estimator 1(X_1 + ... + X_n > x) of P(S_n > x)"""
    if int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    _check_run(reps, seed)
    n = int(n)
    x = float(x)

    def block(gen: np.random.Generator, size: int) -> np.ndarray:
        draws = _draw_x(qm, gen, n * size).reshape(size, n)
        return (draws.sum(axis=1) > x).astype(float)

    return _run_blocks(block, reps, seed, threads)
