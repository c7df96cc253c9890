"""Queue parameters, cumulant recursions and Cramér coefficients."""

import math

import numpy as np
import pytest

from mg1tail.queue_model import (
    build_queue_model,
    cramer_coefficients,
    cumulants_to_moments,
    moments_to_cumulants,
    partitions,
)

REL = 1e-10


def closed_form_lambdas(g3, g4, g5, g6):
    return [
        g3,
        g4 - 3 * g3 ** 2,
        g5 - 10 * g4 * g3 + 15 * g3 ** 3,
        g6 - 15 * g5 * g3 - 10 * g4 ** 2 + 105 * g4 * g3 ** 2 - 105 * g3 ** 4,
    ]


class TestCumulants:

    def test_standard_normal(self):
        assert moments_to_cumulants([0.0, 1.0, 0.0, 3.0, 0.0, 15.0]) == pytest.approx([0, 1, 0, 0, 0, 0], abs=1e-12)

    def test_exponential(self):
        # raw moments k!, cumulants (k-1)!
        moments = [math.factorial(k) for k in range(1, 7)]
        assert moments_to_cumulants(moments) == pytest.approx([1, 1, 2, 6, 24, 120], rel=1e-12)

    def test_inverse(self):
        rng = np.random.default_rng(3)
        gamma = list(rng.normal(size=6))
        assert moments_to_cumulants(cumulants_to_moments(gamma)) == pytest.approx(gamma, rel=1e-9, abs=1e-9)


class TestPartitions:

    def test_three(self):
        assert set(partitions(3)) == {(3, 0, 0), (1, 1, 0), (0, 0, 1)}

    def test_counts(self):
        assert [len(list(partitions(k))) for k in range(1, 8)] == [1, 2, 3, 5, 7, 11, 15]

    def test_zero(self):
        assert list(partitions(0)) == [()]

    def test_weights(self):
        for vec in partitions(6):
            assert sum(m * n for m, n in enumerate(vec, start=1)) == 6


class TestCramerCoefficients:

    def test_closed_forms(self):
        rng = np.random.default_rng(11)
        for _ in range(100):
            g = rng.uniform(-3, 3, size=4)
            got = cramer_coefficients(list(g))
            assert got == pytest.approx(closed_form_lambdas(*g), rel=REL, abs=1e-12)

    def test_empty(self):
        assert cramer_coefficients([]) == []

    def test_gaussian_cumulants_give_zero(self):
        assert cramer_coefficients([0.0, 0.0, 0.0]) == [0.0, 0.0, 0.0]


class TestQueueModel:

    def test_pareto(self, pareto_qm):
        assert pareto_qm.mu == pytest.approx(0.5)
        assert pareto_qm.sigma2 == pytest.approx(0.75)
        assert pareto_qm.kappa == 2
        assert pareto_qm.lambdas == (-1.0,)
        assert pareto_qm.gamma == pytest.approx((0.0, 1.0), abs=1e-12)

    def test_weibull(self, weibull_qm):
        # moments 2, 24, 720
        assert weibull_qm.mu == pytest.approx(2.0)
        assert weibull_qm.sigma2 == pytest.approx(20.0)
        assert weibull_qm.kappa == 3
        g3 = 592.0 / 20.0 ** 1.5
        assert weibull_qm.gamma[2] == pytest.approx(g3, rel=1e-10)
        assert weibull_qm.lambdas == pytest.approx((-1.0, g3), rel=1e-10)

    def test_lognormal(self, lognormal_qm):
        assert lognormal_qm.mu == pytest.approx(math.exp(0.5))
        assert lognormal_qm.sigma2 == pytest.approx(math.exp(2.0) - math.exp(1.0))

    def test_hashable(self, pareto):
        assert hash(build_queue_model(pareto)) == hash(build_queue_model(pareto))
