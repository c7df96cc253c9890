"""Right inverses, the K_r/M/N thresholds and the region boundary."""

import math

import numpy as np
import pytest

from mg1tail import dist, thresholds
from mg1tail.errors import DomainError, RightInverseError
from mg1tail.thresholds import Region, ThresholdSet, envelope, right_inverse


def square(u):
    return np.asarray(u, dtype=float) ** 2


def wiggly(u):
    u = np.asarray(u, dtype=float)
    return u * (1.5 + np.sin(u))


class TestRightInverse:

    def test_square(self):
        assert right_inverse(square, 4.0) == pytest.approx(2.0, rel=1e-9)

    def test_level_at_origin(self):
        assert right_inverse(square, 0.0) == 0.0

    def test_non_monotone_first_crossing(self):
        t = 20.0
        u = right_inverse(wiggly, t)
        assert wiggly(u) == pytest.approx(t, rel=1e-8)
        below = np.linspace(0.0, u * (1 - 1e-6), 10001)
        assert np.all(wiggly(below) < t)
        assert envelope(wiggly, u) == pytest.approx(t, rel=1e-8)

    @pytest.mark.parametrize("which", ["omega1", "omega2"])
    def test_tiny_levels(self, pareto_qm, which):
        ts = ThresholdSet(pareto_qm)
        f, inv = getattr(ts, which), getattr(ts, f"{which}_inv")
        for t in np.geomspace(1e-8, 1e-1, 15):
            assert float(f(inv(t))) == pytest.approx(t, rel=1e-9)

    def test_laws_on_random_levels(self, pareto_qm, weibull_qm, lognormal_qm):
        rng = np.random.default_rng(20260101)
        sets = [ThresholdSet(qm) for qm in (pareto_qm, weibull_qm, lognormal_qm)]
        for _ in range(1000):
            ts = sets[rng.integers(len(sets))]
            f = getattr(ts, ("_omega1_vec", "_omega2_vec", "_b_vec")[rng.integers(3)])
            u0 = 10.0 ** rng.uniform(-3.0, 6.0)
            t = envelope(f, u0)
            u = right_inverse(f, t)
            assert envelope(f, u) == pytest.approx(t, rel=1e-9)
            assert u <= u0 * (1 + 1e-12)

    def test_bounded_function(self):
        with pytest.raises(RightInverseError):
            right_inverse(lambda u: 1.0 - np.exp(-np.asarray(u, dtype=float)), 2.0)


class TestOmegas:

    def test_omega1_pareto(self, pareto_qm):
        ts = ThresholdSet(pareto_qm)
        assert thresholds.omega1(ts, 1.0) == pytest.approx(1.0 / (3 * math.log(2)))
        # Q(0.1) < 1 is clamped
        assert thresholds.omega1(ts, 0.1) == pytest.approx(0.01)

    def test_omega2_pareto(self, pareto_qm):
        ts = ThresholdSet(pareto_qm)
        assert thresholds.omega2(ts, 10.0) == pytest.approx(100.0 / (3 * math.log(11)) ** 2)

    @pytest.mark.parametrize("x", [10.0, 100.0, 1e4])
    def test_inverses(self, pareto_qm, x):
        ts = ThresholdSet(pareto_qm)
        assert ts.omega1(ts.omega1_inv(x)) == pytest.approx(x, rel=1e-8)
        assert ts.omega2(ts.omega2_inv(x)) == pytest.approx(x, rel=1e-8)

    def test_weibull_omega1_closed_form(self, weibull_qm):
        # Q(t) = sqrt(t) >= 1 for t >= 1, so omega_1(t) = t^1.5
        ts = ThresholdSet(weibull_qm)
        assert ts.omega1_inv(1000.0) == pytest.approx(100.0, rel=1e-9)

    @pytest.mark.parametrize("name", ["pareto_qm", "weibull_qm", "lognormal_qm"])
    def test_inverse_ordering_for_large_x(self, request, name):
        qm = request.getfixturevalue(name)
        ts = ThresholdSet(qm)
        beta = dist.check_assumption(qm.dist, np.geomspace(10.0, 1e3, 50)).min_q_over_log
        for x in (1e5, 1e6, 1e8):
            assert ts.omega2_inv(x) >= ts.omega1_inv(x) * (1 - 1e-12)
            assert ts.omega1_inv(x) >= math.sqrt(beta / 2 * x * math.log(x))

    @pytest.mark.parametrize("name", ["pareto_qm", "weibull_qm", "lognormal_qm"])
    def test_b_inverse(self, request, name):
        ts = ThresholdSet(request.getfixturevalue(name))
        for t in np.geomspace(10.0, 1e8, 15):
            u = ts.b_inv(t)
            assert float(ts.b(u)) == pytest.approx(t, rel=1e-9)
            assert ts.b_inv(float(ts.b(0.5 * u))) <= 0.5 * u * (1 + 1e-12)

    def test_lognormal_uses_surrogate(self, lognormal_qm):
        ts = ThresholdSet(lognormal_qm)
        assert ts.hazard(math.e ** 2) == pytest.approx(2.0)
        assert ts.hazard(0.5) == 0.0


class TestThresholds:

    def test_pareto_ordering(self, pareto_qm):
        ts = ThresholdSet(pareto_qm)
        k, m, n = ts.thresholds(1e4)
        assert 0 < k <= m <= n < 1e4 / pareto_qm.mu

    def test_n_for_small_x(self, pareto_qm):
        ts = ThresholdSet(pareto_qm)
        assert ts.N(0.5) == 0
        assert ts.N(1.0) == 0

    def test_n_closed_form(self, weibull_qm):
        ts = ThresholdSet(weibull_qm)
        assert ts.N(1000.0) == math.floor((1000.0 - math.sqrt(1000.0 * math.log(1000.0))) / 2.0)

    def test_m_weibull(self, weibull_qm):
        ts = ThresholdSet(weibull_qm)
        x = 1001.0
        assert ts.M(x) == math.floor((x - x ** (2.0 / 3.0)) / weibull_qm.mu)

    def test_k_r_zero_for_moderate_x(self, pareto_qm):
        assert ThresholdSet(pareto_qm).K_r(50.0) == 0

    def test_k_r_for_r_above_half(self, weibull_qm):
        ts = ThresholdSet(weibull_qm)
        x = 1e4
        expected = math.floor(min(float(ts.omega2(x)), x / (2 * weibull_qm.mu)))
        assert ts.K_r(x) == expected

    def test_nonpositive_x(self, pareto_qm):
        with pytest.raises(DomainError):
            ThresholdSet(pareto_qm).M(0.0)

    @pytest.mark.parametrize("name", ["pareto_qm", "weibull_qm", "lognormal_qm"])
    def test_ordering_on_grid(self, request, name):
        qm = request.getfixturevalue(name)
        ts = ThresholdSet(qm)
        grid = np.geomspace(10.0, 1e6, 31)
        onset = ts.ordering_onset(grid)
        assert onset is not None and onset <= 1e4
        for x in grid[grid >= onset]:
            k, m, n = ts.thresholds(x)
            assert k <= m <= n < x / qm.mu

    def test_ordering_onset(self, pareto_qm):
        onset = ThresholdSet(pareto_qm).ordering_onset(np.geomspace(1e3, 1e6, 7))
        assert onset is not None and onset <= 1e4


class TestRegion:

    def test_rho_star(self, pareto_qm):
        ts = ThresholdSet(pareto_qm)
        assert ts.rho_star(100.0) == pytest.approx(math.exp(-0.5 * 3 * math.log(101) / 100))

    def test_rho_star_increases(self, pareto_qm):
        ts = ThresholdSet(pareto_qm)
        values = [ts.rho_star(x) for x in np.geomspace(10, 1e6, 12)]
        assert all(0 < v < 1 for v in values)
        assert values == sorted(values)

    def test_sides(self, pareto_qm):
        assert thresholds.region(pareto_qm, 0.5, 100.0) is Region.HeavyTailRegion
        assert thresholds.region(pareto_qm, 0.99, 100.0) is Region.HeavyTrafficSideRegion

    def test_tie_goes_to_traffic_side(self, pareto_qm):
        ts = ThresholdSet(pareto_qm)
        assert ts.region(ts.rho_star(100.0), 100.0) is Region.HeavyTrafficSideRegion

    @pytest.mark.parametrize("rho", [0.0, 1.0, 1.5])
    def test_bad_rho(self, pareto_qm, rho):
        with pytest.raises(DomainError):
            thresholds.region(pareto_qm, rho, 100.0)
