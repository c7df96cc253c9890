"""Integrated-tail families, the functional front end and model configuration."""

import json
import math

import numpy as np
import pytest
from scipy import integrate

from mg1tail import dist
from mg1tail.errors import ConfigError, DomainError, UnsupportedOrderError
from mg1tail.models import FAMILIES, LognormalTail, ModelKind, ParetoTail, WeibullTail, load_family_config

TOL = 1e-12


class TestTailValues:

    def test_pareto(self, pareto):
        assert dist.tail(pareto, 1.0) == pytest.approx(0.125, rel=TOL)
        assert dist.cumulative_hazard(pareto, 1.0) == pytest.approx(3 * math.log(2), rel=TOL)
        assert dist.hazard_rate(pareto, 1.0) == pytest.approx(1.5, rel=TOL)

    def test_weibull(self, weibull):
        assert dist.tail(weibull, 4.0) == pytest.approx(math.exp(-2), rel=TOL)
        assert dist.hazard_rate(weibull, 4.0) == pytest.approx(0.25, rel=TOL)

    def test_lognormal(self, lognormal):
        assert dist.tail(lognormal, 1.0) == pytest.approx(0.5, rel=TOL)
        assert dist.cumulative_hazard(lognormal, 1.0) == pytest.approx(math.log(2), rel=TOL)
        assert dist.cumulative_hazard_approx(lognormal, math.e) == pytest.approx(0.5, rel=TOL)

    @pytest.mark.parametrize("model", [ParetoTail(3.0), WeibullTail(0.5), LognormalTail()])
    def test_tail_is_one_at_and_below_zero(self, model):
        assert np.all(dist.tail(model, np.array([-2.0, 0.0])) == 1.0)

    def test_log_tail_far_out_is_finite(self, lognormal):
        value = dist.log_tail(lognormal, 1e30)
        assert np.isfinite(value) and value < -1000

    def test_vectorized(self, pareto):
        t = np.array([0.5, 1.0, 2.0])
        np.testing.assert_allclose(dist.tail(pareto, t), (1 + t) ** -3.0, rtol=TOL)

    @pytest.mark.parametrize("t", [0.0, -1.0])
    def test_hazard_needs_positive_t(self, pareto, t):
        with pytest.raises(DomainError):
            dist.hazard_rate(pareto, t)
        with pytest.raises(DomainError):
            dist.cumulative_hazard(pareto, t)

    def test_hazard_is_derivative_of_cumulative_hazard(self, lognormal):
        t, dt = 3.0, 1e-6
        slope = (dist.cumulative_hazard(lognormal, t + dt) - dist.cumulative_hazard(lognormal, t - dt)) / (2 * dt)
        assert dist.hazard_rate(lognormal, t) == pytest.approx(slope, rel=1e-6)


FAMILY_MODELS = [ParetoTail(3.0), WeibullTail(0.5), LognormalTail()]


class TestHazardGrid:

    @pytest.mark.parametrize("model", FAMILY_MODELS, ids=str)
    def test_tail_is_exp_of_minus_hazard(self, model):
        t = np.geomspace(1e-3, 1e6, 60)
        np.testing.assert_allclose(np.exp(-dist.cumulative_hazard(model, t)), dist.tail(model, t), rtol=1e-10)

    @pytest.mark.parametrize("model", FAMILY_MODELS, ids=str)
    def test_hazard_rate_is_slope(self, model):
        t = np.geomspace(0.1, 1e4, 25)
        dt = 1e-5 * t
        slope = (dist.cumulative_hazard(model, t + dt) - dist.cumulative_hazard(model, t - dt)) / (2 * dt)
        np.testing.assert_allclose(dist.hazard_rate(model, t), slope, rtol=1e-6)


class TestMoments:

    def test_pareto(self, pareto):
        assert dist.raw_moment(pareto, 1) == pytest.approx(0.5, rel=TOL)
        assert dist.raw_moment(pareto, 2) == pytest.approx(1.0, rel=TOL)

    def test_pareto_infinite_order(self, pareto):
        with pytest.raises(UnsupportedOrderError):
            dist.raw_moment(pareto, 3)

    def test_weibull(self, weibull):
        assert dist.raw_moment(weibull, 1) == pytest.approx(2.0, rel=1e-12)
        assert dist.raw_moment(weibull, 3) == pytest.approx(720.0, rel=1e-12)

    def test_lognormal(self, lognormal):
        assert dist.raw_moment(lognormal, 2) == pytest.approx(math.exp(2.0), rel=TOL)

    @pytest.mark.parametrize("model, k", [
        (ParetoTail(3.0), 1), (ParetoTail(3.0), 2),
        (WeibullTail(0.5), 1), (WeibullTail(0.5), 2), (WeibullTail(0.5), 3),
        (LognormalTail(), 1), (LognormalTail(), 2), (LognormalTail(), 3),
    ], ids=str)
    def test_against_quadrature(self, model, k):
        # E X^k = k int_0^inf t^(k-1) F̄(t) dt
        value, _ = integrate.quad(lambda t: k * t ** (k - 1) * float(dist.tail(model, t)), 0.0, np.inf, limit=500, epsrel=1e-10)
        assert dist.raw_moment(model, k) == pytest.approx(value, rel=1e-6)

    @pytest.mark.parametrize("k", [0, -1, 1.5])
    def test_bad_order(self, pareto, k):
        with pytest.raises(DomainError):
            dist.raw_moment(pareto, k)


class TestHazardIndex:

    @pytest.mark.parametrize("model, expected", [
        (ParetoTail(3.0), (0.0, 2)),
        (LognormalTail(), (0.0, 2)),
        (WeibullTail(0.3), (0.3, 2)),
        (WeibullTail(0.5), (0.5, 3)),
        (WeibullTail(0.7), (0.7, 4)),
    ])
    def test_index(self, model, expected):
        assert dist.hazard_index(model) == expected

    @pytest.mark.parametrize("alpha", [0.05, 0.3, 0.45, 0.55, 0.65, 0.7, 0.85])
    def test_kappa_is_largest_below_bound(self, alpha):
        r, kappa = dist.hazard_index(WeibullTail(alpha))
        bound = (2 - r) / (1 - r)
        assert kappa <= bound < kappa + 1

    @pytest.mark.parametrize("model", [ParetoTail(3.0), LognormalTail()], ids=str)
    def test_kappa_bound_at_index_zero(self, model):
        r, kappa = dist.hazard_index(model)
        assert kappa <= (2 - r) / (1 - r)

    def test_assumption_level(self):
        assert dist.assumption_level(0.0) == 2.0
        assert dist.assumption_level(0.5) == 8.0

    def test_pareto_passes_diagnostic(self, pareto):
        report = dist.check_assumption(pareto, np.geomspace(1.0, 1e6, 100))
        assert report.passed
        assert report.min_tq > report.a_r

    def test_weibull_fails_on_short_grid(self, weibull):
        # t q(t) = sqrt(t)/2 only exceeds a(r) = 8 far out
        report = dist.check_assumption(weibull, np.geomspace(1.0, 100.0, 50))
        assert not report.hazard_ok

    def test_empty_grid(self, pareto):
        with pytest.raises(DomainError):
            dist.check_assumption(pareto, [])


class TestSampling:

    def test_weibull_inverse(self, weibull):
        assert dist.sample_x(weibull, 1.0 - math.exp(-2.0)) == pytest.approx(4.0, rel=1e-10)

    def test_pareto_inverse(self, pareto):
        assert dist.sample_x(pareto, 7.0 / 8.0) == pytest.approx(1.0, rel=1e-10)

    def test_lognormal_median(self, lognormal):
        assert dist.sample_x(lognormal, 0.5) == pytest.approx(1.0, rel=1e-10)

    @pytest.mark.parametrize("u", [0.0, 1.0, -0.5])
    def test_u_outside_unit_interval(self, pareto, u):
        with pytest.raises(DomainError):
            dist.sample_x(pareto, u)

    @pytest.mark.parametrize("model", [ParetoTail(3.0), WeibullTail(0.5), LognormalTail()])
    def test_empirical_cdf_within_dkw_band(self, model):
        rng = np.random.default_rng(7)
        n = 100000
        xs = np.sort(dist.sample_x(model, rng.uniform(size=n)))
        points = model.inverse_tail(np.linspace(0.05, 0.95, 20))
        empirical_tail = 1.0 - np.searchsorted(xs, points, side="right") / n
        band = math.sqrt(math.log(2 / 0.01) / (2 * n))
        assert np.max(np.abs(empirical_tail - model.tail(points))) <= band


class TestScaling:

    @pytest.mark.parametrize("model", [ParetoTail(3.0, 2.0), WeibullTail(0.5, 0.22361), LognormalTail(0.3, 1.2)])
    def test_unit_mean(self, model):
        assert model.unit_mean().mean() == pytest.approx(1.0, rel=1e-12)

    @pytest.mark.parametrize("model", [ParetoTail(3.0), WeibullTail(0.5), LognormalTail()])
    def test_scaled_tail(self, model):
        t = np.array([0.5, 3.0, 40.0])
        np.testing.assert_allclose(model.scaled(2.5).tail(2.5 * t), model.tail(t), rtol=1e-12)


class TestConfig:

    def test_every_family_has_config(self):
        for family in FAMILIES:
            config = load_family_config(family)
            assert config["family"] == family
            assert set(config["defaults"]) <= set(FAMILIES[family].param_names)

    def test_defaults(self):
        assert dist.model_from_config({"family": "pareto"}) == ParetoTail(3.0, 1.0)

    def test_aliases(self):
        assert dist.model_from_config({"family": "pareto", "alpha": 4, "b": 2}) == ParetoTail(4.0, 2.0)
        assert dist.model_from_config({"family": "lognormal", "alpha_ln": 1, "beta_ln": 0.5}) == LognormalTail(1.0, 0.5)

    @pytest.mark.parametrize("config", [
        {"alpha": 3},
        {"family": "gamma"},
        {"family": "pareto", "shape": 3},
        {"family": "pareto", "alpha": "three"},
        {"family": "pareto", "alpha": 1.5},
        {"family": "weibull", "alpha": 1.0},
        {"family": "lognormal", "beta": 0},
    ])
    def test_rejected(self, config):
        with pytest.raises(ConfigError):
            dist.model_from_config(config)

    def test_inline(self):
        config = dist.parse_inline_model(["lognormal", "alpha=0", "beta=1"])
        assert dist.model_from_config(config) == LognormalTail(0.0, 1.0)

    @pytest.mark.parametrize("tokens", [[], ["pareto", "alpha"], ["pareto", "=3"]])
    def test_inline_rejected(self, tokens):
        with pytest.raises(ConfigError):
            dist.parse_inline_model(tokens)

    def test_load_model(self, tmp_path):
        path = tmp_path / "model.json"
        path.write_text(json.dumps({"model": {"family": "weibull", "alpha": 0.5, "beta": 0.22361}}))
        assert dist.load_model(path) == WeibullTail(0.5, 0.22361)

    def test_load_model_bad_json(self, tmp_path):
        path = tmp_path / "model.json"
        path.write_text("{family: pareto")
        with pytest.raises(ConfigError):
            dist.load_model(path)

    def test_str(self, pareto):
        assert str(pareto) == "pareto(alpha=3, scale=1)"

    def test_kind(self, pareto, weibull, lognormal):
        assert pareto.kind is ModelKind.ParetoTail
        assert weibull.kind is ModelKind.WeibullTail
        assert lognormal.kind is ModelKind.LognormalTail
