import math

import numpy as np
import pytest

from tvelast.errors import (
    MismatchedOutput,
    NoConvergence,
    NonFiniteObjective,
)
from tvelast.simlab import TvpDgp, gen_tvp
from tvelast.sspace import (
    ExplicitInit,
    MleOptions,
    TvpModel,
    VarianceParams,
    fit_mle,
    innovation_shocks,
    kalman_filter,
    kalman_smoother,
    log_likelihood,
    variance_from_log,
)
from tvelast import _optim

import _oracles
from conftest import make_series


def _model(yv, xv, gamma=1.0):
    return TvpModel(make_series(yv, name="y"), make_series(xv, name="x"), gamma=gamma)


def _random_model(rng, max_t=8):
    t = int(rng.integers(2, max_t + 1))
    return (
        _model(rng.normal(0, 1, t), rng.normal(0, 1, t), gamma=float(rng.uniform(0.5, 1.0))),
        float(rng.uniform(0.2, 2.0)),  # var_meas
        float(rng.uniform(0.2, 2.0)),  # var_state
        float(rng.normal()),           # a0
        float(rng.uniform(0.5, 3.0)),  # p0
    )


class TestVarianceParams:
    def test_exp_transform_anchors(self):
        assert variance_from_log(-4.136491) == pytest.approx(0.015979, abs=5e-7)
        assert variance_from_log(-1.025106) == pytest.approx(0.358758, abs=5e-7)
        assert variance_from_log(0.0) == 1.0

    def test_properties(self):
        p = VarianceParams(math.log(0.25), math.log(4.0))
        assert p.var_meas == pytest.approx(0.25, rel=1e-12)
        assert p.var_state == pytest.approx(4.0, rel=1e-12)

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            VarianceParams(float("inf"), 0.0)

    def test_model_alignment_enforced(self, rng):
        y = make_series(rng.normal(0, 1, 10))
        x_short = make_series(rng.normal(0, 1, 9))
        with pytest.raises(ValueError):
            TvpModel(y, x_short)

    def test_explicit_init_rejects_negative_variance(self):
        with pytest.raises(ValueError):
            ExplicitInit(0.0, -1.0)


class TestKalmanFilter:
    def test_single_observation_diffuse_algebra(self):
        y1, x1 = 1.3, 0.7
        params = VarianceParams(math.log(0.5), math.log(0.2))
        out = kalman_filter(_model([y1], [x1]), params)
        assert out.filt_mean[0] == pytest.approx(y1 / x1, rel=1e-6)
        assert out.filt_var[0] == pytest.approx(0.5 / x1 ** 2, rel=1e-6)
        assert out.n_diffuse_dropped == 1

    def test_constant_state_reduces_to_running_mean(self, rng):
        t = 80
        yv = rng.normal(2.0, 1.0, t)
        params = VarianceParams(0.0, -700.0)  # state variance ~ 1e-304
        out = kalman_filter(_model(yv, np.ones(t)), params)
        running = np.cumsum(yv) / np.arange(1, t + 1)
        np.testing.assert_allclose(out.filt_mean, running, atol=1e-8)

    def test_matches_joint_gaussian_oracle(self, rng):
        for _ in range(30):
            model, vm, vs, a0, p0 = _random_model(rng)
            params = VarianceParams(math.log(vm), math.log(vs))
            init = ExplicitInit(a0, p0)
            out = kalman_filter(model, params, init=init)
            yv = np.asarray(model.y.values)
            xv = np.asarray(model.x.values)
            ll, fm, fv, _, _ = _oracles.state_space_oracle(yv, xv, model.gamma, vm, vs, a0, p0)
            assert out.log_lik == pytest.approx(ll, abs=1e-8)
            np.testing.assert_allclose(out.filt_mean, fm, atol=1e-8)
            np.testing.assert_allclose(out.filt_var, fv, atol=1e-8)

    def test_innovation_identity(self, rng):
        model, vm, vs, a0, p0 = _random_model(rng)
        out = kalman_filter(model, VarianceParams(math.log(vm), math.log(vs)),
                            init=ExplicitInit(a0, p0))
        for t in range(len(model)):
            assert out.innovations[t] == model.y.values[t] - model.x.values[t] * out.pred_mean[t]

    def test_variances_positive_after_burn_in(self, rng):
        model, _ = gen_tvp(TvpDgp(T=100, sigma2_meas=0.3, sigma2_state=0.1, seed=4))
        out = kalman_filter(model, VarianceParams(math.log(0.3), math.log(0.1)))
        assert all(v > 0 for v in out.filt_var)
        assert all(f > 0 for f in out.innov_var)

    def test_diffuse_limit_monotone_convergence(self):
        model, _ = gen_tvp(TvpDgp(T=60, sigma2_meas=0.5, sigma2_state=0.2, seed=3))
        params = VarianceParams(math.log(0.5), math.log(0.2))
        ref = kalman_filter(model, params)
        ref_mean = np.asarray(ref.filt_mean[1:])
        ref_var = np.asarray(ref.filt_var[1:])
        devs = []
        for k in range(4, 11):
            out = kalman_filter(model, params, init=ExplicitInit(0.0, 10.0 ** k))
            dev_mean = np.max(np.abs(np.asarray(out.filt_mean[1:]) - ref_mean)
                              / np.maximum(np.abs(ref_mean), 1e-8))
            dev_var = np.max(np.abs(np.asarray(out.filt_var[1:]) - ref_var) / ref_var)
            devs.append(max(dev_mean, dev_var))
        assert all(b <= a for a, b in zip(devs, devs[1:]))
        assert devs[-1] < 1e-6


class TestLogLikelihood:
    def test_equals_filter_field_exactly(self, rng):
        model, vm, vs, a0, p0 = _random_model(rng)
        params = VarianceParams(math.log(vm), math.log(vs))
        assert log_likelihood(model, params) == kalman_filter(model, params).log_lik
        init = ExplicitInit(a0, p0)
        assert log_likelihood(model, params, init) == kalman_filter(model, params, init).log_lik

    def test_deterministic(self, rng):
        model, vm, vs, _, _ = _random_model(rng)
        params = VarianceParams(math.log(vm), math.log(vs))
        assert log_likelihood(model, params) == log_likelihood(model, params)


class TestSmoother:
    def test_boundary_equals_filtered(self, rng):
        model, vm, vs, a0, p0 = _random_model(rng)
        params = VarianceParams(math.log(vm), math.log(vs))
        init = ExplicitInit(a0, p0)
        out = kalman_filter(model, params, init=init)
        sm, sv = kalman_smoother(model, params, out, init=init)
        assert sm[-1] == out.filt_mean[-1]
        assert sv[-1] == out.filt_var[-1]

    def test_constant_state_gives_full_sample_mean(self, rng):
        t = 60
        yv = rng.normal(0.0, 1.0, t)
        model = _model(yv, np.ones(t))
        params = VarianceParams(0.0, -700.0)
        out = kalman_filter(model, params)
        sm, _ = kalman_smoother(model, params, out)
        np.testing.assert_allclose(sm, np.mean(yv), atol=1e-8)

    def test_matches_oracle(self, rng):
        for _ in range(30):
            model, vm, vs, a0, p0 = _random_model(rng)
            params = VarianceParams(math.log(vm), math.log(vs))
            init = ExplicitInit(a0, p0)
            out = kalman_filter(model, params, init=init)
            sm, sv = kalman_smoother(model, params, out, init=init)
            yv = np.asarray(model.y.values)
            xv = np.asarray(model.x.values)
            _, _, _, sm_o, sv_o = _oracles.state_space_oracle(yv, xv, model.gamma, vm, vs, a0, p0)
            np.testing.assert_allclose(sm, sm_o, atol=1e-8)
            np.testing.assert_allclose(sv, sv_o, atol=1e-8)

    def test_smoothing_never_inflates_variance(self, rng):
        model, _ = gen_tvp(TvpDgp(T=120, sigma2_meas=0.4, sigma2_state=0.3, seed=8))
        params = VarianceParams(math.log(0.4), math.log(0.3))
        out = kalman_filter(model, params)
        _, sv = kalman_smoother(model, params, out)
        for s, f in zip(sv, out.filt_var):
            assert s <= f + 1e-12

    def test_mismatched_output_rejected(self, rng):
        model, _ = gen_tvp(TvpDgp(T=30, sigma2_meas=0.4, sigma2_state=0.3, seed=1))
        other, _ = gen_tvp(TvpDgp(T=30, sigma2_meas=0.4, sigma2_state=0.3, seed=2))
        params = VarianceParams(math.log(0.4), math.log(0.3))
        out = kalman_filter(model, params)
        with pytest.raises(MismatchedOutput):
            kalman_smoother(other, params, out)
        with pytest.raises(MismatchedOutput):
            kalman_smoother(model, VarianceParams(0.0, 0.0), out)


class TestInnovationShocks:
    def test_definitional_recompute(self, rng):
        model, _ = gen_tvp(TvpDgp(T=50, sigma2_meas=0.2, sigma2_state=0.1, seed=6))
        out = kalman_filter(model, VarianceParams(math.log(0.2), math.log(0.1)))
        shocks = innovation_shocks(out)
        for s, v, f in zip(shocks.values, out.innovations, out.innov_var):
            assert s == v / math.sqrt(f)
        assert shocks.start == model.y.start

    def test_self_consistent_data_gives_tiny_shocks(self, rng):
        t = 40
        xv = rng.normal(1.0, 0.5, t)
        model = _model(2.0 * xv, xv)
        out = kalman_filter(model, VarianceParams(math.log(1e-10), math.log(1e-12)))
        shocks = innovation_shocks(out)
        assert max(abs(v) for v in shocks.values[out.n_diffuse_dropped:]) < 1e-3

    def test_calibrated_variance_under_correct_model(self):
        model, _ = gen_tvp(TvpDgp(T=1000, sigma2_meas=0.3, sigma2_state=0.15, seed=12))
        out = kalman_filter(model, VarianceParams(math.log(0.3), math.log(0.15)))
        vals = np.asarray(innovation_shocks(out).values[out.n_diffuse_dropped:])
        assert np.var(vals) == pytest.approx(1.0, abs=0.15)


class TestFitMle:
    def test_recovers_known_variances(self):
        model, _ = gen_tvp(TvpDgp(T=543, sigma2_meas=0.016, sigma2_state=0.359, seed=7))
        fit = fit_mle(model)
        assert fit.converged
        assert fit.params.log_var_meas == pytest.approx(math.log(0.016), abs=0.5)
        assert fit.params.log_var_state == pytest.approx(math.log(0.359), abs=0.3)

    def test_gradient_small_at_optimum(self):
        model, _ = gen_tvp(TvpDgp(T=300, sigma2_meas=0.1, sigma2_state=0.2, seed=9))
        fit = fit_mle(model)
        theta = np.array([fit.params.log_var_meas, fit.params.log_var_state])
        grad = _optim.fd_gradient(
            lambda t: log_likelihood(model, VarianceParams(t[0], t[1])), theta
        )
        assert np.max(np.abs(grad)) < 1e-4

    def test_accepted_loglik_path_monotone(self):
        model, _ = gen_tvp(TvpDgp(T=200, sigma2_meas=0.05, sigma2_state=0.4, seed=10))
        fit = fit_mle(model)
        path = fit.loglik_path
        assert all(b >= a for a, b in zip(path, path[1:]))
        assert fit.log_lik == pytest.approx(path[-1], abs=1e-9)

    def test_degenerate_zero_data_never_silent(self, rng):
        t = 100
        model = _model(np.zeros(t), rng.normal(0, 1, t))
        with pytest.raises(NoConvergence):
            fit_mle(model)

    def test_information_criteria_convention(self):
        model, _ = gen_tvp(TvpDgp(T=150, sigma2_meas=0.1, sigma2_state=0.1, seed=13))
        fit = fit_mle(model)
        n, k = 150, 2
        assert fit.aic == pytest.approx((-2 * fit.log_lik + 2 * k) / n, rel=1e-12)
        assert fit.sic == pytest.approx((-2 * fit.log_lik + k * math.log(n)) / n, rel=1e-12)
        assert fit.hq == pytest.approx((-2 * fit.log_lik + 2 * k * math.log(math.log(n))) / n,
                                       rel=1e-12)

    def test_final_state_fields(self):
        model, _ = gen_tvp(TvpDgp(T=100, sigma2_meas=0.2, sigma2_state=0.3, seed=14))
        fit = fit_mle(model)
        out = kalman_filter(model, fit.params)
        assert fit.final_state == out.filt_mean[-1]
        assert fit.final_rmse == math.sqrt(out.filt_var[-1])
        assert fit.final_z == pytest.approx(fit.final_state / fit.final_rmse, rel=1e-12)
        assert 0.0 <= fit.final_p <= 1.0
        # gamma = 1: the one-step forecast equals the final filtered state
        assert fit.forecast_state == fit.final_state
        assert fit.forecast_rmse > fit.final_rmse

    def test_reparameterization_consistency(self):
        # optimizing directly over variances reaches the same maximum
        model, _ = gen_tvp(TvpDgp(T=200, sigma2_meas=0.25, sigma2_state=0.5, seed=15))
        fit = fit_mle(model)

        def neg_ll_direct(v):
            if v[0] <= 1e-12 or v[1] <= 1e-12:
                return math.inf
            return -log_likelihood(model, VarianceParams(math.log(v[0]), math.log(v[1])))

        opt = _optim.minimize(neg_ll_direct, np.array([0.3, 0.3]))
        assert opt.converged
        assert -opt.f == pytest.approx(fit.log_lik, abs=1e-6)

    def test_estimate_gamma_near_unity_on_random_walk_data(self):
        model, _ = gen_tvp(TvpDgp(T=400, sigma2_meas=0.05, sigma2_state=0.3, seed=16))
        fit = fit_mle(model, options=MleOptions(estimate_gamma=True))
        assert fit.converged
        assert len(fit.robust_se) == 3
        assert fit.gamma == pytest.approx(1.0, abs=0.05)

    def test_non_finite_start_rejected(self, rng):
        model = _model(rng.normal(0, 1, 50), rng.normal(0, 1, 50))
        with pytest.raises(NonFiniteObjective):
            fit_mle(model, init_params=VarianceParams(100.0, 100.0))

    def test_robust_se_positive(self):
        model, _ = gen_tvp(TvpDgp(T=250, sigma2_meas=0.1, sigma2_state=0.2, seed=17))
        fit = fit_mle(model)
        assert all(se > 0 for se in fit.robust_se)
        assert all(0 <= p <= 1 for p in fit.p_values)

    def test_text_and_json_render(self):
        model, _ = gen_tvp(TvpDgp(T=80, sigma2_meas=0.1, sigma2_state=0.2, seed=18))
        fit = fit_mle(model)
        assert "Final State" in fit.to_text()
        import json
        assert json.loads(fit.to_json())["converged"] is True
