"""Hill, AR(1) fit, residuals, and the two Weissman-type quantile estimators."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tailseries import (
    DegenerateInputError,
    DomainError,
    QuantileTarget,
    RngState,
    fit_ar1,
    hill,
    hill_curve,
    linear_ar1,
    quantile_fn,
    residuals_ar1,
    sample,
    simulate_series,
    two_sided_pareto,
    weissman_direct,
    weissman_direct_curve,
    weissman_model_ar1,
    weissman_model_ar1_curve,
    weissman_model_ar1_fit,
)
from tailseries.estimators import weissman_extrapolate, _tail_ratio_factor

MODEL_A = two_sided_pareto(0.5, 0.5)


class TestHill:
    def test_hand_value(self):
        assert hill([1, 2, 4, 8], 2) == pytest.approx((np.log(4) + np.log(2)) / 2, abs=1e-14)

    def test_scale_invariance(self):
        x = sample(MODEL_A, RngState(2), 400)
        for c in (0.1, 3.0, 1e6):
            assert hill(c * np.abs(x), 50) == pytest.approx(hill(np.abs(x), 50), abs=1e-10)

    def test_pareto_plugin_consistency(self):
        # deterministic plug-in grid of exact Pareto quantiles
        n, k, gamma = 10_000, 100, 0.5
        pareto = two_sided_pareto(gamma, 1.0)  # one-sided
        grid = quantile_fn(pareto, (np.arange(1, n + 1) - 0.5) / n)
        assert hill(grid, k) == pytest.approx(gamma, abs=0.05)

    def test_threshold_must_be_positive(self):
        with pytest.raises(DomainError):
            hill([-3, -2, -1, 1, 2], 3)

    def test_all_tied_returns_zero(self):
        assert hill([1, 5, 5, 5, 5], 3) == 0.0

    def test_k_bounds(self):
        with pytest.raises(DomainError):
            hill([1, 2, 3], 3)
        with pytest.raises(DomainError):
            hill([1, 2, 3], 0)

    def test_curve_matches_scalar(self):
        x = sample(MODEL_A, RngState(3), 500)
        ks = np.array([1, 7, 33, 100, 249])
        curve = hill_curve(np.abs(x), ks)
        for i, k in enumerate(ks):
            assert curve[i] == pytest.approx(hill(np.abs(x), int(k)), rel=1e-12)

    def test_curve_nan_on_bad_threshold(self):
        x = np.array([-5.0, -4.0, -1.0, 1.0, 2.0, 8.0])
        curve = hill_curve(x, np.array([1, 2, 3, 4]))
        assert np.isfinite(curve[:2]).all()
        assert np.isnan(curve[2:]).all()

    def test_unbiased_on_exact_pareto(self):
        # 10^4 replicates of n=200 exact Pareto samples
        gamma, n, k, reps = 0.5, 200, 50, 10_000
        u = RngState(17).uniforms(reps * n).reshape(reps, n)
        draws = (1.0 / (1.0 - u)) ** gamma
        top = np.sort(draws, axis=1)[:, n - k - 1:]
        estimates = np.log(top[:, 1:]).mean(axis=1) - np.log(top[:, 0])
        se = estimates.std(ddof=1) / np.sqrt(reps)
        assert abs(estimates.mean() - gamma) < 3 * se + 1e-12


class TestFitAr1:
    def test_hand_value(self):
        assert fit_ar1([1.0, 2.0, 3.0]) == 0.0

    def test_constant_series_degenerate(self):
        with pytest.raises(DegenerateInputError):
            fit_ar1([5.0, 5.0, 5.0, 5.0])

    def test_consistency_on_simulated_ar1(self):
        series = simulate_series(linear_ar1(0.8, MODEL_A, burnin=2000), 2000, RngState(21))
        assert fit_ar1(series) == pytest.approx(0.8, abs=0.05)

    def test_uncentered_variant(self):
        x = np.array([1.0, 2.0, 4.0, 8.0])
        expected = float(np.dot(x[:-1], x[1:]) / np.dot(x, x))
        assert fit_ar1(x, center=False) == pytest.approx(expected, abs=1e-15)

    def test_too_short(self):
        with pytest.raises(DomainError):
            fit_ar1([1.0, 2.0])


class TestResiduals:
    def test_differencing(self):
        assert np.array_equal(residuals_ar1([1.0, 2.0, 3.0], 1.0), [1.0, 1.0])

    def test_phi_zero_identity(self):
        x = np.array([3.0, 1.0, 4.0, 1.0])
        assert np.array_equal(residuals_ar1(x, 0.0), x[1:])

    def test_replay_recovers_innovations(self):
        # with the true coefficient, residuals recover the generator's
        # innovations up to one rounding of each recursion step
        model = linear_ar1(0.8, MODEL_A, burnin=500)
        series = simulate_series(model, 3000, RngState(23))
        draws = sample(MODEL_A, RngState(23), 3500)[501:]  # innovations at t = 2..n
        resid = residuals_ar1(series, 0.8)
        scale = np.maximum(np.abs(series[1:]), np.abs(draws))
        assert np.all(np.abs(resid - draws) <= 4e-16 * scale + 1e-300)

    def test_refit_on_residuals_near_zero(self):
        rows = []
        for r in range(30):
            series = simulate_series(linear_ar1(0.8, MODEL_A, burnin=2000), 2000,
                                     RngState(29).substream(r))
            rows.append(fit_ar1(residuals_ar1(series, fit_ar1(series))))
        assert abs(np.mean(rows)) < 0.05


class TestWeissmanDirect:
    def test_forced_components_hand_value(self):
        # anchor 10, gamma 0.5, n=1000, k=100, t=0.001
        assert weissman_extrapolate(10.0, 0.5, 1000, 100, 0.001) == pytest.approx(100.0, rel=1e-12)

    def test_threshold_self_consistency(self):
        x = sample(MODEL_A, RngState(31), 400)
        k = 40
        target = QuantileTarget(t=k / 400, k=k, n=400)
        anchor = np.sort(x)[400 - k - 1]
        assert weissman_direct(x, target) == pytest.approx(anchor, rel=1e-12)

    def test_scaling_equivariance(self):
        x = np.abs(sample(MODEL_A, RngState(37), 500))
        target = QuantileTarget(t=0.001, k=50, n=500)
        for c in (0.5, 2.0, 40.0):
            assert weissman_direct(c * x, target) == pytest.approx(
                c * weissman_direct(x, target), rel=1e-10)

    def test_nonincreasing_in_t(self):
        x = np.abs(sample(MODEL_A, RngState(38), 500))
        values = [weissman_direct(x, QuantileTarget(t=t, k=50, n=500))
                  for t in (0.0005, 0.001, 0.01, 0.05)]
        assert all(a >= b for a, b in zip(values, values[1:]))

    def test_curve_matches_scalar(self):
        x = simulate_series(linear_ar1(0.8, MODEL_A, burnin=1000), 2000, RngState(39))
        ks = np.array([10, 100, 400])
        curve = weissman_direct_curve(x, ks, 0.001)
        for i, k in enumerate(ks):
            assert curve[i] == pytest.approx(
                weissman_direct(x, QuantileTarget(t=0.001, k=int(k), n=2000)), rel=1e-10)


class TestWeissmanModel:
    def test_forced_components_hand_value(self):
        # anchor 5, gamma 0.5, phi 0.8, n=2000, k=100, t=0.001
        u = (1 - 0.8 ** (1 / 0.5)) * 0.001
        assert u == pytest.approx(0.00036, abs=1e-18)
        value = weissman_extrapolate(5.0, 0.5, 2000, 100, u)
        assert value == pytest.approx(5.0 * 0.0072 ** -0.5, rel=1e-12)
        assert value == pytest.approx(58.926, abs=5e-3)

    def test_phi_zero_factor_reduces_to_direct(self):
        factor, clamped = _tail_ratio_factor(0.0, np.array([0.5]))
        assert factor[0] == 1.0 and not clamped[0]

    def test_clamp_on_unit_root(self):
        factor, clamped = _tail_ratio_factor(1.05, np.array([0.5]))
        assert factor[0] == pytest.approx(1e-6) and clamped[0]

    def test_pipeline_matches_manual_composition(self):
        series = simulate_series(linear_ar1(0.8, MODEL_A, burnin=1000), 2000, RngState(41))
        k, t = 200, 0.001
        fit = weissman_model_ar1_fit(series, QuantileTarget(t=t, k=k, n=2000))
        phi = fit_ar1(series)
        resid = residuals_ar1(series, phi)
        gamma = hill(resid, k)
        anchor = np.sort(resid)[resid.size - k]
        u = (1 - abs(phi) ** (1 / gamma)) * t
        assert fit.phi_hat == phi
        assert fit.gamma_hat == gamma
        assert fit.estimate == pytest.approx(anchor * (2000 * u / k) ** -gamma, rel=1e-12)

    def test_curve_matches_scalar(self):
        series = simulate_series(linear_ar1(0.8, MODEL_A, burnin=1000), 2000, RngState(43))
        ks = np.array([25, 100, 662])
        curve, phi_hat, _ = weissman_model_ar1_curve(series, ks, 0.001)
        for i, k in enumerate(ks):
            assert curve[i] == pytest.approx(
                weissman_model_ar1(series, QuantileTarget(t=0.001, k=int(k), n=2000)),
                rel=1e-10)

    def test_sanity_near_truth_model_a(self):
        # a single n=2000 draw lands within a factor ~2 of the true quantile
        series = simulate_series(linear_ar1(0.8, MODEL_A, burnin=10_000), 2000, RngState(47))
        est = weissman_model_ar1(series, QuantileTarget(t=0.001, k=600, n=2000))
        assert 15 < est < 80  # truth is near 37.9


@settings(max_examples=200, deadline=None)
@given(seed=st.integers(0, 2**32), k=st.integers(1, 60), c=st.floats(0.01, 100.0))
def test_hill_scale_invariance_property(seed, k, c):
    x = np.abs(sample(MODEL_A, RngState(seed), 100)) + 1e-9
    assert hill(c * x, k) == pytest.approx(hill(x, k), rel=1e-9, abs=1e-9)
