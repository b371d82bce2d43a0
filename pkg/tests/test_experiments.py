"""Monte Carlo harness: conventions, aggregation identities, determinism, KDE."""

import numpy as np
import pytest

from tailseries import (
    ConfigurationError,
    DegenerateInputError,
    ExperimentSpec,
    RngState,
    empirical_quantile,
    fit_ar1,
    kde,
    linear_ar1,
    nonlinear_ar1,
    quantile_fn,
    run_quantile_experiment,
    shifted_two_sided_pareto,
    simulate_series,
    summarize_estimates,
    true_quantile,
    two_sided_pareto,
)
from tailseries import test_power_experiment as power_experiment
from tailseries.experiments import DIRECT, MODEL_BASED, silverman_bandwidth
from scipy.special import ndtri

MODEL_A = two_sided_pareto(0.5, 0.5)
MODEL_B = shifted_two_sided_pareto(0.3, 0.5)


class TestEmpiricalQuantile:
    def test_median_convention(self):
        assert empirical_quantile(np.arange(1, 11), 0.5) == 5.0

    def test_ceiling_convention(self):
        assert empirical_quantile(np.arange(1, 11), 0.95) == 10.0

    def test_always_an_element(self):
        x = RngState(3).uniforms(97)
        for q in (0.01, 0.37, 0.5, 0.93, 0.999):
            assert empirical_quantile(x, q) in x

    def test_domain(self):
        with pytest.raises(ConfigurationError):
            empirical_quantile([1.0, 2.0], 0.0)


class TestTrueQuantile:
    def test_iid_closed_form(self):
        # phi = 0: the series is i.i.d., so the target quantile is exact
        model = linear_ar1(0.0, MODEL_A, burnin=0)
        value, half_width = true_quantile(model, 0.001, 30, 200_000, RngState(100))
        exact = quantile_fn(MODEL_A, 0.999)
        assert exact == pytest.approx((2 * 0.001) ** -0.5, rel=1e-12)
        assert abs(value - exact) < max(half_width, 0.02 * exact)

    def test_exceedance_precondition(self):
        model = linear_ar1(0.0, MODEL_A, burnin=0)
        with pytest.raises(ConfigurationError):
            true_quantile(model, 0.001, 5, 50_000, RngState(1))


class TestSummaries:
    def test_constant_offset_hook(self):
        # synthetic estimator always returning truth + 1
        estimates = np.full((40, 1, 3), 11.0)
        summary = summarize_estimates(("direct",), (10, 20, 30), estimates, 10.0)
        assert np.all(summary.rmse == 1.0)
        assert np.all(summary.l1 == 1.0)
        assert np.all(summary.bias == 1.0)
        assert np.all(summary.stderr == 0.0)
        assert np.all(summary.missing == 0)

    def test_moment_identity_and_jensen(self):
        gen = np.random.default_rng(42)
        estimates = gen.lognormal(1.0, 1.0, size=(100, 2, 5))
        estimates[gen.random(estimates.shape) < 0.1] = np.nan
        summary = summarize_estimates(("direct", "model-based"), (1, 2, 3, 4, 5),
                                      estimates, 3.0)
        completed = np.sum(~np.isnan(estimates), axis=0)
        lhs = summary.rmse**2
        rhs = summary.bias**2 + summary.stderr**2 * (completed - 1) / completed
        assert np.allclose(lhs, rhs, rtol=1e-9)
        assert np.all(summary.l1 <= summary.rmse + 1e-12)
        assert np.array_equal(summary.missing, 100 - completed)

    def test_argmin_points_into_grid(self):
        gen = np.random.default_rng(7)
        estimates = gen.normal(5.0, 1.0, size=(30, 1, 4))
        summary = summarize_estimates(("direct",), (10, 50, 100, 200), estimates, 5.0)
        k, value = summary.argmin_rmse["direct"]
        assert k in (10, 50, 100, 200)
        assert value == np.nanmin(summary.rmse)

    def test_all_missing_column(self):
        estimates = np.full((10, 1, 2), np.nan)
        estimates[:, 0, 0] = 1.0
        summary = summarize_estimates(("direct",), (5, 10), estimates, 1.0)
        assert summary.missing[0, 1] == 10
        assert np.isnan(summary.rmse[0, 1])
        assert summary.argmin_rmse["direct"][0] == 5


SMALL_SPEC = ExperimentSpec(
    model=linear_ar1(0.8, MODEL_A, burnin=500), n=400, replicates=24,
    k_grid=(10, 25, 50, 100), t=0.005, master_seed=99)


class TestRunExperiment:
    def test_deterministic_rerun(self):
        a = run_quantile_experiment(SMALL_SPEC, 20.0, keep_estimates=True)
        b = run_quantile_experiment(SMALL_SPEC, 20.0, keep_estimates=True)
        assert np.array_equal(a.estimates, b.estimates, equal_nan=True)

    def test_workers_do_not_change_results(self):
        a = run_quantile_experiment(SMALL_SPEC, 20.0, keep_estimates=True)
        b = run_quantile_experiment(SMALL_SPEC, 20.0, workers=3, keep_estimates=True)
        assert np.array_equal(a.estimates, b.estimates, equal_nan=True)
        assert np.array_equal(a.rmse, b.rmse, equal_nan=True)
        assert a.clamp_count == b.clamp_count

    def test_estimator_subset(self):
        spec = ExperimentSpec(model=linear_ar1(0.8, MODEL_A, burnin=500), n=400,
                              replicates=5, k_grid=(20, 40), t=0.005,
                              estimators=(DIRECT,), master_seed=7)
        summary = run_quantile_experiment(spec, 20.0)
        assert summary.rmse.shape == (1, 2)
        assert DIRECT in summary.argmin_rmse and MODEL_BASED not in summary.argmin_rmse

    def test_csv_rows_schema(self):
        summary = run_quantile_experiment(SMALL_SPEC, 20.0)
        rows = list(summary.csv_rows())
        assert len(rows) == 2 * 4
        name, k, *metrics, missing = rows[0]
        assert name == DIRECT and k == 10 and len(metrics) == 4


class TestKde:
    def test_normal_density_at_zero(self):
        z = ndtri(RngState(55).uniforms(10_000))
        est = kde(z)
        at0 = np.interp(0.0, est.grid, est.density)
        assert at0 == pytest.approx(1 / np.sqrt(2 * np.pi), rel=0.05)

    def test_integrates_to_one_on_wide_grid(self):
        z = ndtri(RngState(56).uniforms(2000))
        h = silverman_bandwidth(z)
        grid = np.linspace(z.min() - 5 * h, z.max() + 5 * h, 1024)
        est = kde(z, grid=grid)
        assert np.trapezoid(est.density, est.grid) == pytest.approx(1.0, abs=0.01)

    def test_shift_invariance(self):
        v = RngState(57).uniforms(500)
        base = kde(v)
        shifted = kde(v + 10.0, grid=base.grid + 10.0)
        assert shifted.bandwidth == pytest.approx(base.bandwidth, rel=1e-12)
        assert np.allclose(shifted.density, base.density, atol=1e-12)

    def test_degenerate_input(self):
        with pytest.raises(DegenerateInputError):
            kde(np.ones(50))

    def test_silverman_rule(self):
        v = ndtri(RngState(58).uniforms(4000))
        sd = v.std(ddof=1)
        iqr = np.subtract(*np.percentile(v, [75, 25])) * -1.0
        expected = 1.06 * min(sd, abs(iqr) / 1.34) * 4000 ** -0.2
        assert silverman_bandwidth(v) == pytest.approx(expected, rel=1e-12)


class TestPowerExperiment:
    def test_size_on_linear_model(self):
        model = linear_ar1(0.8, MODEL_B, burnin=2000)
        report = power_experiment(model, 1000, 300, RngState(81))
        assert report.turning_point == pytest.approx(0.05, abs=0.05)
        assert report.difference_sign == pytest.approx(0.05, abs=0.05)
        assert report.portmanteau_by_h.shape == (30,)
        assert report.portmanteau_max == report.portmanteau_by_h.max()

    def test_warns_on_infinite_variance_innovations(self):
        model = linear_ar1(0.5, MODEL_A, burnin=100)  # gamma = 0.5
        with pytest.warns(UserWarning, match="variance"):
            power_experiment(model, 200, 2, RngState(82))

    def test_requires_autoregressive_model(self):
        from tailseries import SREDriver, TwoPointLaw, sre_model
        model = sre_model(SREDriver(TwoPointLaw(2.0, 0.5, 1 / 3)))
        with pytest.raises(ConfigurationError):
            power_experiment(model, 100, 2, RngState(83))


class TestFittedCoefficientOnNonlinearModel:
    def test_mean_fit_in_reported_band(self):
        model = nonlinear_ar1(0.8, 0.6, MODEL_B)
        root = RngState(777)
        fits = [fit_ar1(simulate_series(model, 2000, root.substream(r)))
                for r in range(150)]
        assert 0.96 <= np.mean(fits) <= 1.00
