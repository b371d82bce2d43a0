"""Monte Carlo harness: ground truth, replicated estimation, and test power.

The central object is a replicated quantile-estimation experiment: simulate
R series, evaluate the direct and the model-based extreme-quantile
estimator on each over a grid of k, and summarize RMSE / L1 / bias /
standard error against a ground-truth quantile obtained from long
simulations. Replicates are the unit of parallelism; replicate r always
consumes substream r of the experiment seed, so results are bit-identical
for any worker count.

Presets mirror the simulation study's tables and figures at desk scale and
write plot-ready CSV plus JSON summaries; see `run_preset`.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import serialize
from .diagnostics import difference_sign_test, ljung_box_curve, turning_point_test
from .distributions import shifted_two_sided_pareto, two_sided_pareto
from .errors import ConfigurationError, DegenerateInputError, TailSeriesError
from .estimators import fit_ar1, residuals_ar1, weissman_direct_curve, weissman_model_ar1_curve
from .rng import RngState
from .simulate import LINEAR_AR1, NONLINEAR_AR1, SeriesModel, linear_ar1, nonlinear_ar1, simulate_series

DIRECT = "direct"
MODEL_BASED = "model-based"

DEFAULT_K_GRID = tuple(range(10, 1001, 5))
DEFAULT_SEED = 1

# shared study parameters
STUDY_PHI = 0.8
STUDY_DELTA = 0.6
STUDY_N = 2000
STUDY_T = 0.001
INNOVATIONS = {
    "unshifted": two_sided_pareto(0.5, 0.5),
    "shifted": shifted_two_sided_pareto(0.3, 0.5),
}


@dataclass(frozen=True)
class ExperimentSpec:
    """A replicated quantile-estimation experiment over a grid of k."""

    model: SeriesModel
    n: int
    replicates: int
    k_grid: tuple
    t: float
    estimators: tuple = (DIRECT, MODEL_BASED)
    master_seed: int = DEFAULT_SEED
    use_abs: bool = False

    def __post_init__(self):
        if self.replicates < 1:
            raise ConfigurationError("replicates must be >= 1")
        if not self.k_grid:
            raise ConfigurationError("k_grid must be nonempty")
        if any(not (1 <= k < self.n) for k in self.k_grid):
            raise ConfigurationError("every k must satisfy 1 <= k < n")
        if not (0 < self.t < 1):
            raise ConfigurationError("t must lie in (0, 1)")
        bad = set(self.estimators) - {DIRECT, MODEL_BASED}
        if bad or not self.estimators:
            raise ConfigurationError(f"estimators must be a nonempty subset of "
                                     f"{{{DIRECT!r}, {MODEL_BASED!r}}}, got {bad}")


@dataclass(frozen=True)
class ErrorSummary:
    """Per-(estimator, k) error summaries of a quantile experiment."""

    estimators: tuple
    k_grid: tuple
    rmse: np.ndarray
    l1: np.ndarray
    bias: np.ndarray
    stderr: np.ndarray
    missing: np.ndarray
    argmin_rmse: dict
    argmin_l1: dict
    true_value: float
    true_half_width: float
    replicates: int
    clamp_count: int
    estimates: np.ndarray | None = None  # (R, E, K), kept on request

    def to_dict(self) -> dict:
        per_estimator = {}
        for i, name in enumerate(self.estimators):
            per_estimator[name] = {
                "argmin_rmse": self._argmin_dict(self.argmin_rmse.get(name)),
                "argmin_l1": self._argmin_dict(self.argmin_l1.get(name)),
                "rmse": self.rmse[i], "l1": self.l1[i], "bias": self.bias[i],
                "stderr": self.stderr[i], "missing": self.missing[i].tolist(),
            }
        return {
            "schema_version": serialize.SCHEMA_VERSION,
            "true_value": self.true_value,
            "true_half_width": self.true_half_width,
            "replicates": self.replicates,
            "clamp_count": self.clamp_count,
            "k_grid": [int(k) for k in self.k_grid],
            "estimators": list(self.estimators),
            "per_estimator": per_estimator,
        }

    @staticmethod
    def _argmin_dict(entry):
        if entry is None:
            return None
        k, value = entry
        return {"k": int(k), "value": float(value)}

    def csv_rows(self):
        for i, name in enumerate(self.estimators):
            for j, k in enumerate(self.k_grid):
                yield (name, int(k), self.rmse[i, j], self.l1[i, j],
                       self.bias[i, j], self.stderr[i, j], int(self.missing[i, j]))


@dataclass(frozen=True)
class DensityEstimate:
    """Gaussian-kernel density on a fixed grid."""

    grid: np.ndarray
    density: np.ndarray
    bandwidth: float


@dataclass(frozen=True)
class PowerReport:
    """Rejection rates of the three residual tests at nominal size 0.05."""

    turning_point: float
    difference_sign: float
    portmanteau_by_h: np.ndarray
    portmanteau_max: float
    portmanteau_best_h: int
    replicates: int

    def to_dict(self) -> dict:
        return {
            "turning_point": self.turning_point,
            "difference_sign": self.difference_sign,
            "portmanteau_max": self.portmanteau_max,
            "portmanteau_best_h": self.portmanteau_best_h,
            "portmanteau_by_h": self.portmanteau_by_h,
            "replicates": self.replicates,
        }


def empirical_quantile(series, q: float) -> float:
    """The ceil(q*n)-th smallest value (always an element of the series)."""
    if not (0 < q < 1):
        raise ConfigurationError("q must lie in (0, 1)")
    x = np.asarray(series, dtype=np.float64)
    m = min(max(int(math.ceil(q * x.size)), 1), x.size)
    return float(np.partition(x, m - 1)[m - 1])


def true_quantile(model: SeriesModel, t: float, n_reps: int, rep_length: int,
                  rng: RngState) -> tuple[float, float]:
    """Ground-truth F^{-1}(1-t) as the mean of long-run empirical quantiles.

    Returns (value, half_width) where half_width = 2.58 * stderr of the mean
    (a 99% normal margin).
    """
    if rep_length * t < 100:
        raise ConfigurationError(
            f"rep_length*t = {rep_length * t:g} < 100: too few exceedances per replicate")
    if n_reps < 2:
        raise ConfigurationError("need at least 2 replicates for an error estimate")
    quantiles = np.empty(n_reps)
    for i in range(n_reps):
        series = simulate_series(model, rep_length, rng.substream(i))
        quantiles[i] = empirical_quantile(series, 1.0 - t)
    half_width = 2.58 * quantiles.std(ddof=1) / math.sqrt(n_reps)
    return float(quantiles.mean()), float(half_width)


def _replicate_block(spec: ExperimentSpec, start: int, count: int):
    """Estimates for replicates start..start+count-1: (count, E, K) plus clamp count."""
    ks = np.asarray(spec.k_grid, dtype=np.int64)
    root = RngState(spec.master_seed)
    out = np.full((count, len(spec.estimators), ks.size), np.nan)
    clamps = 0
    for i in range(count):
        series = simulate_series(spec.model, spec.n, root.substream(start + i))
        for e, name in enumerate(spec.estimators):
            try:
                if name == DIRECT:
                    out[i, e] = weissman_direct_curve(series, ks, spec.t,
                                                      use_abs=spec.use_abs)
                else:
                    est, _, clamped = weissman_model_ar1_curve(series, ks, spec.t,
                                                               use_abs=spec.use_abs)
                    out[i, e] = est
                    if clamped.any():
                        clamps += 1
            except TailSeriesError:
                pass  # row stays NaN; counted as missing
    return out, clamps


def run_quantile_experiment(spec: ExperimentSpec, true_value: float,
                            true_half_width: float = 0.0, workers: int = 1,
                            keep_estimates: bool = False) -> ErrorSummary:
    """Run the replicated experiment and summarize errors against the truth.

    Deterministic given ``spec.master_seed`` for any ``workers`` value:
    replicate r always uses substream r and aggregation is fixed-order.
    """
    R = spec.replicates
    if workers <= 1:
        estimates, clamps = _replicate_block(spec, 0, R)
    else:
        block = max(1, -(-R // (4 * workers)))
        starts = list(range(0, R, block))
        counts = [min(block, R - s) for s in starts]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_replicate_block, [spec] * len(starts), starts, counts))
        estimates = np.concatenate([blk for blk, _ in results], axis=0)
        clamps = sum(c for _, c in results)
    return summarize_estimates(spec.estimators, spec.k_grid, estimates, true_value,
                               true_half_width, clamp_count=clamps,
                               keep_estimates=keep_estimates)


def summarize_estimates(estimators, k_grid, estimates: np.ndarray, true_value: float,
                        true_half_width: float = 0.0, clamp_count: int = 0,
                        keep_estimates: bool = False) -> ErrorSummary:
    """Aggregate a (replicates, estimators, k) estimate array into an ErrorSummary.

    NaN entries are missing estimates: they are counted and excluded from the
    error metrics, never silently dropped.
    """
    R = estimates.shape[0]
    err = estimates - true_value
    completed = np.sum(~np.isnan(estimates), axis=0)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        rmse = np.sqrt(np.nanmean(err**2, axis=0))
        l1 = np.nanmean(np.abs(err), axis=0)
        bias = np.nanmean(err, axis=0)
        stderr = np.nanstd(estimates, axis=0, ddof=1)
    missing = R - completed

    argmin_rmse, argmin_l1 = {}, {}
    for i, name in enumerate(estimators):
        argmin_rmse[name] = _argmin_entry(k_grid, rmse[i])
        argmin_l1[name] = _argmin_entry(k_grid, l1[i])
    return ErrorSummary(
        estimators=tuple(estimators), k_grid=tuple(k_grid),
        rmse=rmse, l1=l1, bias=bias, stderr=stderr, missing=missing,
        argmin_rmse=argmin_rmse, argmin_l1=argmin_l1,
        true_value=true_value, true_half_width=true_half_width,
        replicates=R, clamp_count=clamp_count,
        estimates=estimates if keep_estimates else None,
    )


def _argmin_entry(k_grid, values):
    if np.all(np.isnan(values)):
        return None
    idx = int(np.nanargmin(values))
    return (int(k_grid[idx]), float(values[idx]))


def silverman_bandwidth(values: np.ndarray) -> float:
    """1.06 * min(sd, iqr/1.34) * n**(-1/5), with the iqr term skipped if zero."""
    sd = float(values.std(ddof=1))
    q75, q25 = np.percentile(values, [75.0, 25.0])
    iqr = float(q75 - q25)
    scale = min(sd, iqr / 1.34) if iqr > 0 else sd
    return 1.06 * scale * values.size ** (-0.2)


def kde(values, grid=None, n_grid: int = 512, pad: float = 3.0) -> DensityEstimate:
    """Gaussian-kernel density estimate with Silverman's rule bandwidth.

    Without an explicit grid, 512 equally spaced points spanning the data
    range extended by 3 bandwidths are used.
    """
    x = np.asarray(values, dtype=np.float64)
    if x.size < 2 or np.unique(x).size < 2:
        raise DegenerateInputError("need at least 2 distinct values")
    h = silverman_bandwidth(x)
    if grid is None:
        grid = np.linspace(x.min() - pad * h, x.max() + pad * h, n_grid)
    else:
        grid = np.asarray(grid, dtype=np.float64)
    density = np.zeros_like(grid)
    norm = 1.0 / (x.size * h * math.sqrt(2.0 * math.pi))
    for start in range(0, grid.size, 1024):
        g = grid[start:start + 1024]
        z = (g[:, None] - x[None, :]) / h
        density[start:start + 1024] = norm * np.exp(-0.5 * z * z).sum(axis=1)
    _check_density_mass(grid, density, x, h)
    return DensityEstimate(grid=grid, density=density, bandwidth=h)


def _check_density_mass(grid, density, values, h):
    from .diagnostics import normal_cdf

    integral = float(np.trapezoid(density, grid))
    covered = float(np.mean(normal_cdf((grid[-1] - values) / h)
                            - normal_cdf((grid[0] - values) / h)))
    if abs(integral - covered) > 0.01:
        raise ConfigurationError(
            f"density grid too coarse: integral {integral:.4f} vs covered mass {covered:.4f}")


def test_power_experiment(model: SeriesModel, n: int, replicates: int,
                          rng: RngState, h_max: int = 30) -> PowerReport:
    """Rejection rates of the residual tests after (mis)fitting a linear AR(1).

    Per replicate: simulate, fit the AR(1) coefficient, form residuals, run
    the turning point and difference-sign tests at size 0.05, and the
    portmanteau test at every h = 1..h_max. The portmanteau power is
    reported per h and maximized over h.
    """
    if model.variant not in (LINEAR_AR1, NONLINEAR_AR1):
        raise ConfigurationError("power experiment needs an autoregressive model")
    if model.innovations.gamma >= 0.5:
        warnings.warn("portmanteau test is unreliable: innovation variance is "
                      "infinite for extreme value index >= 1/2", UserWarning)
    tp = ds = 0
    lb = np.zeros(h_max)
    for r in range(replicates):
        series = simulate_series(model, n, rng.substream(r))
        resid = residuals_ar1(series, fit_ar1(series))
        tp += turning_point_test(resid).reject_at_5pct
        ds += difference_sign_test(resid).reject_at_5pct
        _, pvals = ljung_box_curve(resid, h_max)
        lb += pvals < 0.05
    lb_rates = lb / replicates
    best = int(np.argmax(lb_rates))
    return PowerReport(
        turning_point=tp / replicates, difference_sign=ds / replicates,
        portmanteau_by_h=lb_rates, portmanteau_max=float(lb_rates[best]),
        portmanteau_best_h=best + 1, replicates=replicates,
    )


# ---------------------------------------------------------------------------
# presets reproducing the simulation study at desk scale
# ---------------------------------------------------------------------------

TRUTH_PROTOCOL = {"desk": (50, 1_000_000), "paper": (200, 9_000_000)}
PRESETS = ("table1", "table2", "figure1", "figure3", "figure4", "figure2-scatter", "power")

_TRUTH_STREAM = 2**32      # component namespaces within the preset seed
_SCATTER_STREAM = 2**32 + 1
_POWER_STREAM = 2**32 + 2


def _study_model(linear: bool, innovations_label: str) -> SeriesModel:
    innovations = INNOVATIONS[innovations_label]
    if linear:
        return linear_ar1(STUDY_PHI, innovations)
    return nonlinear_ar1(STUDY_PHI, STUDY_DELTA, innovations)


def _study_experiment(model: SeriesModel, replicates: int, seed: int,
                      component: int) -> ExperimentSpec:
    return ExperimentSpec(model=model, n=STUDY_N, replicates=replicates,
                          k_grid=DEFAULT_K_GRID, t=STUDY_T,
                          master_seed=RngState(seed).derive_seed(component))


def _quantile_study(linear: bool, out_dir: Path, replicates: int, seed: int,
                    scale: str, workers: int) -> dict:
    truth_reps, truth_len = TRUTH_PROTOCOL[scale]
    root = RngState(seed)
    results = {}
    for i, label in enumerate(("unshifted", "shifted")):
        model = _study_model(linear, label)
        truth, half_width = true_quantile(model, STUDY_T, truth_reps, truth_len,
                                          root.substream(_TRUTH_STREAM + i))
        spec = _study_experiment(model, replicates, seed, i)
        summary = run_quantile_experiment(spec, truth, half_width, workers=workers)
        sub = out_dir / label
        sub.mkdir(parents=True, exist_ok=True)
        (sub / "summary.json").write_text(serialize.dump_json(summary.to_dict()))
        (sub / "errors_vs_k.csv").write_text(serialize.dump_csv(
            ["estimator", "k", "rmse", "l1", "bias", "stderr", "missing"],
            summary.csv_rows()))
        results[label] = summary
    return results


def _density_study(out_dir: Path, replicates: int, seed: int, scale: str,
                   workers: int) -> dict:
    truth_reps, truth_len = TRUTH_PROTOCOL[scale]
    model = _study_model(False, "shifted")
    root = RngState(seed)
    truth, half_width = true_quantile(model, STUDY_T, truth_reps, truth_len,
                                      root.substream(_TRUTH_STREAM))
    spec = _study_experiment(model, replicates, seed, 1)
    summary = run_quantile_experiment(spec, truth, half_width, workers=workers,
                                      keep_estimates=True)
    k_idx = {name: list(spec.k_grid).index(summary.argmin_rmse[name][0])
             for name in spec.estimators}
    direct_vals = summary.estimates[:, 0, k_idx[DIRECT]]
    model_vals = summary.estimates[:, 1, k_idx[MODEL_BASED]]
    direct_vals = direct_vals[~np.isnan(direct_vals)]
    model_vals = model_vals[~np.isnan(model_vals)]
    # robust common grid: outliers stretch the range but must not starve the
    # resolution needed by the sharper of the two kernels
    h_direct = silverman_bandwidth(direct_vals)
    h_model = silverman_bandwidth(model_vals)
    lo = min(np.percentile(direct_vals, 0.1), np.percentile(model_vals, 0.1))
    hi = max(np.percentile(direct_vals, 99.9), np.percentile(model_vals, 99.9))
    lo -= 3 * max(h_direct, h_model)
    hi += 3 * max(h_direct, h_model)
    n_grid = int(np.clip(math.ceil((hi - lo) / (min(h_direct, h_model) / 4.0)), 512, 16384))
    grid = np.linspace(lo, hi, n_grid)
    dens_direct = kde(direct_vals, grid=grid)
    dens_model = kde(model_vals, grid=grid)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "density.csv").write_text(serialize.dump_csv(
        ["x", "direct", "model"],
        zip(grid, dens_direct.density, dens_model.density)))
    (out_dir / "summary.json").write_text(serialize.dump_json({
        "schema_version": serialize.SCHEMA_VERSION,
        "true_value": truth, "true_half_width": half_width,
        "k_direct": summary.argmin_rmse[DIRECT][0],
        "k_model": summary.argmin_rmse[MODEL_BASED][0],
        "bandwidth_direct": dens_direct.bandwidth,
        "bandwidth_model": dens_model.bandwidth,
    }))
    return {"summary": summary, "grid": grid}


def _scatter_study(out_dir: Path, seed: int) -> dict:
    model = _study_model(False, "shifted")
    series = simulate_series(model, STUDY_N, RngState(seed).substream(_SCATTER_STREAM))
    phi_hat = fit_ar1(series)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "scatter.csv").write_text(serialize.dump_csv(
        ["x_prev", "x_cur"], zip(series[:-1], series[1:])))
    (out_dir / "fit.json").write_text(serialize.dump_json({
        "schema_version": serialize.SCHEMA_VERSION, "phi_hat": phi_hat, "n": STUDY_N}))
    return {"phi_hat": phi_hat}


def _power_study(out_dir: Path, replicates: int, seed: int) -> dict:
    root = RngState(seed).substream(_POWER_STREAM)
    power = test_power_experiment(_study_model(False, "shifted"), STUDY_N,
                                  replicates, root.substream(0))
    size = test_power_experiment(_study_model(True, "shifted"), STUDY_N,
                                 replicates, root.substream(1))
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "power.json").write_text(serialize.dump_json({
        "schema_version": serialize.SCHEMA_VERSION,
        "nonlinear_power": power.to_dict(),
        "linear_size": size.to_dict(),
    }))
    return {"power": power, "size": size}


def run_preset(name: str, out_dir, replicates: int | None = None,
               seed: int = DEFAULT_SEED, scale: str = "desk",
               workers: int = 1) -> dict:
    """Run one named study preset, writing its outputs under ``out_dir``."""
    if name not in PRESETS:
        raise ConfigurationError(f"unknown preset {name!r}; choose from {PRESETS}")
    if scale not in TRUTH_PROTOCOL:
        raise ConfigurationError("scale must be 'desk' or 'paper'")
    out = Path(out_dir)
    if name in ("table1", "figure1"):
        return _quantile_study(True, out, replicates or 500, seed, scale, workers)
    if name in ("table2", "figure3"):
        return _quantile_study(False, out, replicates or 500, seed, scale, workers)
    if name == "figure4":
        return _density_study(out, replicates or 500, seed, scale, workers)
    if name == "figure2-scatter":
        return _scatter_study(out, seed)
    return _power_study(out, replicates or 2000, seed)
