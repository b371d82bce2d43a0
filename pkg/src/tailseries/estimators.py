"""Tail estimators: Hill, AR(1) fitting, residuals, and extreme quantiles.

Two competing extreme-quantile estimators are provided. The direct one
applies the Hill estimator and the power-law extrapolation to the
observations themselves. The model-based one first fits an AR(1)
coefficient, forms residuals, estimates the residual tail, and maps the
residual quantile to the series quantile through the fitted tail-ratio
factor ``1 - |phi_hat|**(1/gamma_hat)``.

Order-statistic conventions: ``X_{j:n}`` is the j-th smallest of n values;
the Hill estimator with k order statistics uses the top k values over the
threshold ``X_{n-k:n}`` (the (k+1)-th largest). All estimators also come in
a vectorized ``*_curve`` form evaluating a whole grid of k at once, which is
what the Monte Carlo harness and the error-vs-k figures use.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, DegenerateInputError, DomainError

CLAMP_FLOOR = 1e-6  # floor for 1 - |phi|**(1/gamma) when |phi_hat| >= 1


@dataclass(frozen=True)
class QuantileTarget:
    """Extreme-quantile target: estimate F^{-1}(1 - t) from n points using k
    upper order statistics."""

    t: float
    k: int
    n: int

    def __post_init__(self):
        if not (0 < self.t < 1):
            raise ConfigurationError("t must lie in (0, 1)")
        if not (1 <= self.k < self.n):
            raise ConfigurationError("k must satisfy 1 <= k < n")


@dataclass(frozen=True)
class ModelBasedFit:
    """Everything the model-based quantile estimator computed on the way."""

    estimate: float
    phi_hat: float
    gamma_hat: float
    anchor: float
    u: float
    clamped: bool


def hill(sample, k: int) -> float:
    """Hill estimate ``(1/k) * sum_{i=1..k} log(X_{n-i+1:n} / X_{n-k:n})``.

    Requires the threshold order statistic ``X_{n-k:n}`` to be positive. If
    all top k+1 values are tied the estimate is 0, which is valid.
    """
    x = np.asarray(sample, dtype=np.float64)
    n = x.size
    if not (1 <= k <= n - 1):
        raise DomainError(f"need k + 1 <= n order statistics, got k={k}, n={n}")
    top = np.sort(x)[n - k - 1:]
    threshold = top[0]
    if threshold <= 0:
        raise DomainError(f"threshold order statistic must be > 0, got {threshold:g}")
    return float(np.mean(np.log(top[1:])) - np.log(threshold))


def hill_curve(sample, ks) -> np.ndarray:
    """`hill` over a whole grid of k in one pass; NaN where the threshold
    order statistic is not positive."""
    x = np.asarray(sample, dtype=np.float64)
    ks = np.asarray(ks, dtype=np.int64)
    n = x.size
    if ks.size and not (ks.min() >= 1 and ks.max() <= n - 1):
        raise DomainError("every k must satisfy 1 <= k <= n - 1")
    desc = np.sort(x)[::-1]
    thresholds = desc[ks]  # (k+1)-th largest
    valid = thresholds > 0
    npos = int(np.count_nonzero(desc > 0))
    logs = np.zeros(n)
    logs[:npos] = np.log(desc[:npos])
    csum = np.cumsum(logs)
    out = np.full(ks.shape, np.nan)
    kv = ks[valid]
    out[valid] = csum[kv - 1] / kv - logs[kv]
    return out


def fit_ar1(series, center: bool = True) -> float:
    """Lag-1 sample autocorrelation (the default AR(1) coefficient estimate).

    With ``center=False`` the uncentered least-squares-through-origin slope
    ``sum X_t X_{t+1} / sum X_t**2`` is returned instead.
    """
    x = np.asarray(series, dtype=np.float64)
    if x.size < 3:
        raise DomainError("need at least 3 observations")
    d = x - x.mean() if center else x
    denom = float(np.dot(d, d))
    if denom == 0.0:
        raise DegenerateInputError("series is constant")
    return float(np.dot(d[:-1], d[1:]) / denom)


def residuals_ar1(series, phi_hat: float) -> np.ndarray:
    """Residuals ``X_t - phi_hat * X_{t-1}`` for t = 2..n (n-1 values)."""
    x = np.asarray(series, dtype=np.float64)
    if x.size < 2:
        raise DomainError("need at least 2 observations")
    return x[1:] - phi_hat * x[:-1]


def weissman_extrapolate(anchor: float, gamma: float, n: int, k: int, u: float) -> float:
    """Power-law quantile extrapolation ``anchor * (n*u/k)**(-gamma)``."""
    return anchor * (n * u / k) ** (-gamma)


def weissman_direct(series, target: QuantileTarget, use_abs: bool = False) -> float:
    """Direct extreme-quantile estimate ``X_{n-k:n} * (k/(n*t))**gamma_hat``
    with ``gamma_hat`` the Hill estimate on the series itself.

    With ``use_abs`` the Hill step runs on absolute values; the anchor order
    statistic stays on the raw observations.
    """
    x = np.asarray(series, dtype=np.float64)
    if x.size != target.n:
        raise ConfigurationError(f"series length {x.size} != target n {target.n}")
    gamma_hat = hill(np.abs(x) if use_abs else x, target.k)
    anchor = np.sort(x)[target.n - target.k - 1]
    if anchor <= 0:
        raise DomainError(f"anchor order statistic must be > 0, got {anchor:g}")
    return weissman_extrapolate(anchor, gamma_hat, target.n, target.k, target.t)


def weissman_direct_curve(series, ks, t: float, use_abs: bool = False) -> np.ndarray:
    """`weissman_direct` over a k grid; NaN where the Hill threshold fails."""
    x = np.asarray(series, dtype=np.float64)
    ks = np.asarray(ks, dtype=np.int64)
    gammas = hill_curve(np.abs(x) if use_abs else x, ks)
    anchors = np.sort(x)[::-1][ks]
    with np.errstate(invalid="ignore"):
        est = anchors * (ks / (x.size * t)) ** gammas
        return np.where(anchors > 0, est, np.nan)


def _tail_ratio_factor(phi_hat: float, gamma_hat) -> tuple[np.ndarray, np.ndarray]:
    """(1 - |phi_hat|**(1/gamma_hat), clamped flag), elementwise in gamma_hat."""
    g = np.asarray(gamma_hat, dtype=np.float64)
    r = abs(phi_hat)
    if r >= 1.0:
        factor = np.full(g.shape, CLAMP_FLOOR)
        return factor, np.ones(g.shape, dtype=bool)
    with np.errstate(divide="ignore"):
        factor = np.where(g > 0, 1.0 - r ** (1.0 / np.where(g > 0, g, 1.0)), 1.0)
    return factor, np.zeros(g.shape, dtype=bool)


def weissman_model_ar1(series, target: QuantileTarget, use_abs: bool = False,
                       center: bool = True) -> float:
    """Model-based extreme-quantile estimate via AR(1) residual analysis."""
    return weissman_model_ar1_fit(series, target, use_abs=use_abs, center=center).estimate


def weissman_model_ar1_fit(series, target: QuantileTarget, use_abs: bool = False,
                           center: bool = True) -> ModelBasedFit:
    """As `weissman_model_ar1`, returning the intermediate quantities.

    Steps: phi_hat = `fit_ar1`; residuals Z_t = X_t - phi_hat*X_{t-1};
    gamma_hat = Hill on the top k residual order statistics (absolute values
    when ``use_abs``); u = (1 - |phi_hat|**(1/gamma_hat)) * t; estimate =
    Z_{n-k:n-1} * (n*u/k)**(-gamma_hat). When |phi_hat| >= 1 the tail-ratio
    factor is clamped to ``CLAMP_FLOOR`` and flagged instead of failing, so
    Monte Carlo summaries are not censored.
    """
    x = np.asarray(series, dtype=np.float64)
    if x.size != target.n:
        raise ConfigurationError(f"series length {x.size} != target n {target.n}")
    phi_hat = fit_ar1(x, center=center)
    resid = residuals_ar1(x, phi_hat)
    hill_input = np.abs(resid) if use_abs else resid
    gamma_hat = hill(hill_input, target.k)
    # anchor is the k-th largest raw residual, one above the Hill threshold
    anchor = np.sort(resid)[resid.size - target.k]
    if anchor <= 0:
        raise DomainError(f"residual anchor order statistic must be > 0, got {anchor:g}")
    factor, clamped = _tail_ratio_factor(phi_hat, gamma_hat)
    u = float(factor) * target.t
    estimate = weissman_extrapolate(anchor, gamma_hat, target.n, target.k, u)
    return ModelBasedFit(estimate=float(estimate), phi_hat=phi_hat,
                         gamma_hat=gamma_hat, anchor=float(anchor), u=u,
                         clamped=bool(clamped))


def weissman_model_ar1_curve(series, ks, t: float, use_abs: bool = False,
                             center: bool = True) -> tuple[np.ndarray, float, np.ndarray]:
    """Model-based estimates over a k grid.

    Returns (estimates, phi_hat, clamped mask); NaN where the residual Hill
    threshold or the anchor order statistic is not positive.
    """
    x = np.asarray(series, dtype=np.float64)
    ks = np.asarray(ks, dtype=np.int64)
    phi_hat = fit_ar1(x, center=center)
    resid = residuals_ar1(x, phi_hat)
    hill_input = np.abs(resid) if use_abs else resid
    gammas = hill_curve(hill_input, ks)
    anchors = np.sort(resid)[::-1][ks - 1]
    factor, clamped = _tail_ratio_factor(phi_hat, gammas)
    with np.errstate(invalid="ignore"):
        u = factor * t
        est = anchors * (x.size * u / ks) ** (-gammas)
        est = np.where(anchors > 0, est, np.nan)
    return est, phi_hat, clamped
