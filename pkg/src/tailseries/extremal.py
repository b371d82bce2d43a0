"""Extremal-dependence quantities of the stochastic recurrence equation.

All four quantities are functionals of the geometric random walk ``W_j`` and
are evaluated by Monte Carlo over a `WalkEnsemble`:

* extremal index:       theta = 1 - E min(U_1, 1),  U_1 = max_{j>=1} W_j
* cluster sizes:        theta_k = E(min(U_{k-1},1) - min(U_k,1)),
                        pi_k = (theta_k - theta_{k+1}) / theta,
                        with U_k the k-th largest walk value, min(U_0,1) = 1
* Hill asymptotic var:  kappa**-2 * (1 + 2 * sum_{j>=1} E min(W_j, 1))
* joint exceedances:    E min (or max) over j of x_j**-kappa * W_j, W_0 = 1

Every point estimate is returned with its Monte Carlo standard error. Walk
tails beyond the ensemble horizon are controlled through the fractional
moment ``r = E[A**(kappa/2)] < 1``: ``min(w,1) <= sqrt(w)`` gives
``E min(W_j,1) <= r**j``, so the omitted contribution is geometrically
bounded and reported.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, HorizonTooSmallError
from .simulate import WalkEnsemble

DEFAULT_TAIL_TOL = 1e-2


@dataclass(frozen=True)
class ExtremalSummary:
    """Extremal index and cluster-size distribution with Monte Carlo errors."""

    theta: float
    theta_k: np.ndarray       # k = 1..kmax
    pi_k: np.ndarray          # k = 1..kmax
    mc_stderr: dict           # {"theta": float, "theta_k": array, "pi_k": array}
    horizon_remainder: float  # E min(U_{kmax+1}, 1) = sum of theta_k beyond kmax+1

    def mean_cluster_size(self) -> float:
        """Telescoped estimate of sum_k k*pi_k = (sum_k theta_k) / theta.

        The infinite theta_k sum is 1; truncating at kmax keeps
        ``sum_{k<=kmax} theta_k + horizon_remainder = 1 - theta_{kmax+1}``,
        so the estimate carries a downward bias of theta_{kmax+1}/theta. The
        naive truncated sum of k*pi_k would instead lose the whole k-tail of
        the cluster-size law, which is far larger for slowly mixing walks.
        """
        return float((self.theta_k.sum() + self.horizon_remainder) / self.theta)


@dataclass(frozen=True)
class JointExceedanceQuery:
    """Thresholds x_0..x_{k-1} and whether all or some must be exceeded."""

    x: tuple
    mode: str

    def __post_init__(self):
        if self.mode not in ("all", "some"):
            raise ConfigurationError("mode must be 'all' or 'some'")
        if len(self.x) < 1:
            raise ConfigurationError("query needs at least one threshold")
        if any(not (xi > 0) for xi in self.x):
            raise ConfigurationError("all thresholds must be > 0")


@dataclass(frozen=True)
class HillAvarSRE:
    """Hill asymptotic variance under the SRE, with MC error and tail bound."""

    variance: float
    stderr: float
    tail_bound: float  # bound on the variance mass omitted beyond the horizon


def _mean_se(values: np.ndarray) -> tuple[float, float]:
    n = values.size
    se = float(values.std(ddof=1) / np.sqrt(n)) if n > 1 else float("nan")
    return float(values.mean()), se


def extremal_index(ensemble: WalkEnsemble) -> tuple[float, float]:
    """(theta, Monte Carlo stderr) from per-path maxima of the walk."""
    if ensemble.n_paths < 1:
        raise ConfigurationError("ensemble is empty")
    capped_max = np.minimum(ensemble.paths.max(axis=1), 1.0)
    mean, se = _mean_se(capped_max)
    return 1.0 - mean, se


def _top_order_stats(paths: np.ndarray, count: int) -> np.ndarray:
    """Top ``count`` values of each path, column c = (c+1)-th largest."""
    part = np.partition(paths, paths.shape[1] - count, axis=1)[:, -count:]
    return -np.sort(-part, axis=1)


def cluster_size_probs(ensemble: WalkEnsemble, kmax: int) -> ExtremalSummary:
    """Limiting cluster-size probabilities pi_1..pi_kmax and theta_1..theta_kmax."""
    if kmax < 1:
        raise ConfigurationError("kmax must be >= 1")
    if ensemble.horizon <= kmax:
        raise ConfigurationError(
            f"horizon {ensemble.horizon} must exceed kmax {kmax} (U_(kmax+1) needed)")
    p = ensemble.n_paths
    top = _top_order_stats(ensemble.paths, kmax + 1)
    capped = np.empty((p, kmax + 2))
    capped[:, 0] = 1.0  # min(U_0, 1) convention
    np.minimum(top, 1.0, out=capped[:, 1:])
    diffs = capped[:, :-1] - capped[:, 1:]         # per-path theta_k terms, k=1..kmax+1
    theta_all = diffs.mean(axis=0)
    theta_all_se = diffs.std(axis=0, ddof=1) / np.sqrt(p)
    theta = float(theta_all[0])
    if theta == 0.0:
        raise ConfigurationError("estimated theta is 0; cluster sizes are undefined")
    pi_terms = diffs[:, :-1] - diffs[:, 1:]        # per-path (theta_k - theta_{k+1})
    pi_k = pi_terms.mean(axis=0) / theta
    pi_se = pi_terms.std(axis=0, ddof=1) / (np.sqrt(p) * theta)
    return ExtremalSummary(
        theta=theta,
        theta_k=theta_all[:kmax].copy(),
        pi_k=pi_k,
        mc_stderr={"theta": float(theta_all_se[0]),
                   "theta_k": theta_all_se[:kmax].copy(),
                   "pi_k": pi_se},
        horizon_remainder=float(np.minimum(top[:, kmax], 1.0).mean()),
    )


def _tail_rate(ensemble: WalkEnsemble) -> float:
    """Geometric rate r with E min(W_j, 1) <= r**j for j past the horizon."""
    if ensemble.driver is not None:
        return float(ensemble.driver.law.moment(ensemble.kappa / 2.0))
    # hand-built ensemble: estimate the per-step rate from the last column
    last = np.sqrt(ensemble.paths[:, -1]).mean()
    return float(last ** (1.0 / ensemble.horizon))


def hill_avar_sre(ensemble: WalkEnsemble, tail_tol: float = DEFAULT_TAIL_TOL) -> HillAvarSRE:
    """Asymptotic variance of the Hill estimator for the SRE solution."""
    kappa = ensemble.kappa
    per_path = np.minimum(ensemble.paths, 1.0).sum(axis=1)
    mean, se = _mean_se(per_path)
    r = _tail_rate(ensemble)
    if r < 1.0:
        omitted = r ** (ensemble.horizon + 1) / (1.0 - r)
    else:
        omitted = float("inf")
    scale = kappa ** -2
    bound = 2.0 * scale * omitted
    if bound > tail_tol:
        raise HorizonTooSmallError(
            f"omitted-tail bound {bound:.3g} exceeds tolerance {tail_tol:g}; "
            f"increase the horizon")
    return HillAvarSRE(variance=scale * (1.0 + 2.0 * mean),
                       stderr=2.0 * scale * se, tail_bound=bound)


def joint_exceedance(ensemble: WalkEnsemble, query: JointExceedanceQuery) -> tuple[float, float]:
    """Limiting joint-exceedance functional (limit, Monte Carlo stderr)."""
    k = len(query.x)
    if k > ensemble.horizon + 1:
        raise ConfigurationError(f"query length {k} exceeds horizon + 1")
    weights = np.asarray(query.x, dtype=np.float64) ** (-ensemble.kappa)
    if k == 1:  # only W_0 = 1 enters: the mean is exactly x_0**-kappa
        return float(weights[0]), 0.0
    segment = np.empty((ensemble.n_paths, k))
    segment[:, 0] = 1.0  # W_0
    if k > 1:
        segment[:, 1:] = ensemble.paths[:, :k - 1]
    scaled = segment * weights[None, :]
    reduced = scaled.min(axis=1) if query.mode == "all" else scaled.max(axis=1)
    return _mean_se(reduced)
