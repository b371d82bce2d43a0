"""Closed-form tail quantities for heavy-tailed linear time series.

Everything here is a deterministic formula evaluator: the limiting ratio of
the series tail to the innovation tail, the asymptotic variance of the Hill
estimator applied directly to the observations, the ratio of minimal
asymptotic RMSEs between the residual-based and the direct Hill estimator
for an AR(1), and the second-order tail constants of a linear filter driven
by shifted-Pareto-type innovations.

Infinite coefficient sequences enter through finite truncations; for
AR(1)-type geometric sequences the truncation horizon is chosen from the
requested tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, DomainError

_MAX_AR1_HORIZON = 200_000


@dataclass(frozen=True)
class CoefficientSequence:
    """Finite list of moving-average coefficients ``(index j, psi_j)``."""

    pairs: tuple[tuple[int, float], ...]
    truncation_tol: float = 1e-12

    def __post_init__(self):
        if not self.pairs:
            raise DomainError("coefficient sequence must be nonempty")
        if all(v == 0.0 for _, v in self.pairs):
            raise DomainError("at least one coefficient must be nonzero")
        if not (self.truncation_tol > 0):
            raise ConfigurationError("truncation_tol must be > 0")
        idx = [j for j, _ in self.pairs]
        if len(set(idx)) != len(idx):
            raise ConfigurationError("duplicate coefficient indices")

    @classmethod
    def from_values(cls, values, start: int = 0, truncation_tol: float = 1e-12):
        pairs = tuple((start + i, float(v)) for i, v in enumerate(values))
        return cls(pairs, truncation_tol)

    @classmethod
    def ar1(cls, phi: float, gamma: float, truncation_tol: float = 1e-12):
        """Geometric sequence ``psi_j = phi**j`` truncated for tolerance ``tol``.

        The horizon guarantees both ``|psi_j|**(1/gamma) < tol`` past the end
        and that the weighted tail sums entering `tail_ratio_linear` /
        `hill_avar_linear` are below ``tol``, so doubling the horizon moves
        those evaluators by less than ``tol``.
        """
        if not (abs(phi) < 1):
            raise DomainError("|phi| must be < 1")
        if not (gamma > 0):
            raise DomainError("gamma must be > 0")
        if phi == 0.0:
            return cls(((0, 1.0),), truncation_tol)
        q = abs(phi) ** (1.0 / gamma)
        horizon = max(1, int(np.ceil(np.log(truncation_tol) / np.log(q))))
        # extend until sum_{m>J} (m+2)*q**m  <=  (J+3)*q**(J+1)/(1-q)**2 < tol/8
        while horizon < _MAX_AR1_HORIZON:
            bound = (horizon + 3) * q ** (horizon + 1) / (1.0 - q) ** 2
            if bound <= truncation_tol / 8.0:
                break
            horizon = int(horizon * 1.3) + 1
        horizon = min(horizon, _MAX_AR1_HORIZON)
        values = np.power(phi, np.arange(horizon + 1, dtype=np.float64))
        return cls.from_values(values, 0, truncation_tol)

    def min_index(self) -> int:
        return min(j for j, _ in self.pairs)


def _split_weights(seq: CoefficientSequence, gamma: float):
    """(|psi_j|**(1/gamma) split by sign) as arrays aligned with seq.pairs."""
    vals = np.array([v for _, v in seq.pairs])
    w = np.abs(vals) ** (1.0 / gamma)
    return vals, w


def tail_ratio_linear(seq: CoefficientSequence, gamma: float, p: float) -> float:
    """Limit of (series tail) / (innovation tail) for a linear filter.

    Equals ``(1/p) * sum_j [ p*psi_j**(1/gamma)*1{psi_j>0}
    + (1-p)*|psi_j|**(1/gamma)*1{psi_j<0} ]`` over the truncated sequence.
    """
    if not (gamma > 0):
        raise DomainError("gamma must be > 0")
    if not (0 < p <= 1):
        raise DomainError("p must lie in (0, 1]")
    vals, w = _split_weights(seq, gamma)
    total = p * w[vals > 0].sum() + (1.0 - p) * w[vals < 0].sum()
    return float(total / p)


def tail_ratio_ar1(phi: float, gamma: float, p: float = 0.5) -> float:
    """Closed form of `tail_ratio_linear` for ``psi_j = phi**j``."""
    if not (abs(phi) < 1):
        raise DomainError("|phi| must be < 1")
    if not (gamma > 0):
        raise DomainError("gamma must be > 0")
    q = abs(phi) ** (1.0 / gamma)
    if phi >= 0:
        return float(1.0 / (1.0 - q))
    return float((1.0 + q * (1.0 - p) / p) / (1.0 - q * q))


def hill_avar_linear(seq: CoefficientSequence, gamma: float) -> float:
    """Asymptotic variance of the Hill estimator applied to a linear series.

    ``gamma**2 * (1 + 2 * S / D)`` with
    ``S = sum_{j>=1} sum_{i>=0} min(|psi_j|**(1/g), |psi_{i+j}|**(1/g))`` and
    ``D = sum_{i>=0} |psi_i|**(1/g)``, over the truncated one-sided sequence.
    """
    if not (gamma > 0):
        raise DomainError("gamma must be > 0")
    if seq.min_index() < 0:
        raise DomainError("one-sided sequence required (indices >= 0)")
    jmax = max(j for j, _ in seq.pairs)
    w = np.zeros(jmax + 1)
    for j, v in seq.pairs:
        w[j] = abs(v) ** (1.0 / gamma)
    denom = w.sum()
    if not np.isfinite(denom) or denom <= 0:
        raise DomainError("normalizing coefficient sum is degenerate")
    num = 0.0
    for j in range(1, jmax + 1):
        num += np.minimum(w[j], w[j:]).sum()
    return float(gamma * gamma * (1.0 + 2.0 * num / denom))


def hill_avar_ar1(phi: float, gamma: float) -> float:
    """Closed form of `hill_avar_linear` for ``psi_j = phi**j``:
    ``gamma**2 * (1+|phi|**(1/gamma)) / (1-|phi|**(1/gamma))``."""
    if not (abs(phi) < 1):
        raise DomainError("|phi| must be < 1")
    if not (gamma > 0):
        raise DomainError("gamma must be > 0")
    q = abs(phi) ** (1.0 / gamma)
    return float(gamma * gamma * (1.0 + q) / (1.0 - q))


def rmse_ratio_ar1(phi: float, gamma: float) -> float:
    """Ratio of minimal asymptotic RMSEs, residual-based over direct Hill.

    Evaluates the formula exactly as printed:

        [ (1-|phi|**(1/g+1))**2
          / ((1-|phi|**(1/g))**2 * (1+|phi|**(1/g))**(2g)) ] ** (1/(2g+1))

    No correction is applied; see `RMSE_RATIO_REPORTED` for the reference
    value quoted for (0.8, 0.3), which this formula does not reproduce.
    """
    if not (abs(phi) < 1):
        raise DomainError("|phi| must be < 1")
    if not (gamma > 0):
        raise DomainError("gamma must be > 0")
    a = abs(phi)
    q = a ** (1.0 / gamma)
    num = (1.0 - a ** (1.0 / gamma + 1.0)) ** 2
    den = (1.0 - q) ** 2 * (1.0 + q) ** (2.0 * gamma)
    return float((num / den) ** (1.0 / (2.0 * gamma + 1.0)))


# Reference value quoted for (phi, gamma) = (0.8, 0.3). The printed formula
# evaluates to ~1.0643 there; both numbers are surfaced, never reconciled
# silently.
RMSE_RATIO_REPORTED = {(0.8, 0.3): 1.03}


@dataclass(frozen=True)
class SecondOrderTail:
    """Constants of the expansion F̄_Z(x) = x**(-1/g)*(c + d/x + o(1/x))
    and its left-tail analog with (c_tilde, d_tilde)."""

    c: float
    d: float
    c_tilde: float = 0.0
    d_tilde: float = 0.0

    def __post_init__(self):
        if not (self.c > 0):
            raise DomainError("c must be > 0")
        if self.c_tilde < 0:
            raise DomainError("c_tilde must be >= 0")


def shifted_pareto_tail(gamma: float, p: float = 0.5) -> SecondOrderTail:
    """Second-order constants of the shifted two-sided Pareto law:
    ``p*(x+1)**(-1/g) = x**(-1/g) * (p - (p/g)/x + o(1/x))``."""
    return SecondOrderTail(c=p, d=-p / gamma, c_tilde=1.0 - p, d_tilde=-(1.0 - p) / gamma)


def second_order_constants(seq: CoefficientSequence, gamma: float,
                           tail: SecondOrderTail) -> tuple[float, float]:
    """Second-order tail constants (d_psi, D_psi) of the filtered series.

    d_psi weights ``|psi_j|**(1/g)`` by c (positive coefficients) or c_tilde
    (negative ones); D_psi weights ``|psi_j|**(1/g+1)`` by c*d or
    c_tilde*d_tilde.
    """
    if not (gamma > 0):
        raise DomainError("gamma must be > 0")
    vals = np.array([v for _, v in seq.pairs])
    w1 = np.abs(vals) ** (1.0 / gamma)
    w2 = np.abs(vals) ** (1.0 / gamma + 1.0)
    pos, neg = vals > 0, vals < 0
    d_psi = tail.c * w1[pos].sum() + tail.c_tilde * w1[neg].sum()
    big_d_psi = tail.c * tail.d * w2[pos].sum() + tail.c_tilde * tail.d_tilde * w2[neg].sum()
    return float(d_psi), float(big_d_psi)
