"""Balanced two-sided Pareto innovation laws.

Two parametric families are supported, both with extreme value index
``gamma > 0`` and right-tail balance ``p`` in (0, 1]:

* ``two-sided-pareto`` (unshifted): survival ``p * x**(-1/gamma)`` for
  ``x >= 1`` and left tail ``F(-x) = (1-p) * x**(-1/gamma)`` for ``x >= 1``;
  no mass on (-1, 1).
* ``shifted-two-sided-pareto``: survival ``p * (x+1)**(-1/gamma)`` for
  ``x >= 0`` and ``F(-x) = (1-p) * (x+1)**(-1/gamma)`` for ``x >= 0``.

With ``p = 1/2`` these are the two symmetric laws used throughout the
simulation study. Sampling is inverse-CDF on a seeded `RngState`, so a given
seed reproduces the same draws everywhere.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, DomainError
from .rng import RngState

TWO_SIDED_PARETO = "two-sided-pareto"
SHIFTED_TWO_SIDED_PARETO = "shifted-two-sided-pareto"
CONSTANT = "constant"  # test hook, not a configurable law

_KINDS = (TWO_SIDED_PARETO, SHIFTED_TWO_SIDED_PARETO, CONSTANT)


@dataclass(frozen=True)
class InnovationSpec:
    """Parametric description of an innovation law."""

    kind: str
    gamma: float = float("nan")
    p: float = 1.0
    value: float = 0.0  # constant hook only

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ConfigurationError(f"unknown innovation kind {self.kind!r}")
        if self.kind != CONSTANT:
            if not (self.gamma > 0):
                raise ConfigurationError("gamma must be > 0")
            if not (0 < self.p <= 1):
                raise ConfigurationError("p must lie in (0, 1]")

    def to_json(self) -> dict:
        if self.kind == CONSTANT:
            raise ConfigurationError("constant innovations are a test hook and not serializable")
        return {"kind": self.kind, "gamma": self.gamma, "p": self.p}

    @classmethod
    def from_json(cls, obj: dict) -> "InnovationSpec":
        unknown = set(obj) - {"kind", "gamma", "p"}
        if unknown:
            raise ConfigurationError(f"unknown innovation keys {sorted(unknown)}")
        kind = obj.get("kind")
        if kind == CONSTANT:
            raise ConfigurationError("constant innovations are a test hook and cannot be configured")
        return cls(kind=kind, gamma=float(obj["gamma"]), p=float(obj["p"]))


def two_sided_pareto(gamma: float, p: float = 0.5) -> InnovationSpec:
    return InnovationSpec(TWO_SIDED_PARETO, gamma=gamma, p=p)


def shifted_two_sided_pareto(gamma: float, p: float = 0.5) -> InnovationSpec:
    return InnovationSpec(SHIFTED_TWO_SIDED_PARETO, gamma=gamma, p=p)


def constant_innovations(value: float) -> InnovationSpec:
    """Degenerate law Z = value. Test hook: rejected by config loaders."""
    return InnovationSpec(CONSTANT, value=value)


def quantile_fn(spec: InnovationSpec, u):
    """Generalized inverse CDF, ``inf{x : F(x) >= u}``, elementwise.

    At the unshifted law's flat CDF segment (u exactly ``1 - p``) the
    infimum convention puts the quantile at the lower support edge ``-1``.
    """
    u_arr = np.asarray(u, dtype=np.float64)
    if np.any(u_arr <= 0.0) or np.any(u_arr >= 1.0):
        raise DomainError("quantile argument must lie strictly inside (0, 1)")
    if spec.kind == CONSTANT:
        out = np.full_like(u_arr, spec.value)
        return float(out) if np.isscalar(u) else out
    g, p = spec.gamma, spec.p
    left = u_arr <= (1.0 - p)
    if spec.kind == TWO_SIDED_PARETO:
        lo = -(((1.0 - p) / u_arr) ** g)
        hi = (p / (1.0 - u_arr)) ** g
    else:
        lo = 1.0 - ((1.0 - p) / u_arr) ** g
        hi = (p / (1.0 - u_arr)) ** g - 1.0
    out = np.where(left, lo, hi)
    return float(out) if np.isscalar(u) else out


def survival_fn(spec: InnovationSpec, x):
    """Exact survival function ``P(Z > x)``, elementwise."""
    x_arr = np.asarray(x, dtype=np.float64)
    if spec.kind == CONSTANT:
        out = np.where(x_arr < spec.value, 1.0, 0.0)
        return float(out) if np.isscalar(x) else out
    g, p = spec.gamma, spec.p
    if spec.kind == TWO_SIDED_PARETO:
        right = np.where(x_arr >= 1.0, p * np.maximum(x_arr, 1.0) ** (-1.0 / g), p)
        left = 1.0 - (1.0 - p) * np.maximum(-x_arr, 1.0) ** (-1.0 / g)
        out = np.where(x_arr >= 1.0, right, np.where(x_arr >= -1.0, p, left))
    else:
        right = p * (np.maximum(x_arr, 0.0) + 1.0) ** (-1.0 / g)
        left = 1.0 - (1.0 - p) * (np.maximum(-x_arr, 0.0) + 1.0) ** (-1.0 / g)
        out = np.where(x_arr >= 0.0, right, left)
    return float(out) if np.isscalar(x) else out


def cdf_fn(spec: InnovationSpec, x):
    """Exact CDF ``P(Z <= x)``, evaluated branchwise (no cancellation in the tails)."""
    x_arr = np.asarray(x, dtype=np.float64)
    if spec.kind == CONSTANT:
        out = np.where(x_arr >= spec.value, 1.0, 0.0)
        return float(out) if np.isscalar(x) else out
    g, p = spec.gamma, spec.p
    if spec.kind == TWO_SIDED_PARETO:
        left = (1.0 - p) * np.maximum(-x_arr, 1.0) ** (-1.0 / g)
        right = 1.0 - p * np.maximum(x_arr, 1.0) ** (-1.0 / g)
        out = np.where(x_arr >= 1.0, right, np.where(x_arr >= -1.0, 1.0 - p, left))
    else:
        left = (1.0 - p) * (np.maximum(-x_arr, 0.0) + 1.0) ** (-1.0 / g)
        right = 1.0 - p * (np.maximum(x_arr, 0.0) + 1.0) ** (-1.0 / g)
        out = np.where(x_arr >= 0.0, right, left)
    return float(out) if np.isscalar(x) else out


def sample(spec: InnovationSpec, rng: RngState, n: int) -> np.ndarray:
    """``n`` independent draws by inverse CDF; advances ``rng`` deterministically.

    The constant hook consumes no randomness.
    """
    if n < 1:
        raise ConfigurationError("sample size must be >= 1")
    if spec.kind == CONSTANT:
        return np.full(n, spec.value)
    return quantile_fn(spec, rng.uniforms(n))
