"""Generators for the three time-series models and the multiplicative walks.

Models:

* linear AR(1):     X_t = phi1 * X_{t-1} + Z_t
* nonlinear AR(1):  X_t = phi1 * X_{t-1}
                          + delta * sgn(X_{t-1}) * log(max(|X_{t-1}|, 1)) + Z_t
* SRE:              X_t = A_t * X_{t-1} + B_t  with i.i.d. positive (A_t, B_t)

plus the geometric random walk ``W_j = prod_{i<=j} A_i**kappa`` that drives
all extremal-dependence quantities of the SRE, and the solver for the moment
exponent ``kappa`` with ``E A**kappa = 1``.

Draw protocol (frozen): AR variants start at 0 and consume one innovation per
step, ``burnin + n`` steps in total. The SRE consumes one block of uniforms
for the multiplier sequence and, if the additive part is random, one block
for it; the start value is the first additive draw. Walk path ``p`` consumes
draws 1..J of substream ``p`` of the supplied stream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq
from scipy.signal import lfilter
from scipy.special import ndtri

from . import distributions as dists
from .distributions import InnovationSpec
from .errors import ConfigurationError, NoRootError, SimulationError
from .rng import RngState, uniforms_for_bases

LINEAR_AR1 = "linear-ar1"
NONLINEAR_AR1 = "nonlinear-ar1"
SRE = "sre"

_KAPPA_BRACKET = (1e-6, 64.0)
_PATH_BLOCK = 8192


@dataclass(frozen=True)
class TwoPointLaw:
    """P{A = a_up} = p_up, P{A = a_down} = 1 - p_up."""

    a_up: float
    a_down: float
    p_up: float

    def __post_init__(self):
        if not (self.a_up > 0 and self.a_down > 0):
            raise ConfigurationError("two-point support must be positive")
        if not (0 < self.p_up < 1):
            raise ConfigurationError("p_up must lie in (0, 1)")

    def mean_log(self) -> float:
        return self.p_up * np.log(self.a_up) + (1 - self.p_up) * np.log(self.a_down)

    def moment(self, s: float) -> float:
        return self.p_up * self.a_up**s + (1 - self.p_up) * self.a_down**s

    def prob_above_one(self) -> float:
        return (self.p_up if self.a_up > 1 else 0.0) + ((1 - self.p_up) if self.a_down > 1 else 0.0)

    def sample_from_uniforms(self, u: np.ndarray) -> np.ndarray:
        return np.where(u < self.p_up, self.a_up, self.a_down)

    def to_json(self) -> dict:
        return {"kind": "two-point", "a_up": self.a_up, "a_down": self.a_down, "p_up": self.p_up}


@dataclass(frozen=True)
class LognormalLaw:
    """log A ~ Normal(mu, sigma**2)."""

    mu: float
    sigma: float

    def __post_init__(self):
        if not (self.sigma > 0):
            raise ConfigurationError("sigma must be > 0")

    def mean_log(self) -> float:
        return self.mu

    def moment(self, s: float) -> float:
        return float(np.exp(s * self.mu + 0.5 * (s * self.sigma) ** 2))

    def prob_above_one(self) -> float:
        return 1.0  # unbounded support

    def sample_from_uniforms(self, u: np.ndarray) -> np.ndarray:
        return np.exp(self.mu + self.sigma * ndtri(u))

    def to_json(self) -> dict:
        return {"kind": "lognormal", "mu": self.mu, "sigma": self.sigma}


def _law_from_json(obj: dict):
    kind = obj.get("kind")
    if kind == "two-point":
        keys = {"kind", "a_up", "a_down", "p_up"}
        if set(obj) - keys:
            raise ConfigurationError(f"unknown two-point keys {sorted(set(obj) - keys)}")
        return TwoPointLaw(float(obj["a_up"]), float(obj["a_down"]), float(obj["p_up"]))
    if kind == "lognormal":
        keys = {"kind", "mu", "sigma"}
        if set(obj) - keys:
            raise ConfigurationError(f"unknown lognormal keys {sorted(set(obj) - keys)}")
        return LognormalLaw(float(obj["mu"]), float(obj["sigma"]))
    raise ConfigurationError(f"unknown multiplier law {kind!r}")


@dataclass(frozen=True)
class SREDriver:
    """Law of the i.i.d. pairs (A_t, B_t) of the stochastic recurrence equation.

    ``b_constant`` and ``b_spec`` are mutually exclusive; a random additive
    part must have positive support (an `InnovationSpec` with p = 1).
    """

    law: TwoPointLaw | LognormalLaw
    b_constant: float | None = 1.0
    b_spec: InnovationSpec | None = None

    def __post_init__(self):
        if (self.b_constant is None) == (self.b_spec is None):
            raise ConfigurationError("exactly one of b_constant / b_spec is required")
        if self.b_constant is not None and not (self.b_constant > 0):
            raise ConfigurationError("constant additive part must be > 0")
        if self.b_spec is not None and self.b_spec.p != 1.0:
            raise ConfigurationError("random additive part must have positive support (p = 1)")

    def check_drift(self):
        if not (self.law.mean_log() < 0):
            raise ConfigurationError(
                f"multiplier law must have E[log A] < 0, got {self.law.mean_log():.6g}")

    def sample_b(self, rng: RngState, n: int) -> np.ndarray:
        if self.b_constant is not None:
            return np.full(n, self.b_constant)
        return dists.sample(self.b_spec, rng, n)

    def to_json(self) -> dict:
        b = ({"kind": "constant", "value": self.b_constant}
             if self.b_constant is not None else self.b_spec.to_json())
        return {"law": self.law.to_json(), "b": b}

    @classmethod
    def from_json(cls, obj: dict) -> "SREDriver":
        keys = {"law", "b"}
        if set(obj) - keys:
            raise ConfigurationError(f"unknown driver keys {sorted(set(obj) - keys)}")
        law = _law_from_json(obj["law"])
        b = obj.get("b", {"kind": "constant", "value": 1.0})
        if b.get("kind") == "constant":
            return cls(law, b_constant=float(b["value"]))
        return cls(law, b_constant=None, b_spec=InnovationSpec.from_json(b))


@dataclass(frozen=True)
class SeriesModel:
    """One of the three time-series models, with its burn-in."""

    variant: str
    phi1: float = 0.0
    delta: float = 0.0
    innovations: InnovationSpec | None = None
    driver: SREDriver | None = None
    burnin: int = 10_000

    def __post_init__(self):
        if self.burnin < 0:
            raise ConfigurationError("burnin must be >= 0")
        if self.variant == LINEAR_AR1:
            if not (abs(self.phi1) < 1):
                raise ConfigurationError("linear AR(1) requires |phi1| < 1")
            if self.innovations is None:
                raise ConfigurationError("innovations required")
        elif self.variant == NONLINEAR_AR1:
            if self.innovations is None:
                raise ConfigurationError("innovations required")
        elif self.variant == SRE:
            if self.driver is None:
                raise ConfigurationError("driver required")
            self.driver.check_drift()
        else:
            raise ConfigurationError(f"unknown model variant {self.variant!r}")

    def to_json(self) -> dict:
        if self.variant == SRE:
            return {"variant": self.variant, "driver": self.driver.to_json(),
                    "burnin": self.burnin}
        out = {"variant": self.variant, "phi1": self.phi1,
               "innovations": self.innovations.to_json(), "burnin": self.burnin}
        if self.variant == NONLINEAR_AR1:
            out["delta"] = self.delta
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "SeriesModel":
        variant = obj.get("variant")
        if variant == SRE:
            keys = {"variant", "driver", "burnin"}
            if set(obj) - keys:
                raise ConfigurationError(f"unknown model keys {sorted(set(obj) - keys)}")
            return cls(SRE, driver=SREDriver.from_json(obj["driver"]),
                       burnin=int(obj.get("burnin", 10_000)))
        if variant in (LINEAR_AR1, NONLINEAR_AR1):
            keys = {"variant", "phi1", "delta", "innovations", "burnin"}
            if set(obj) - keys:
                raise ConfigurationError(f"unknown model keys {sorted(set(obj) - keys)}")
            if variant == LINEAR_AR1 and "delta" in obj:
                raise ConfigurationError("delta is only valid for the nonlinear model")
            return cls(variant, phi1=float(obj.get("phi1", 0.0)),
                       delta=float(obj.get("delta", 0.0)),
                       innovations=InnovationSpec.from_json(obj["innovations"]),
                       burnin=int(obj.get("burnin", 10_000)))
        raise ConfigurationError(f"unknown model variant {variant!r}")


def linear_ar1(phi1: float, innovations: InnovationSpec, burnin: int = 10_000) -> SeriesModel:
    return SeriesModel(LINEAR_AR1, phi1=phi1, innovations=innovations, burnin=burnin)


def nonlinear_ar1(phi1: float, delta: float, innovations: InnovationSpec,
                  burnin: int = 10_000) -> SeriesModel:
    return SeriesModel(NONLINEAR_AR1, phi1=phi1, delta=delta,
                       innovations=innovations, burnin=burnin)


def sre_model(driver: SREDriver, burnin: int = 10_000) -> SeriesModel:
    return SeriesModel(SRE, driver=driver, burnin=burnin)


def _check_finite(x: np.ndarray, what: str):
    bad = ~np.isfinite(x)
    if bad.any():
        raise SimulationError(f"non-finite value in {what}", step=int(np.argmax(bad)))


def simulate_series(model: SeriesModel, n: int, rng: RngState) -> np.ndarray:
    """Simulate ``n`` observations after discarding the model's burn-in."""
    if n < 1:
        raise ConfigurationError("series length must be >= 1")
    total = model.burnin + n
    if model.variant == LINEAR_AR1:
        z = dists.sample(model.innovations, rng, total)
        x = lfilter([1.0], [1.0, -model.phi1], z)
        _check_finite(x, "linear AR(1) recursion")
        return x[model.burnin:]
    if model.variant == NONLINEAR_AR1:
        z = dists.sample(model.innovations, rng, total).tolist()
        x = np.empty(total)
        phi, delta = model.phi1, model.delta
        state = 0.0
        log = math.log
        for t in range(total):
            s = 1.0 if state > 0 else (-1.0 if state < 0 else 0.0)
            state = phi * state + delta * s * log(max(abs(state), 1.0)) + z[t]
            x[t] = state
        _check_finite(x, "nonlinear AR(1) recursion")
        return x[model.burnin:]
    # SRE
    a = model.driver.law.sample_from_uniforms(rng.uniforms(total)).tolist()
    b = model.driver.sample_b(rng, total + 1).tolist()
    x = np.empty(total)
    state = b[0]
    for t in range(total):
        state = a[t] * state + b[t + 1]
        x[t] = state
    _check_finite(x, "stochastic recurrence")
    return x[model.burnin:]


@dataclass
class WalkEnsemble:
    """Monte Carlo paths of the geometric walk ``W_j``, ``j = 1..horizon``.

    ``paths[p, j-1]`` holds ``W_j`` of path ``p``. ``driver`` is kept so
    downstream consumers can bound truncated tails exactly; hand-built test
    ensembles may leave it as None.
    """

    kappa: float
    horizon: int
    n_paths: int
    paths: np.ndarray
    driver: SREDriver | None = None


def simulate_walks(driver: SREDriver, kappa: float, horizon: int, n_paths: int,
                   rng: RngState) -> WalkEnsemble:
    """Generate ``n_paths`` independent walk paths, one substream per path."""
    if not (kappa > 0):
        raise ConfigurationError("kappa must be > 0")
    if horizon < 1 or n_paths < 1:
        raise ConfigurationError("horizon and n_paths must be >= 1")
    driver.check_drift()
    paths = np.empty((n_paths, horizon))
    for start in range(0, n_paths, _PATH_BLOCK):
        count = min(_PATH_BLOCK, n_paths - start)
        u = uniforms_for_bases(rng.child_bases(count, start=start), horizon)
        a = driver.law.sample_from_uniforms(u)
        np.cumprod(a**kappa, axis=1, out=paths[start:start + count])
    _check_finite(paths.ravel(), "walk ensemble")
    return WalkEnsemble(kappa=kappa, horizon=horizon, n_paths=n_paths,
                        paths=paths, driver=driver)


def solve_kappa(driver: SREDriver) -> float:
    """Positive root of ``E A**kappa = 1``, accurate to |E A**kappa - 1| <= 1e-10.

    The map ``kappa -> E A**kappa`` is strictly convex with value 1 and
    negative slope at 0, so under ``E log A < 0`` and ``P(A > 1) > 0`` there
    is exactly one positive root. Lognormal multipliers use the closed form
    ``-2*mu/sigma**2``.
    """
    law = driver.law
    if not (law.mean_log() < 0):
        raise NoRootError(f"no positive root: E[log A] = {law.mean_log():.6g} is not < 0")
    if law.prob_above_one() == 0.0:
        raise NoRootError("P(A > 1) = 0: moment function never returns to 1")
    if isinstance(law, LognormalLaw):
        return -2.0 * law.mu / law.sigma**2

    def g(s: float) -> float:
        return law.moment(s) - 1.0

    lo, cap = _KAPPA_BRACKET
    if g(lo) >= 0:
        raise NoRootError(f"no sign change: E A**{lo:g} >= 1")
    hi = lo
    while g(hi) <= 0:
        hi *= 2.0
        if hi > cap:
            raise NoRootError(f"no root found in (0, {cap:g}]")
    kappa = brentq(g, hi / 2.0, hi, xtol=1e-14, rtol=8.9e-16)
    if abs(g(kappa)) > 1e-10:
        raise NoRootError("root refinement failed to reach tolerance 1e-10")
    return float(kappa)
