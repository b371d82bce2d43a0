"""
Three heavy-tailed time-series models
=====================================

Linear AR(1), its log-perturbed nonlinear cousin, and the stochastic
recurrence equation X_t = A_t X_{t-1} + B_t. The nonlinear model looks
almost linear to the naked eye (and to residual tests, see demo 06), yet it
breaks the tail relation the model-based quantile estimator relies on. The
SRE has a power-law tail whose exponent comes from the moment equation
E[A^kappa] = 1, not from the tail of the inputs.
"""

import numpy as np

from tailseries import (
    RngState,
    SREDriver,
    TwoPointLaw,
    fit_ar1,
    linear_ar1,
    nonlinear_ar1,
    simulate_series,
    solve_kappa,
    sre_model,
    shifted_two_sided_pareto,
)

innov = shifted_two_sided_pareto(gamma=0.3, p=0.5)

linear = linear_ar1(phi1=0.8, innovations=innov)
nonlinear = nonlinear_ar1(phi1=0.8, delta=0.6, innovations=innov)

x_lin = simulate_series(linear, 2000, RngState(7))
x_non = simulate_series(nonlinear, 2000, RngState(7))

# Fitting a linear AR(1) to the nonlinear series gives a perfectly plausible
# coefficient near 0.98 -- nothing looks wrong.
print("fitted AR(1) coefficient, linear model:   ", round(fit_ar1(x_lin), 4))
print("fitted AR(1) coefficient, nonlinear model:", round(fit_ar1(x_non), 4))
print("sample maxima:", round(x_lin.max(), 2), "vs", round(x_non.max(), 2))

# The SRE: a two-point multiplier with E[A] = 1 forces kappa = 1, so the
# stationary tail is ~ c/x regardless of the constant additive part.
driver = SREDriver(TwoPointLaw(a_up=2.0, a_down=0.5, p_up=1.0 / 3.0))
kappa = solve_kappa(driver)
print("\nKesten exponent kappa:", round(kappa, 12))

series = simulate_series(sre_model(driver, burnin=1000), 500_000, RngState(8))
print("x * P(X > x) should flatten to a constant:")
for x in (20.0, 50.0, 100.0, 200.0):
    print(f"  x = {x:6.0f}: {x * float(np.mean(series > x)):.3f}")
