"""
Why the nonlinear deviation is nearly invisible
===============================================

Fit a linear AR(1) to data from the log-perturbed nonlinear model and run
standard randomness tests on the residuals: the turning point test, the
difference-sign test, and the Ljung-Box portmanteau test. Their power
against this deviation is tiny -- which is exactly what makes the
model-based quantile estimator dangerous here (demo 03 / experiment
table2 show the resulting 7x RMSE blow-up).
"""

from tailseries import (
    RngState,
    difference_sign_test,
    fit_ar1,
    linear_ar1,
    nonlinear_ar1,
    portmanteau_test,
    residuals_ar1,
    shifted_two_sided_pareto,
    simulate_series,
    turning_point_test,
)
from tailseries import test_power_experiment as power_experiment

innov = shifted_two_sided_pareto(gamma=0.3, p=0.5)
nonlinear = nonlinear_ar1(phi1=0.8, delta=0.6, innovations=innov)

# One fitted realization: all three tests wave it through.
series = simulate_series(nonlinear, 2000, RngState(12))
resid = residuals_ar1(series, fit_ar1(series))
for name, report in (("turning point", turning_point_test(resid)),
                     ("difference sign", difference_sign_test(resid)),
                     ("portmanteau h=20", portmanteau_test(resid, 20))):
    verdict = "reject" if report.reject_at_5pct else "accept"
    print(f"{name:18s} statistic {report.statistic:8.2f}  p = {report.p_value:.3f}  -> {verdict}")

# Rejection rates over replicates: power barely above the nominal size.
# (The full study uses 2000 replicates; see `tailseries experiment power`.)
replicates = 300
power = power_experiment(nonlinear, 2000, replicates, RngState(13))
print(f"\nrejection rates over {replicates} nonlinear replicates (size 0.05):")
print(f"  turning point    {power.turning_point:.3f}")
print(f"  difference sign  {power.difference_sign:.3f}")
print(f"  best portmanteau {power.portmanteau_max:.3f} at h = {power.portmanteau_best_h}")

size = power_experiment(linear_ar1(0.8, innov), 2000, replicates, RngState(14))
print(f"\nfalse-alarm rates under the true linear model:")
print(f"  turning point    {size.turning_point:.3f}")
print(f"  difference sign  {size.difference_sign:.3f}")
print(f"  portmanteau h=20 {float(size.portmanteau_by_h[19]):.3f}")
