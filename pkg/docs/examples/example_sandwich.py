from fractions import Fraction

from compas_fpp.estimators import monte_carlo_distance
from compas_fpp.estimators import sandwich_check

# =============================================================================
# Input
# =============================================================================

K = 3
eps = Fraction(1, 5)
n_max = 500

# =============================================================================
# Exact chain
# =============================================================================

report = sandwich_check(K, eps, n_max, exact=True)

# =============================================================================
# Monte Carlo at a few columns
# =============================================================================

for n in (50, 100, 200, 500):
    estimate = monte_carlo_distance(K, float(eps), n, 20000, seed=1, workers=4)
    exact = report.values[n]
    print("n={:4d}  exact={:.6f}  mc={:.6f} +- {:.6f}  lower gap={:.6f}".format(n, float(exact), estimate.value, estimate.stderr, float(report.lower_gaps[n])))

print("violations:", report.violations)
print("E D(n, 0) / n non-increasing:", report.decreasing_ratio)
