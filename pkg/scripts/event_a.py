from compas_fpp.estimators import check_standard_bound
from compas_fpp.estimators import event_a_probability

# =============================================================================
# Probability of A^c against the union bounds
# =============================================================================

for K, n, eps in ((4, 50, 0.01), (4, 50, 0.02), (3, 60, 0.05)):
    estimate = event_a_probability(K, n, eps, samples=100000, seed=0, workers=4)
    print("K={} n={} eps={}: {:.4e} +- {:.1e}  sharp {:.4e}  bound {:.4e}".format(K, n, eps, estimate.probability, estimate.stderr, estimate.sharp_bound, estimate.bound))

# =============================================================================
# Standard against cross model on A
# =============================================================================

report = check_standard_bound(3, 60, 0.05, accepted=1000, seed=0)
print(report, "max excess", report.max_excess)
