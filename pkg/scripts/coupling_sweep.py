from compas_fpp.correspondence import verify_coupling_exhaustive
from compas_fpp.correspondence import verify_coupling_replicas

# =============================================================================
# Exhaustive
# =============================================================================

for K in (1, 2, 3):
    report = verify_coupling_exhaustive(K)
    print("exhaustive K={}: {} steps, {} mismatches".format(K, report.steps_checked, report.mismatches))

# =============================================================================
# Sampled
# =============================================================================

for K in range(1, 6):
    for eps in (0.1, 0.3, 0.5):
        report = verify_coupling_replicas(K, eps, 10000, seed=0, replicas=4, workers=4)
        print("K={} eps={}: {} steps, {} mismatches".format(K, eps, report.steps_checked, report.mismatches))
