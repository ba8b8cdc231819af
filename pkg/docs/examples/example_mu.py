from compas_fpp.plane import estimate_mu

# =============================================================================
# Input
# =============================================================================

n = 200
replicas = 400

# =============================================================================
# Estimates
# =============================================================================

for eps in (0.02, 0.05, 0.1):
    estimate = estimate_mu(eps, n, replicas=replicas, seed=0, workers=4)
    reference = estimate.reference
    print(
        "eps={:.2f}  mu={:.5f} +- {:.5f}  slope={:.3f}  1 + eps/2={:.5f}  admissible={:.3f}".format(
            eps,
            estimate.mu_hat,
            estimate.stderr,
            estimate.slope,
            reference["first_order"],
            estimate.admissible_fraction,
        )
    )
