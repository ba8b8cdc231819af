from compas_fpp.tasep import formula_convergence
from compas_fpp.tasep import nu_compare
from compas_fpp.tasep import nu_pair_simulated

# =============================================================================
# Closed form against exact solves
# =============================================================================

eps = 0.19

for row in nu_compare(eps, K_max=6):
    print("K={}  formula={:.10f}  exact={:.10f}  {}".format(row.K, row.formula, row.exact, row.status))

# =============================================================================
# Large K
# =============================================================================

convergence = formula_convergence(eps, K_max=200)
print("limit {:.9f}, gap at K=200 {:.2e}".format(convergence.limit, convergence.final_gap))

distribution = nu_pair_simulated(50, eps, burn_in=100000, samples=1000000, seed=1)
print("simulated K=50: {:.6f} +- {:.6f}".format(distribution.nu_pair, distribution.stderr))
