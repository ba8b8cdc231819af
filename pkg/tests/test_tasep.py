from fractions import Fraction

import compas
import numpy
import pytest

from compas_fpp.exceptions import CapacityError
from compas_fpp.exceptions import ContractError
from compas_fpp.exceptions import DegenerateChainError
from compas_fpp.exceptions import ParameterError
from compas_fpp.rng import make_rng
from compas_fpp.strip import EdgeColumn
from compas_fpp.strip import StripGeometry
from compas_fpp.tasep import Method
from compas_fpp.tasep import StationaryDistribution
from compas_fpp.tasep import TasepRates
from compas_fpp.tasep import TasepState
from compas_fpp.tasep import a_eps
from compas_fpp.tasep import coupled_tasep_step
from compas_fpp.tasep import enabled_events
from compas_fpp.tasep import formula_convergence
from compas_fpp.tasep import nu_compare
from compas_fpp.tasep import nu_limit_K
from compas_fpp.tasep import nu_pair_formula
from compas_fpp.tasep import nu_pair_simulated
from compas_fpp.tasep import stationary_exact
from compas_fpp.tasep import tasep_step
from compas_fpp.tasep import to_fraction
from compas_fpp.tasep import transition_entries
from compas_fpp.tasep import transition_matrix
from compas_fpp.tasep.formulas import AGREE
from compas_fpp.tasep.formulas import DISCREPANT
from compas_fpp.tasep.formulas import binomial_row


def nu_pair_k1(eps):
    # two sites: pi(00, 10, 01, 11) is proportional to (1 - eps, 2 - eps, 1, 1 - eps)
    return (2 - eps) / (5 - 3 * eps)


# =============================================================================
# States and rates
# =============================================================================


def test_state_codes():
    state = TasepState([1, 0, 1, 1])
    assert state.K == 2
    assert state.particles == 3
    assert state.to_int() == 0b1101
    assert TasepState.from_int(0b1101, 2) == state
    assert state.occupied(-1) and not state.occupied(0)
    assert repr(state) == "TasepState(1011)"
    with pytest.raises(ParameterError):
        state.position(3)
    with pytest.raises(ContractError):
        TasepState([1, 0, 1])


def test_state_json_round_trip():
    state = TasepState.step_configuration(3)
    assert compas.json_loads(compas.json_dumps(state)) == state


def test_rates_keep_fractions():
    rates = TasepRates(Fraction(1, 3), 0.5, Fraction(2, 7))
    copy = compas.json_loads(compas.json_dumps(rates))
    assert copy == rates
    assert isinstance(copy.alpha, Fraction)
    assert not rates.is_exact
    assert TasepRates.from_eps(Fraction(1, 2)).is_exact
    assert TasepRates.from_eps(0.0).is_degenerate
    with pytest.raises(ParameterError):
        TasepRates(1.5, 0.5, 0.5)


def test_to_fraction_reads_decimals():
    assert to_fraction(0.3) == Fraction(3, 10)
    assert to_fraction("1/7") == Fraction(1, 7)
    assert to_fraction(2) == Fraction(2)


# =============================================================================
# Dynamics
# =============================================================================


def test_enabled_events():
    assert enabled_events(numpy.array([0, 1, 0, 1], dtype=bool)).tolist() == [True, False, True, False, True]
    assert enabled_events(numpy.array([1, 1], dtype=bool)).tolist() == [False, False, True]


def test_step_with_explicit_draws():
    rates = TasepRates.from_eps(0.5)
    state = TasepState([0, 1, 0, 1])
    assert tasep_step(state, rates, draws=[0.9] * 5) == state
    assert tasep_step(state, rates, draws=[0.1] * 5) == TasepState([1, 0, 1, 0])
    with pytest.raises(ContractError):
        tasep_step(state, rates, draws=[0.1] * 4)
    with pytest.raises(ParameterError):
        tasep_step(state, rates)


def test_step_conserves_particles_in_the_bulk():
    rates = TasepRates.from_eps(0.6)
    rng = make_rng(4)
    state = TasepState.step_configuration(3)
    for _ in range(200):
        following = tasep_step(state, rates, rng=rng)
        entered = int(following.occupancy[0] and not state.occupancy[0])
        exited = int(state.occupancy[-1] and not following.occupancy[-1])
        assert following.particles == state.particles + entered - exited
        state = following


def test_coupled_step_fires_on_closed_edges():
    geometry = StripGeometry(2)
    state = TasepState([1, 0, 0, 1])
    assert coupled_tasep_step(state, EdgeColumn.all_open(geometry)) == state
    assert coupled_tasep_step(state, EdgeColumn.all_closed(geometry)) == TasepState([0, 1, 0, 0])
    assert coupled_tasep_step(state, EdgeColumn([1, 0, 1, 1, 1])) == TasepState([0, 1, 0, 1])


@pytest.mark.parametrize("K", [1, 2, 3])
def test_transition_matrix_is_stochastic(K):
    P = transition_matrix(K, TasepRates.from_eps(0.3))
    assert P.shape == (4**K, 4**K)
    assert numpy.allclose(numpy.asarray(P.sum(axis=1)).ravel(), 1.0)
    assert (P.data > 0).all()


def test_transition_entries_match_the_sparse_matrix():
    K = 2
    rates = TasepRates.from_eps(Fraction(1, 3))
    P = transition_matrix(K, rates).toarray()
    dense = numpy.zeros_like(P)
    rows = [Fraction(0)] * 4**K
    for source, target, probability in transition_entries(K, rates):
        assert isinstance(probability, Fraction)
        dense[source, target] += float(probability)
        rows[source] += probability
    assert all(total == 1 for total in rows)
    assert numpy.allclose(dense, P)


# =============================================================================
# Stationary law
# =============================================================================


def test_stationary_two_sites_rational():
    distribution = stationary_exact(1, Fraction(1, 2), exact=True)
    assert distribution.nu_pair == Fraction(3, 7)
    assert distribution.rational == [Fraction(1, 7), Fraction(3, 7), Fraction(2, 7), Fraction(1, 7)]
    assert distribution.residual == 0.0
    assert distribution.method == Method.EXACT_SOLVE


@pytest.mark.parametrize("eps", [0.1, 0.3, 0.7])
def test_stationary_two_sites_float(eps):
    distribution = stationary_exact(1, eps)
    assert distribution.nu_pair == pytest.approx(nu_pair_k1(eps), abs=1e-9)
    assert distribution.residual <= 1e-10
    assert distribution.probabilities.sum() == pytest.approx(1.0)


@pytest.mark.parametrize("K", [2, 3])
def test_stationary_float_agrees_with_rational(K):
    exact = stationary_exact(K, Fraction(1, 5), exact=True)
    approximate = stationary_exact(K, 0.2)
    assert float(exact.nu_pair) == pytest.approx(approximate.nu_pair, abs=1e-9)
    assert numpy.allclose(numpy.array([float(value) for value in exact.rational]), approximate.probabilities, atol=1e-9)


def test_stationary_residuals_up_to_k5():
    for K in range(1, 6):
        distribution = stationary_exact(K, 0.3)
        assert distribution.residual <= 1e-10
        assert 0 < distribution.nu_pair < 1


def test_stationary_json_round_trip():
    distribution = stationary_exact(1, Fraction(1, 3), exact=True)
    copy = compas.json_loads(compas.json_dumps(distribution))
    assert isinstance(copy, StationaryDistribution)
    assert copy.nu_pair == distribution.nu_pair
    assert copy.rational == distribution.rational
    assert copy.eps == pytest.approx(1 / 3)


def test_stationary_errors():
    with pytest.raises(DegenerateChainError):
        stationary_exact(2, 0.0)
    with pytest.raises(DegenerateChainError):
        stationary_exact(2, 1.0)
    with pytest.raises(CapacityError):
        stationary_exact(8, 0.3)
    with pytest.raises(CapacityError):
        stationary_exact(4, 0.3, exact=True)
    with pytest.raises(ParameterError):
        stationary_exact(0, 0.3)


def test_simulation_matches_two_site_law():
    distribution = nu_pair_simulated(1, 0.3, burn_in=1000, samples=50000, seed=3)
    assert distribution.method == Method.SIMULATION
    assert distribution.samples == 50000
    assert distribution.stderr > 0
    assert abs(distribution.nu_pair - nu_pair_k1(0.3)) < 5 * distribution.stderr + 1e-3


def test_simulation_is_reproducible():
    a = nu_pair_simulated(2, 0.4, burn_in=100, samples=5000, seed=9, batch_size=500)
    b = nu_pair_simulated(2, 0.4, burn_in=100, samples=5000, seed=9, batch_size=500)
    assert a.nu_pair == b.nu_pair
    assert a.stderr == b.stderr
    with pytest.raises(ParameterError):
        nu_pair_simulated(2, 0.4, burn_in=-1, samples=10)


def test_simulation_matches_exact_solve_four_sites():
    exact = stationary_exact(2, 0.3).nu_pair
    simulated = nu_pair_simulated(2, 0.3, burn_in=2000, samples=200000, seed=5)
    assert abs(simulated.nu_pair - exact) < 5 * simulated.stderr + 1e-3


@pytest.mark.slow
@pytest.mark.parametrize("K", [1, 2, 3, 4, 5])
def test_simulation_matches_exact_solve(K):
    exact = stationary_exact(K, 0.3).nu_pair
    simulated = nu_pair_simulated(K, 0.3, burn_in=10000, samples=10**6, seed=K)
    assert abs(simulated.nu_pair - exact) < 5 * simulated.stderr + 5e-4


# =============================================================================
# Closed forms
# =============================================================================


def test_binomial_row():
    assert binomial_row(5) == [1, 5, 10, 10, 5, 1]
    assert binomial_row(40)[20] == 137846528820


def test_a_eps_values():
    assert a_eps(1, Fraction(1, 3)) == 0
    assert a_eps(2, 0) == 1
    assert a_eps(2, Fraction(1, 4)) == Fraction(3, 4)
    assert a_eps(3, 0) == 4
    for eps in (Fraction(1, 10), Fraction(1, 2)):
        assert a_eps(2, eps) == 1 - eps


def test_a_eps_float_agrees_with_exact():
    for K in (5, 20, 40, 60):
        exact = a_eps(K, Fraction(3, 10))
        approximate = a_eps(K, 0.3, mode="float")
        assert approximate == pytest.approx(float(exact), rel=1e-12)
    with pytest.raises(ParameterError):
        a_eps(3, 0.3, mode="decimal")


def test_nu_pair_formula_values():
    assert nu_pair_formula(1, 0.3) == 0
    assert nu_pair_formula(2, 0, mode="exact") == Fraction(1, 4)
    with pytest.raises(DegenerateChainError):
        nu_pair_formula(3, 1.0)


def test_nu_limit():
    assert nu_limit_K(0.0) == 0.25
    assert nu_limit_K(1.0) == 0.5
    assert nu_limit_K(0.19) == pytest.approx(0.263157894, abs=1e-9)
    with pytest.raises(ParameterError):
        nu_limit_K(-0.1)


def test_nu_compare_surfaces_the_two_site_discrepancy():
    rows = nu_compare(0.3, K_max=4)
    assert [row.K for row in rows] == [1, 2, 3, 4]
    first = rows[0]
    assert first.status == DISCREPANT
    assert first.formula == 0
    assert first.exact == pytest.approx(nu_pair_k1(0.3))
    assert all(row.status in (AGREE, DISCREPANT) for row in rows)
    assert all(row.residual <= 1e-10 for row in rows)
    with pytest.raises(CapacityError):
        nu_compare(0.3, K_max=8)


def test_formula_convergence_towards_the_limit():
    report = formula_convergence(0.19, K_max=120, tail=20)
    assert report.limit == pytest.approx(nu_limit_K(0.19))
    assert len(report.values) == 120
    assert report.final_gap < report.gaps[10]
    with pytest.raises(ParameterError):
        formula_convergence(0.0)


@pytest.mark.slow
def test_simulated_nu_at_k50_matches_limit():
    distribution = nu_pair_simulated(50, 0.19, burn_in=100000, samples=10**7, seed=1)
    assert abs(distribution.nu_pair - 0.263157894) < 0.01


@pytest.mark.slow
def test_simulated_nu_small_eps_k100():
    distribution = nu_pair_simulated(100, 0.01, burn_in=200000, samples=10**7, seed=2)
    assert 0.24 <= distribution.nu_pair <= 0.26
