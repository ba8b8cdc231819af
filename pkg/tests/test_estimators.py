from fractions import Fraction

import compas
import pytest

from compas_fpp.estimators import ExpectationMethod
from compas_fpp.estimators import StripExpectation
from compas_fpp.estimators import check_standard_bound
from compas_fpp.estimators import event_a_probability
from compas_fpp.estimators import expected_distance_curve
from compas_fpp.estimators import expected_distance_exact
from compas_fpp.estimators import lower_bound_check
from compas_fpp.estimators import monte_carlo_distance
from compas_fpp.estimators import sandwich_check
from compas_fpp.estimators import stationary_start_expectation
from compas_fpp.estimators import strip_lower_bound
from compas_fpp.exceptions import CapacityError
from compas_fpp.exceptions import ContractError
from compas_fpp.exceptions import EstimationError
from compas_fpp.exceptions import ParameterError

# =============================================================================
# Exact expectations
# =============================================================================


def test_first_columns_by_hand():
    eps = Fraction(1, 2)
    assert expected_distance_exact(1, eps, 1, exact=True).value == 1 + 2 * eps
    assert expected_distance_exact(1, eps, 2, exact=True).value == Fraction(7, 2)
    for e in (Fraction(1, 10), Fraction(2, 5)):
        assert expected_distance_exact(2, e, 2, exact=True).value == 2 + 2 * e * (2 - e)


def test_curve_extremes():
    assert expected_distance_curve(3, 0.0, 6) == [float(n) for n in range(7)]
    closed = expected_distance_curve(3, 1.0, 9)
    assert closed == [2 * n + n % 2 for n in range(10)]


def test_float_and_rational_curves_agree():
    approximate = expected_distance_curve(2, 0.2, 40)
    exact = expected_distance_curve(2, Fraction(1, 5), 40, exact=True)
    assert all(isinstance(value, Fraction) for value in exact)
    for a, b in zip(approximate, exact):
        assert a == pytest.approx(float(b), abs=1e-9)


def test_stationary_start_line():
    expectation = stationary_start_expectation(1, Fraction(1, 2), 7, exact=True)
    assert expectation.nu_exact == Fraction(3, 7)
    assert expectation.value == 10
    assert expectation.method == ExpectationMethod.STATIONARY_START
    assert strip_lower_bound(1, 0.5) == pytest.approx(1 + 3 / 7)


def test_expectation_contracts():
    with pytest.raises(ContractError):
        StripExpectation(1, 0.5, 10, 9.0, ExpectationMethod.MONTE_CARLO)
    with pytest.raises(CapacityError):
        expected_distance_curve(8, 0.3, 5)
    with pytest.raises(CapacityError):
        expected_distance_curve(4, 0.3, 5, exact=True)
    with pytest.raises(ParameterError):
        expected_distance_curve(2, 0.3, -1)


def test_expectation_json_round_trip():
    expectation = expected_distance_exact(1, Fraction(1, 2), 2, exact=True)
    copy = compas.json_loads(compas.json_dumps(expectation))
    assert copy.value == Fraction(7, 2)
    assert copy.method == ExpectationMethod.EXACT_CHAIN


def test_sandwich_float():
    report = sandwich_check(2, 0.3, 120)
    assert report.violations == []
    assert report.decreasing_ratio
    assert min(report.lower_gaps) >= -1e-9
    assert max(report.lower_gaps) <= 4 + 1e-9


def test_sandwich_rational_small():
    report = sandwich_check(2, Fraction(1, 5), 60, exact=True)
    assert report.tolerance == 0.0
    assert report.violations == []
    assert report.decreasing_ratio


@pytest.mark.slow
def test_sandwich_rational_acceptance_scale():
    report = sandwich_check(3, Fraction(1, 5), 500, exact=True)
    assert report.violations == []
    assert report.decreasing_ratio


# =============================================================================
# Monte Carlo
# =============================================================================


def test_monte_carlo_is_independent_of_workers():
    a = monte_carlo_distance(2, 0.3, 15, 300, seed=4, workers=1, batch=64)
    b = monte_carlo_distance(2, 0.3, 15, 300, seed=4, workers=3, batch=64)
    assert a.value == b.value
    assert a.stderr == b.stderr
    assert a.replicas == 300


def test_monte_carlo_agrees_with_the_exact_chain():
    exact = expected_distance_exact(2, 0.3, 20).value
    estimate = monte_carlo_distance(2, 0.3, 20, 4000, seed=11)
    assert abs(estimate.value - exact) < 5 * estimate.stderr


def test_monte_carlo_all_closed():
    estimate = monte_carlo_distance(3, 1.0, 7, 50)
    assert estimate.value == 15
    assert estimate.stderr == 0.0


def test_monte_carlo_parameters():
    with pytest.raises(ParameterError):
        monte_carlo_distance(2, 0.3, 10, 1)
    with pytest.raises(ParameterError):
        monte_carlo_distance(0, 0.3, 10, 100)
    with pytest.raises(ParameterError):
        monte_carlo_distance(2, 1.3, 10, 100)


# =============================================================================
# Plane against strip
# =============================================================================


def test_lower_bound_check_small():
    report = lower_bound_check(6, 0.3, seed=2, replicas=40)
    assert report.passed
    assert report.replicas == 40
    assert report.mean_ratio >= 1.0
    assert report.finite <= 40


def test_lower_bound_check_all_open():
    report = lower_bound_check(5, 0.0, replicas=3)
    assert report.passed
    assert report.finite == 3
    assert report.mean_ratio == 1.0


@pytest.mark.slow
def test_lower_bound_check_acceptance_scale():
    report = lower_bound_check(30, 0.3, seed=0, replicas=1000)
    assert report.violations == 0


# =============================================================================
# Event A
# =============================================================================


def test_event_a_probability_extremes():
    assert event_a_probability(2, 10, 0.0, samples=500).failures == 0
    assert event_a_probability(2, 10, 1.0, samples=500).failures == 500


def test_event_a_probability_is_reproducible():
    a = event_a_probability(3, 20, 0.05, samples=3000, seed=1, workers=1, batch=512)
    b = event_a_probability(3, 20, 0.05, samples=3000, seed=1, workers=4, batch=512)
    assert a.failures == b.failures
    assert 0 < a.probability < 1
    assert a.within_bound()
    assert a.sharp_bound < a.bound


def test_event_a_within_bound_at_k4():
    for eps in (0.01, 0.02):
        estimate = event_a_probability(4, 50, eps, samples=20000, seed=3)
        assert estimate.within_bound()


def test_standard_bound_on_event_a():
    report = check_standard_bound(2, 20, 0.05, accepted=100, seed=0)
    assert report.passed
    assert report.accepted == 100
    assert report.sampled >= 100
    assert report.max_excess is not None and report.max_excess <= 6


def test_standard_bound_budget():
    with pytest.raises(EstimationError):
        check_standard_bound(3, 60, 0.5, accepted=10, max_samples=1000, batch=1000)


@pytest.mark.slow
def test_standard_bound_acceptance_scale():
    report = check_standard_bound(3, 60, 0.05, accepted=1000, seed=0)
    assert report.passed
