"""Exact and Monte Carlo estimators of strip distances and event A."""

from __future__ import print_function
from __future__ import absolute_import
from __future__ import division

from .strip import ExpectationMethod
from .strip import StripExpectation
from .strip import expected_distance_curve
from .strip import expected_distance_exact
from .strip import stationary_start_expectation
from .strip import strip_lower_bound
from .strip import SandwichReport
from .strip import sandwich_check
from .strip import monte_carlo_distance
from .strip import LowerBoundReport
from .strip import lower_bound_check
from .events import EventAEstimate
from .events import event_a_probability
from .events import StandardBoundReport
from .events import check_standard_bound

__all__ = [
    "ExpectationMethod",
    "StripExpectation",
    "expected_distance_curve",
    "expected_distance_exact",
    "stationary_start_expectation",
    "strip_lower_bound",
    "SandwichReport",
    "sandwich_check",
    "monte_carlo_distance",
    "LowerBoundReport",
    "lower_bound_check",
    "EventAEstimate",
    "event_a_probability",
    "StandardBoundReport",
    "check_standard_bound",
]
