"""The totally asymmetric simple exclusion process with parallel update and open boundaries."""

from __future__ import print_function
from __future__ import absolute_import
from __future__ import division

from .state import TasepState
from .state import TasepRates
from .state import to_fraction
from .dynamics import enabled_events
from .dynamics import apply_events
from .dynamics import tasep_step
from .dynamics import coupled_tasep_step
from .dynamics import transition_entries
from .dynamics import transition_matrix
from .stationary import Method
from .stationary import StationaryDistribution
from .stationary import stationary_exact
from .stationary import nu_pair_simulated
from .stationary import nu_pair_from_probabilities
from .formulas import a_eps
from .formulas import nu_pair_formula
from .formulas import nu_limit_K
from .formulas import nu_compare
from .formulas import formula_convergence

__all__ = [
    "TasepState",
    "TasepRates",
    "to_fraction",
    "enabled_events",
    "apply_events",
    "tasep_step",
    "coupled_tasep_step",
    "transition_entries",
    "transition_matrix",
    "Method",
    "StationaryDistribution",
    "stationary_exact",
    "nu_pair_simulated",
    "nu_pair_from_probabilities",
    "a_eps",
    "nu_pair_formula",
    "nu_limit_K",
    "nu_compare",
    "formula_convergence",
]
