"""Closed forms of the stationary pair probability and their comparison with exact solves."""

import logging
import math
from fractions import Fraction
from typing import List
from typing import Optional

from compas.data import Data

from compas_fpp.exceptions import CapacityError
from compas_fpp.exceptions import DegenerateChainError
from compas_fpp.exceptions import ParameterError
from compas_fpp.tasep.state import Rate
from compas_fpp.tasep.state import to_fraction
from compas_fpp.tasep.stationary import EXACT_MAX_K
from compas_fpp.tasep.stationary import stationary_exact

LOG = logging.getLogger(__name__)

EXACT = "exact"
FLOAT = "float"
AGREE = "AGREE"
DISCREPANT = "DISCREPANT"
AGREEMENT_TOLERANCE = 1e-8


def _check_eps(eps) -> None:
    if not 0 <= eps <= 1:
        raise ParameterError("eps must lie in [0, 1]: {}".format(eps))


def binomial_row(K: int) -> List[int]:
    """``C(K, 0) ... C(K, K)`` by the multiplicative recurrence, in exact integers.

    Examples
    --------
    >>> binomial_row(4)
    [1, 4, 6, 4, 1]

    """
    row = [1]
    for k in range(K):
        row.append(row[-1] * (K - k) // (k + 1))
    return row


def a_eps(K: int, eps: Rate, mode: str = EXACT) -> Rate:
    """The sum :math:`A_\\varepsilon(K) = \\frac{1}{K} \\sum_{k=1}^{K} \\binom{K}{k} \\binom{K}{k+1} (1 - \\varepsilon)^k`.

    Parameters
    ----------
    K : int
        Positive integer.
    eps : float | Fraction
    mode : {"exact", "float"}, optional
        Rational arithmetic (floats are read through their decimal representation) or floating point.

    Returns
    -------
    Fraction | float

    Examples
    --------
    >>> a_eps(1, 0.3)
    Fraction(0, 1)
    >>> a_eps(2, Fraction(1, 4))
    Fraction(3, 4)

    """
    if int(K) != K or K < 1:
        raise ParameterError("K must be a positive integer: {}".format(K))
    _check_eps(eps)
    row = binomial_row(K)
    if mode == EXACT:
        q = 1 - to_fraction(eps)
        total = sum((row[k] * row[k + 1] * q**k for k in range(1, K)), Fraction(0))
        return total / K
    if mode == FLOAT:
        q = 1.0 - float(eps)
        try:
            terms = [float(row[k] * row[k + 1]) * q**k for k in range(1, K)]
        except OverflowError:
            raise CapacityError("A_eps({}) overflows floating point, use the exact mode.".format(K))
        return math.fsum(terms) / K
    raise ParameterError("Unknown mode {!r}, expected 'exact' or 'float'.".format(mode))


def nu_pair_formula(K: int, eps: Rate, mode: str = FLOAT) -> Rate:
    """The closed form :math:`A_\\varepsilon(K) / (\\varepsilon A_\\varepsilon(K) + A_\\varepsilon(K + 1))`, exactly as stated.

    Raises
    ------
    DegenerateChainError
        At ``eps = 1`` where numerator and denominator vanish.

    Examples
    --------
    >>> nu_pair_formula(2, 0, mode="exact")
    Fraction(1, 4)

    """
    _check_eps(eps)
    numerator = a_eps(K, eps, mode)
    epsilon = to_fraction(eps) if mode == EXACT else float(eps)
    denominator = epsilon * numerator + a_eps(K + 1, eps, mode)
    if denominator == 0:
        raise DegenerateChainError("The closed form is 0/0 at eps = {}.".format(eps))
    return numerator / denominator


def nu_limit_K(eps: float) -> float:
    """Large K limit :math:`(1 - \\sqrt{1 - \\varepsilon}) / (2 \\varepsilon)`, ``1/4`` at ``eps = 0``.

    Evaluated as :math:`1 / (2 (1 + \\sqrt{1 - \\varepsilon}))`, which has no cancellation for small eps.

    Examples
    --------
    >>> nu_limit_K(1.0)
    0.5
    >>> nu_limit_K(0.0)
    0.25

    """
    if not 0 <= eps <= 1:
        raise ParameterError("eps must lie in [0, 1]: {}".format(eps))
    return 1.0 / (2.0 * (1.0 + math.sqrt(1.0 - float(eps))))


class NuComparison(Data):
    """Closed form against the exact stationary value, for one K."""

    @property
    def __data__(self):
        return {
            "K": self.K,
            "eps": self.eps,
            "formula": self.formula,
            "exact": self.exact,
            "residual": self.residual,
            "status": self.status,
        }

    def __init__(self, K: int, eps: float, formula: float, exact: float, residual: float, status: str, name: Optional[str] = None):
        super(NuComparison, self).__init__(name=name)
        self.K = K
        self.eps = eps
        self.formula = formula
        self.exact = exact
        self.residual = residual
        self.status = status

    def __repr__(self):
        return "NuComparison(K={}, eps={}, formula={:.10f}, exact={:.10f}, {})".format(self.K, self.eps, self.formula, self.exact, self.status)

    @property
    def difference(self) -> float:
        return self.formula - self.exact


def nu_compare(eps: float, K_max: int = 6, K_min: int = 1, tolerance: float = AGREEMENT_TOLERANCE) -> List[NuComparison]:
    """Closed form and brute force stationary pair probability for ``K = K_min ... K_max``.

    Rows whose values differ by more than ``tolerance`` are marked ``DISCREPANT``.
    Nothing is corrected or dropped.
    """
    if K_min < 1 or K_max < K_min:
        raise ParameterError("Need 1 <= K_min <= K_max, got {} and {}.".format(K_min, K_max))
    if K_max > EXACT_MAX_K:
        raise CapacityError("Exact solves are limited to K <= {}, got K_max = {}.".format(EXACT_MAX_K, K_max))
    rows = []
    for K in range(K_min, K_max + 1):
        formula = float(nu_pair_formula(K, eps))
        distribution = stationary_exact(K, eps)
        exact = float(distribution.nu_pair)
        status = AGREE if abs(formula - exact) <= tolerance else DISCREPANT
        if status == DISCREPANT:
            LOG.warning("closed form and exact solve disagree at K=%d eps=%s: %.10f vs %.10f", K, eps, formula, exact)
        rows.append(NuComparison(K, float(eps), formula, exact, distribution.residual, status))
    return rows


class FormulaConvergence(Data):
    """Gaps between the closed form and its large K limit."""

    @property
    def __data__(self):
        return {"eps": self.eps, "limit": self.limit, "values": self.values, "tail": self.tail}

    def __init__(self, eps: float, limit: float, values: List[float], tail: int, name: Optional[str] = None):
        super(FormulaConvergence, self).__init__(name=name)
        self.eps = eps
        self.limit = limit
        self.values = list(values)
        self.tail = tail

    @property
    def gaps(self) -> List[float]:
        """``|formula(K) - limit|`` for ``K = 1 ... K_max``."""
        return [abs(value - self.limit) for value in self.values]

    @property
    def final_gap(self) -> float:
        return self.gaps[-1]

    @property
    def monotone_tail(self) -> bool:
        """True if the gap is non-increasing over the last ``tail`` values of K."""
        gaps = self.gaps[-self.tail :]
        return all(b <= a for a, b in zip(gaps, gaps[1:]))


def formula_convergence(eps: float, K_max: int = 200, tail: int = 20) -> FormulaConvergence:
    """Monitor the closed form against :func:`nu_limit_K` for ``K = 1 ... K_max`` in floating point."""
    if not 0 < eps < 1:
        raise ParameterError("eps must lie in (0, 1): {}".format(eps))
    if tail < 2 or K_max < tail:
        raise ParameterError("Need 2 <= tail <= K_max, got tail = {} and K_max = {}.".format(tail, K_max))
    values = [float(nu_pair_formula(K, eps)) for K in range(1, K_max + 1)]
    report = FormulaConvergence(float(eps), nu_limit_K(eps), values, tail)
    if not report.monotone_tail:
        LOG.warning("closed form at eps=%s does not approach its limit monotonically over the last %d values of K", eps, tail)
    return report
