"""Expected cross model distances on the strip.

The increment ``D(i + 1, 0) - D(i, 0)`` is 3 iff the particle on site 0 jumps to site 1,
which happens with probability ``eps`` whenever site 0 is occupied and site 1 empty. So

    E D(n, 0) = n + 2 eps sum_{i < n} P(Y_i has a particle on 0 and a hole on 1)

for the particle process ``Y`` started from the step configuration.
"""

import logging
import math
import time
from enum import Enum
from fractions import Fraction
from typing import List
from typing import Optional

import numpy
from compas.data import Data

from compas_fpp.exceptions import CapacityError
from compas_fpp.exceptions import ContractError
from compas_fpp.exceptions import ParameterError
from compas_fpp.graphs import as_length
from compas_fpp.graphs import single_source_lengths
from compas_fpp.plane.distances import cross_plane_distances
from compas_fpp.plane.window import PlaneWindow
from compas_fpp.rng import make_rng
from compas_fpp.stats import RunningStats
from compas_fpp.strip.cross import relax
from compas_fpp.strip.sampling import check_eps
from compas_fpp.strip.sampling import sample_flags
from compas_fpp.tasep.dynamics import transition_entries
from compas_fpp.tasep.dynamics import transition_matrix
from compas_fpp.tasep.state import Rate
from compas_fpp.tasep.state import TasepRates
from compas_fpp.tasep.state import TasepState
from compas_fpp.tasep.state import to_fraction
from compas_fpp.tasep.stationary import EXACT_MAX_K
from compas_fpp.tasep.stationary import RATIONAL_MAX_K
from compas_fpp.tasep.stationary import pair_mask
from compas_fpp.tasep.stationary import stationary_exact
from compas_fpp.workers import map_replicas

LOG = logging.getLogger(__name__)

MC_BATCH = 4096
SANDWICH_TOLERANCE = 1e-9


class ExpectationMethod(str, Enum):
    EXACT_CHAIN = "exact"
    MONTE_CARLO = "mc"
    STATIONARY_START = "stationary"


class StripExpectation(Data):
    """An expected cross model distance ``E D(n, 0)`` on the strip of half width K.

    Parameters
    ----------
    K : int
    eps : float
    n : int
    value : float | Fraction
    method : :class:`ExpectationMethod`
    stderr : float, optional
        Monte Carlo standard error.
    replicas : int, optional
    seed : int, optional
    nu_exact : float | Fraction, optional
        Stationary pair probability used by the stationary start.

    """

    @property
    def __data__(self):
        return {
            "K": self.K,
            "eps": self.eps,
            "n": self.n,
            "value": _encode(self.value),
            "method": self.method.value,
            "stderr": self.stderr,
            "replicas": self.replicas,
            "seed": self.seed,
            "nu_exact": _encode(self.nu_exact),
        }

    @classmethod
    def __from_data__(cls, data):
        return cls(
            data["K"],
            data["eps"],
            data["n"],
            _decode(data["value"]),
            ExpectationMethod(data["method"]),
            stderr=data.get("stderr"),
            replicas=data.get("replicas"),
            seed=data.get("seed"),
            nu_exact=_decode(data.get("nu_exact")),
        )

    def __init__(
        self,
        K: int,
        eps: float,
        n: int,
        value: Rate,
        method: ExpectationMethod,
        stderr: Optional[float] = None,
        replicas: Optional[int] = None,
        seed: Optional[int] = None,
        nu_exact: Optional[Rate] = None,
        name: Optional[str] = None,
    ):
        super(StripExpectation, self).__init__(name=name)
        self.K = K
        self.eps = eps
        self.n = n
        self.value = value
        self.method = ExpectationMethod(method)
        self.stderr = stderr
        self.replicas = replicas
        self.seed = seed
        self.nu_exact = nu_exact
        if value < n - 1e-9 * max(1, n):
            raise ContractError("An expected distance is at least n = {}: {}".format(n, value))
        if self.method == ExpectationMethod.EXACT_CHAIN and K > EXACT_MAX_K:
            raise ContractError("Exact chain values need K <= {}.".format(EXACT_MAX_K))

    def __repr__(self):
        return "StripExpectation(K={}, eps={}, n={}, method={}, value={})".format(self.K, self.eps, self.n, self.method.value, float(self.value))


def _encode(value):
    if isinstance(value, Fraction):
        return str(value)
    return value


def _decode(value):
    if isinstance(value, str):
        return Fraction(value)
    return value


def _check_exact(K: int, exact: bool) -> None:
    if int(K) != K or K < 1:
        raise ParameterError("The half width K must be a positive integer: {}".format(K))
    if K > EXACT_MAX_K:
        raise CapacityError("Exact chain propagation is limited to K <= {}, got K = {}.".format(EXACT_MAX_K, K))
    if exact and K > RATIONAL_MAX_K:
        raise CapacityError("Rational propagation is limited to K <= {}, got K = {}.".format(RATIONAL_MAX_K, K))


def _pair_probabilities_float(K: int, eps: float, n: int) -> List[float]:
    PT = transition_matrix(K, TasepRates.from_eps(eps)).T.tocsr()
    mask = pair_mask(K)
    p = numpy.zeros(PT.shape[0])
    p[TasepState.step_configuration(K).to_int()] = 1.0
    probabilities = []
    for _ in range(n):
        probabilities.append(float(p[mask].sum()))
        p = PT @ p
    return probabilities


def _pair_probabilities_exact(K: int, eps: Fraction, n: int) -> List[Fraction]:
    # Transition probabilities times denominator^(2K + 1) are integers,
    # so the law of Y_i is an integer vector over scale^i.
    scale = eps.denominator ** (2 * K + 1)
    entries = []
    for source, target, probability in transition_entries(K, TasepRates.from_eps(eps)):
        weight = probability * scale
        assert weight.denominator == 1
        entries.append((source, target, weight.numerator))
    pairs = numpy.flatnonzero(pair_mask(K)).tolist()
    counts = [0] * (1 << (2 * K))
    counts[TasepState.step_configuration(K).to_int()] = 1
    probabilities = []
    denominator = 1
    for _ in range(n):
        probabilities.append(Fraction(sum(counts[i] for i in pairs), denominator))
        following = [0] * len(counts)
        for source, target, weight in entries:
            if counts[source]:
                following[target] += counts[source] * weight
        counts = following
        denominator *= scale
    return probabilities


def expected_distance_curve(K: int, eps: Rate, n_max: int, exact: bool = False) -> List[Rate]:
    """``E D(n, 0)`` for ``n = 0 ... n_max`` by exact propagation of the particle process.

    Parameters
    ----------
    K : int
        At most ``EXACT_MAX_K``, or ``RATIONAL_MAX_K`` in rational arithmetic.
    eps : float | Fraction
    n_max : int
    exact : bool, optional
        Rational arithmetic.

    Returns
    -------
    list[float] | list[Fraction]

    """
    _check_exact(K, exact)
    check_eps(float(eps))
    if n_max < 0:
        raise ParameterError("n must be non-negative: {}".format(n_max))
    start = time.perf_counter()
    if exact:
        epsilon = to_fraction(eps)
        probabilities = _pair_probabilities_exact(K, epsilon, n_max)
        values = [Fraction(0)]
    else:
        epsilon = float(eps)
        probabilities = _pair_probabilities_float(K, epsilon, n_max)
        values = [0.0]
    total = 0
    for i, probability in enumerate(probabilities):
        total += probability
        values.append((i + 1) + 2 * epsilon * total)
    LOG.info("exact chain K=%d eps=%s up to n=%d in %.2fs", K, eps, n_max, time.perf_counter() - start)
    return values


def expected_distance_exact(K: int, eps: Rate, n: int, exact: bool = False) -> StripExpectation:
    """``E D(n, 0)`` for the cross model started from the origin, by exact chain propagation.

    Examples
    --------
    >>> expected_distance_exact(1, 0.5, 2, exact=True).value
    Fraction(7, 2)

    """
    value = expected_distance_curve(K, eps, n, exact)[-1]
    return StripExpectation(K, float(eps), n, value, ExpectationMethod.EXACT_CHAIN)


def stationary_start_expectation(K: int, eps: Rate, n: int, exact: bool = False) -> StripExpectation:
    """``n (1 + 2 eps nu)`` for the profile chain started from its stationary law.

    ``nu`` is the brute force stationary pair probability.
    """
    if n < 0:
        raise ParameterError("n must be non-negative: {}".format(n))
    distribution = stationary_exact(K, eps, exact=exact)
    epsilon = to_fraction(eps) if exact else float(eps)
    value = n * (1 + 2 * epsilon * distribution.nu_pair)
    return StripExpectation(K, float(eps), n, value, ExpectationMethod.STATIONARY_START, nu_exact=distribution.nu_pair)


def strip_lower_bound(K: int, eps: float) -> float:
    """``1 + 2 eps nu`` with the brute force stationary pair probability on the strip of half width K."""
    return 1.0 + 2.0 * float(eps) * float(stationary_exact(K, eps).nu_pair)


class SandwichReport(Data):
    """Gaps of the exact expectation to the stationary start line, for ``n = 0 ... n_max``.

    ``lower_gaps[n] = E D(n, 0) - n (1 + 2 eps nu)`` and ``upper_gaps[n] = n (1 + 2 eps nu) + 2K - E D(n, 0)``
    are both non-negative when the bounds hold.
    """

    @property
    def __data__(self):
        return {
            "K": self.K,
            "eps": _encode(self.eps),
            "values": [_encode(value) for value in self.values],
            "nu_exact": _encode(self.nu_exact),
            "tolerance": self.tolerance,
        }

    @classmethod
    def __from_data__(cls, data):
        return cls(data["K"], _decode(data["eps"]), [_decode(value) for value in data["values"]], _decode(data["nu_exact"]), data["tolerance"])

    def __init__(self, K: int, eps: Rate, values: List[Rate], nu_exact: Rate, tolerance: float, name: Optional[str] = None):
        super(SandwichReport, self).__init__(name=name)
        self.K = K
        self.eps = eps
        self.values = values
        self.nu_exact = nu_exact
        self.tolerance = tolerance

    @property
    def slope(self) -> Rate:
        epsilon = to_fraction(self.eps) if isinstance(self.nu_exact, Fraction) else float(self.eps)
        return 1 + 2 * epsilon * self.nu_exact

    @property
    def lower_gaps(self) -> List[Rate]:
        return [value - n * self.slope for n, value in enumerate(self.values)]

    @property
    def upper_gaps(self) -> List[Rate]:
        return [n * self.slope + 2 * self.K - value for n, value in enumerate(self.values)]

    @property
    def violations(self) -> List[int]:
        """Values of n where a bound fails."""
        return [n for n, (low, high) in enumerate(zip(self.lower_gaps, self.upper_gaps)) if low < -self.tolerance or high < -self.tolerance]

    @property
    def decreasing_ratio(self) -> bool:
        """True if ``E D(n, 0) / n`` is non-increasing in ``n >= 1``."""
        ratios = [value / n for n, value in enumerate(self.values) if n > 0]
        return all(b <= a + self.tolerance for a, b in zip(ratios, ratios[1:]))


def sandwich_check(K: int, eps: Rate, n_max: int, exact: bool = False) -> SandwichReport:
    """Compare ``E D(n, 0)`` with ``n (1 + 2 eps nu)`` and ``n (1 + 2 eps nu) + 2K`` for all ``n <= n_max``.

    In rational arithmetic the comparison is exact, otherwise it allows ``SANDWICH_TOLERANCE``.
    """
    values = expected_distance_curve(K, eps, n_max, exact)
    nu = stationary_exact(K, eps, exact=exact).nu_pair
    report = SandwichReport(K, to_fraction(eps) if exact else float(eps), values, nu, 0.0 if exact else SANDWICH_TOLERANCE)
    if report.violations:
        LOG.warning("sandwich bounds fail at K=%d eps=%s for n in %s", K, eps, report.violations[:10])
    return report


def _mc_batch(K: int, eps: float, n: int, size: int, seed: int, index: int) -> RunningStats:
    rng = make_rng(seed, index)
    d = numpy.tile(numpy.abs(numpy.arange(-K, K + 1, dtype=numpy.int64)), (size, 1))
    for _ in range(n):
        d = relax(d, sample_flags(rng, (size, 2 * K + 1), eps))
    return RunningStats.from_array(d[:, K])


def monte_carlo_distance(
    K: int,
    eps: float,
    n: int,
    replicas: int,
    seed: int = 0,
    workers: Optional[int] = None,
    batch: int = MC_BATCH,
) -> StripExpectation:
    """Mean and standard error of the cross model distance ``D(n, 0)`` over independent replicas.

    Replicas are processed in batches of ``batch``. Batch ``b`` draws from ``make_rng(seed, b)``,
    one ``(size, 2K + 1)`` block of horizontal flags per column, so the result does not depend on ``workers``.
    """
    eps = check_eps(eps)
    if int(K) != K or K < 1:
        raise ParameterError("The half width K must be a positive integer: {}".format(K))
    if n < 0:
        raise ParameterError("n must be non-negative: {}".format(n))
    if replicas < 2:
        raise ParameterError("At least 2 replicas are required: {}".format(replicas))
    start = time.perf_counter()
    count = math.ceil(replicas / batch)
    sizes = [min(batch, replicas - b * batch) for b in range(count)]
    results = map_replicas(lambda b: _mc_batch(K, eps, n, sizes[b], seed, b), count, workers)
    stats = RunningStats()
    for result in results:
        stats.merge(result)
    LOG.info("monte carlo K=%d eps=%s n=%d: %.4f +- %.4f over %d replicas in %.2fs", K, eps, n, stats.mean, stats.stderr, replicas, time.perf_counter() - start)
    return StripExpectation(K, eps, n, stats.mean, ExpectationMethod.MONTE_CARLO, stderr=stats.stderr, replicas=replicas, seed=seed)


class LowerBoundReport(Data):
    """Plane against strip distances with open verticals and diagonals.

    Counts replicas where ``D^d(k, 0)`` on the plane differs from the strip distance,
    where ``D^d(k, 0) > D(k, 0)`` for a finite plane distance, and where ``D^d(m, 0)``
    decreases along ``m = 0 ... k``.
    """

    @property
    def __data__(self):
        return {
            "k": self.k,
            "eps": self.eps,
            "seed": self.seed,
            "replicas": self.replicas,
            "equality_violations": self.equality_violations,
            "bound_violations": self.bound_violations,
            "monotonicity_violations": self.monotonicity_violations,
            "finite": self.finite,
            "mean_ratio": self.mean_ratio,
            "first_violation": self.first_violation,
        }

    def __init__(
        self,
        k: int,
        eps: float,
        seed: int,
        replicas: int,
        equality_violations: int = 0,
        bound_violations: int = 0,
        monotonicity_violations: int = 0,
        finite: int = 0,
        mean_ratio: float = 0.0,
        first_violation: Optional[dict] = None,
        name: Optional[str] = None,
    ):
        super(LowerBoundReport, self).__init__(name=name)
        self.k = k
        self.eps = eps
        self.seed = seed
        self.replicas = replicas
        self.equality_violations = equality_violations
        self.bound_violations = bound_violations
        self.monotonicity_violations = monotonicity_violations
        self.finite = finite
        self.mean_ratio = mean_ratio
        self.first_violation = first_violation

    def __repr__(self):
        return "LowerBoundReport(k={}, eps={}, replicas={}, violations={})".format(self.k, self.eps, self.replicas, self.violations)

    @property
    def violations(self) -> int:
        return self.equality_violations + self.bound_violations + self.monotonicity_violations

    @property
    def passed(self) -> bool:
        return self.violations == 0


def lower_bound_replica(k: int, eps: float, seed: int, index: int) -> dict:
    """Distances of one plane window ``[-k, 2k] x [-2k, 2k]``.

    Every path of length at most ``2k + 1`` from the origin stays in this window,
    so its open-vertical distances up to ``(k, 0)`` are those of the whole plane.
    """
    window = PlaneWindow.sample(make_rng(seed, index), eps, -k, 2 * k, -2 * k, 2 * k)
    with_diagonals = cross_plane_distances(window, (0, 0))
    axis = [as_length(with_diagonals[window.index((m, 0))]) for m in range(k + 1)]

    horizontal = window.horizontal[k : 2 * k, k : 3 * k + 1]
    d = numpy.abs(numpy.arange(-k, k + 1, dtype=numpy.int64))
    for i in range(k):
        d = relax(d, horizontal[i])
    strip = int(d[k])

    plain = as_length(single_source_lengths(window.graph(), window.index((0, 0)))[window.index((k, 0))])
    return {"axis": axis, "strip": strip, "plane": plain}


def lower_bound_check(k: int, eps: float, seed: int = 0, replicas: int = 1000, workers: Optional[int] = None) -> LowerBoundReport:
    """Check the strip confinement of minimal paths with open verticals and diagonals.

    For every replica: ``D^d(k, 0)`` on the plane equals the strip distance with the same
    horizontal edges, ``D^d(k, 0) <= D(k, 0)`` if the plane distance is finite, and
    ``D^d(m, 0)`` is non-decreasing in ``m``.

    Returns
    -------
    :class:`LowerBoundReport`
        Violations are reported, not raised.

    """
    eps = check_eps(eps)
    if k < 1:
        raise ParameterError("k must be a positive integer: {}".format(k))
    if replicas < 1:
        raise ParameterError("The number of replicas must be positive: {}".format(replicas))
    results = map_replicas(lambda r: lower_bound_replica(k, eps, seed, r), replicas, workers)
    report = LowerBoundReport(k, eps, seed, replicas)
    ratios = RunningStats()
    for index, result in enumerate(results):
        axis = result["axis"]
        diagonal = axis[-1]
        ratios.push(diagonal / k)
        kind = None
        if diagonal != result["strip"]:
            report.equality_violations += 1
            kind = "equality"
        if result["plane"] is not None:
            report.finite += 1
            if diagonal > result["plane"]:
                report.bound_violations += 1
                kind = kind or "bound"
        if any(b < a for a, b in zip(axis, axis[1:])):
            report.monotonicity_violations += 1
            kind = kind or "monotonicity"
        if kind is not None and report.first_violation is None:
            report.first_violation = {"replica": index, "kind": kind, "axis": axis, "strip": result["strip"], "plane": result["plane"]}
    report.mean_ratio = ratios.mean
    LOG.info("lower bound check k=%d eps=%s: %d replicas, %d violations", k, eps, replicas, report.violations)
    return report
