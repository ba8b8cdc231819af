import logging
import time
from enum import Enum
from fractions import Fraction
from typing import List
from typing import Optional
from typing import Union

import numpy
import numpy.typing as npt  # noqa: F401
import scipy.sparse
from compas.data import Data
from scipy.sparse.csgraph import connected_components
from scipy.sparse.linalg import spsolve

from compas_fpp.exceptions import CapacityError
from compas_fpp.exceptions import ContractError
from compas_fpp.exceptions import DegenerateChainError
from compas_fpp.exceptions import ParameterError
from compas_fpp.kernels import tasep_run
from compas_fpp.rng import make_rng
from compas_fpp.stats import batch_means_stderr
from compas_fpp.tasep.dynamics import transition_entries
from compas_fpp.tasep.dynamics import transition_matrix
from compas_fpp.tasep.state import Rate
from compas_fpp.tasep.state import TasepRates
from compas_fpp.tasep.state import TasepState
from compas_fpp.tasep.state import to_fraction

LOG = logging.getLogger(__name__)

EXACT_MAX_K = 7
RATIONAL_MAX_K = 3
RESIDUAL_TOLERANCE = 1e-10
STALL_WINDOW = 100
STALL_IMPROVEMENT = 1e-14
DEFAULT_BATCH_SIZE = 1000
CHUNK_DRAWS = 1 << 22


class Method(str, Enum):
    EXACT_SOLVE = "exact"
    SIMULATION = "simulation"
    CLOSED_FORM = "formula"


class StationaryDistribution(Data):
    """The stationary law of the exclusion process, or a summary of it.

    Parameters
    ----------
    K : int
    rates : :class:`TasepRates`
    method : :class:`Method`
    nu_pair : float | Fraction
        Stationary probability of a particle on site 0 and a hole on site 1.
    probabilities : numpy.ndarray, optional
        Probability of every state code (exact solves).
    rational : list[Fraction], optional
        The same probabilities in exact arithmetic (rational solves).
    stderr : float, optional
        Batch means standard error (simulations).
    samples : int, optional
        Number of recorded steps (simulations).
    residual : float, optional
        :math:`\\| \\pi P - \\pi \\|_1` of the solved vector.

    """

    @property
    def __data__(self):
        return {
            "K": self.K,
            "rates": self.rates.__data__,
            "method": self.method.value,
            "nu_pair": str(self.nu_pair) if isinstance(self.nu_pair, Fraction) else self.nu_pair,
            "probabilities": None if self.probabilities is None else self.probabilities.tolist(),
            "rational": None if self.rational is None else [str(value) for value in self.rational],
            "stderr": self.stderr,
            "samples": self.samples,
            "residual": self.residual,
        }

    @classmethod
    def __from_data__(cls, data):
        nu_pair = data["nu_pair"]
        rational = data.get("rational")
        return cls(
            data["K"],
            TasepRates.__from_data__(data["rates"]),
            Method(data["method"]),
            Fraction(nu_pair) if isinstance(nu_pair, str) else nu_pair,
            probabilities=data.get("probabilities"),
            rational=None if rational is None else [Fraction(value) for value in rational],
            stderr=data.get("stderr"),
            samples=data.get("samples"),
            residual=data.get("residual"),
        )

    def __init__(
        self,
        K: int,
        rates: TasepRates,
        method: Method,
        nu_pair: Rate,
        probabilities=None,
        rational: Optional[List[Fraction]] = None,
        stderr: Optional[float] = None,
        samples: Optional[int] = None,
        residual: Optional[float] = None,
        name: Optional[str] = None,
    ):
        super(StationaryDistribution, self).__init__(name=name)
        self.K = K
        self.rates = rates
        self.method = Method(method)
        self.nu_pair = nu_pair
        self.probabilities = None if probabilities is None else numpy.asarray(probabilities, dtype=numpy.float64)
        self.rational = rational
        self.stderr = stderr
        self.samples = samples
        self.residual = residual
        if not 0 <= nu_pair <= 1:
            raise ContractError("nu_pair must be a probability: {}".format(nu_pair))

    def __repr__(self):
        return "StationaryDistribution(K={}, method={}, nu_pair={})".format(self.K, self.method.value, float(self.nu_pair))

    @property
    def eps(self) -> Optional[float]:
        """The common value of the three rates, if they agree."""
        alpha, beta, gamma = self.rates.as_tuple()
        if alpha == beta == gamma:
            return float(alpha)
        return None


def as_rates(rates: Union[TasepRates, Rate]) -> TasepRates:
    if isinstance(rates, TasepRates):
        return rates
    return TasepRates.from_eps(rates)


def pair_mask(K: int) -> npt.NDArray[numpy.bool_]:
    """State codes with site 0 occupied and site 1 empty (positions ``K - 1`` and ``K``)."""
    codes = numpy.arange(1 << (2 * K), dtype=numpy.int64)
    return (((codes >> (K - 1)) & 1) == 1) & (((codes >> K) & 1) == 0)


def nu_pair_from_probabilities(K: int, probabilities) -> Rate:
    """Probability of site 0 occupied and site 1 empty under a law over the state codes."""
    indices = numpy.flatnonzero(pair_mask(K))
    if isinstance(probabilities, numpy.ndarray):
        return float(probabilities[indices].sum())
    return sum((probabilities[i] for i in indices.tolist()), Fraction(0))


def residual_norm(PT: scipy.sparse.csr_matrix, pi: npt.NDArray[numpy.float64]) -> float:
    """:math:`\\| \\pi P - \\pi \\|_1` given the transposed matrix."""
    return float(numpy.abs(PT @ pi - pi).sum())


def recurrent_class_count(P: scipy.sparse.csr_matrix) -> int:
    """Number of closed strongly connected classes of the transition graph."""
    count, labels = connected_components(P, directed=True, connection="strong")
    coo = P.tocoo()
    leaving = labels[coo.row] != labels[coo.col]
    open_classes = numpy.unique(labels[coo.row[leaving]])
    return count - open_classes.size


def check_chain(K: int, rates: TasepRates) -> None:
    if int(K) != K or K < 1:
        raise ParameterError("The half width K must be a positive integer: {}".format(K))
    if K > EXACT_MAX_K:
        raise CapacityError("Exact solves are limited to K <= {} ({} states), got K = {}.".format(EXACT_MAX_K, 1 << (2 * EXACT_MAX_K), K))
    if rates.is_degenerate:
        raise DegenerateChainError("Rates in {{0, 1}} may give several recurrent classes or a periodic chain: {!r}".format(rates))


def power_iteration(PT: scipy.sparse.csr_matrix, tolerance: float, max_iterations: int) -> Optional[npt.NDArray[numpy.float64]]:
    """Power iteration with a Cesaro average, ``None`` if it stalls before reaching the tolerance."""
    n = PT.shape[0]
    pi = numpy.full(n, 1.0 / n)
    total = numpy.zeros(n)
    best = numpy.inf
    for iteration in range(1, max_iterations + 1):
        pi = PT @ pi
        pi /= pi.sum()
        total += pi
        if iteration % STALL_WINDOW:
            continue
        average = total / total.sum()
        candidates = [(residual_norm(PT, pi), pi), (residual_norm(PT, average), average)]
        residual, vector = min(candidates, key=lambda item: item[0])
        if residual <= tolerance * 1e-2:
            LOG.debug("power iteration converged after %d iterations, residual %.3e", iteration, residual)
            return vector.copy()
        if best < numpy.inf and best - residual < STALL_IMPROVEMENT * best:
            LOG.warning("power iteration stalled after %d iterations at residual %.3e, falling back to a direct solve", iteration, residual)
            return None
        best = min(best, residual)
    LOG.warning("power iteration did not converge in %d iterations, falling back to a direct solve", max_iterations)
    return None


def direct_solve(PT: scipy.sparse.csr_matrix) -> npt.NDArray[numpy.float64]:
    """Solve ``(P^T - I) pi = 0`` with the last equation replaced by the normalisation."""
    n = PT.shape[0]
    A = (PT - scipy.sparse.identity(n, format="csr")).tocsr()
    A = scipy.sparse.vstack([A[:-1], scipy.sparse.csr_matrix(numpy.ones((1, n)))]).tocsc()
    b = numpy.zeros(n)
    b[-1] = 1.0
    pi = spsolve(A, b)
    pi = numpy.clip(pi, 0.0, None)
    return pi / pi.sum()


def gth_solve(matrix: List[List[Fraction]]) -> List[Fraction]:
    """Stationary vector of an irreducible row stochastic matrix by Grassmann-Taksar-Heyman elimination.

    Subtraction free, so it is exact in rational arithmetic.
    """
    A = [list(row) for row in matrix]
    n = len(A)
    for k in range(n - 1, 0, -1):
        s = sum(A[k][:k], Fraction(0))
        if s == 0:
            raise DegenerateChainError("The chain is reducible: state {} cannot leave its class.".format(k))
        for i in range(k):
            A[i][k] /= s
        for i in range(k):
            if A[i][k] == 0:
                continue
            factor = A[i][k]
            row = A[i]
            for j in range(k):
                if A[k][j] != 0:
                    row[j] += factor * A[k][j]
    x = [Fraction(1)]
    for j in range(1, n):
        x.append(sum((x[i] * A[i][j] for i in range(j)), Fraction(0)))
    total = sum(x, Fraction(0))
    return [value / total for value in x]


def to_exact_rates(rates: TasepRates) -> TasepRates:
    return TasepRates(*(to_fraction(rate) for rate in rates.as_tuple()))


def stationary_exact(
    K: int,
    rates: Union[TasepRates, Rate],
    exact: bool = False,
    tolerance: float = RESIDUAL_TOLERANCE,
    max_iterations: int = 2000,
) -> StationaryDistribution:
    """The stationary distribution of the exclusion process on ``2K`` sites.

    Parameters
    ----------
    K : int
        Half width, at most ``EXACT_MAX_K``.
    rates : :class:`TasepRates` | float
        The rates, or a common value ``eps`` of all three.
    exact : bool, optional
        Solve in rational arithmetic (``K <= RATIONAL_MAX_K``).
        Float rates are read through their shortest decimal representation.
    tolerance : float, optional
        Bound on the residual :math:`\\| \\pi P - \\pi \\|_1`.
    max_iterations : int, optional
        Power iterations before the direct solve.

    Returns
    -------
    :class:`StationaryDistribution`

    Raises
    ------
    CapacityError
        If K is above the solver budget.
    DegenerateChainError
        If a rate is 0 or 1, or the chain has more than one recurrent class.
    ContractError
        If the solved vector misses the residual tolerance.

    Examples
    --------
    >>> distribution = stationary_exact(1, 0.5, exact=True)
    >>> distribution.nu_pair
    Fraction(3, 7)

    """
    rates = as_rates(rates)
    check_chain(K, rates)
    start = time.perf_counter()
    P = transition_matrix(K, rates)
    classes = recurrent_class_count(P)
    if classes != 1:
        raise DegenerateChainError("The chain has {} recurrent classes.".format(classes))

    if exact:
        if K > RATIONAL_MAX_K:
            raise CapacityError("Rational solves are limited to K <= {}, got K = {}.".format(RATIONAL_MAX_K, K))
        exact_rates = to_exact_rates(rates)
        n = 1 << (2 * K)
        matrix = [[Fraction(0)] * n for _ in range(n)]
        for source, target, probability in transition_entries(K, exact_rates):
            matrix[source][target] += probability
        rational = gth_solve(matrix)
        residual = sum((abs(sum((rational[i] * matrix[i][j] for i in range(n)), Fraction(0)) - rational[j]) for j in range(n)), Fraction(0))
        if residual != 0:
            raise ContractError("The rational solve is not stationary: residual {}".format(residual))
        LOG.info("rational stationary solve K=%d in %.2fs", K, time.perf_counter() - start)
        return StationaryDistribution(
            K,
            exact_rates,
            Method.EXACT_SOLVE,
            nu_pair_from_probabilities(K, rational),
            probabilities=[float(value) for value in rational],
            rational=rational,
            residual=0.0,
        )

    PT = P.T.tocsr()
    pi = power_iteration(PT, tolerance, max_iterations)
    if pi is None:
        pi = direct_solve(PT)
    residual = residual_norm(PT, pi)
    if residual > tolerance:
        raise ContractError("The stationary solve missed the residual tolerance: {:.3e} > {:.3e}".format(residual, tolerance))
    LOG.info("stationary solve K=%d rates=%r in %.2fs, residual %.3e", K, rates, time.perf_counter() - start, residual)
    return StationaryDistribution(K, rates, Method.EXACT_SOLVE, nu_pair_from_probabilities(K, pi), probabilities=pi, residual=residual)


def nu_pair_simulated(
    K: int,
    rates: Union[TasepRates, Rate],
    burn_in: int,
    samples: int,
    rng: Optional[numpy.random.Generator] = None,
    seed: int = 0,
    batch_size: int = DEFAULT_BATCH_SIZE,
    initial: Optional[TasepState] = None,
) -> StationaryDistribution:
    """Long run frequency of a particle on site 0 and a hole on site 1.

    Parameters
    ----------
    K : int
    rates : :class:`TasepRates` | float
    burn_in : int
        Steps discarded before recording.
    samples : int
        Recorded steps. The pair is read before every step.
    rng : :class:`numpy.random.Generator`, optional
        The stream. Defaults to ``make_rng(seed)``.
    seed : int, optional
    batch_size : int, optional
        Steps per batch of the batch means error estimate. Only complete batches enter it.
    initial : :class:`TasepState`, optional
        Start state, by default the step configuration.

    Returns
    -------
    :class:`StationaryDistribution`

    """
    rates = as_rates(rates)
    if int(K) != K or K < 1:
        raise ParameterError("The half width K must be a positive integer: {}".format(K))
    if burn_in < 0 or samples < 1:
        raise ParameterError("burn_in must be non-negative and samples positive: {}, {}".format(burn_in, samples))
    if batch_size < 1:
        raise ParameterError("The batch size must be positive: {}".format(batch_size))
    if rng is None:
        rng = make_rng(seed)
    if initial is None:
        initial = TasepState.step_configuration(K)
    if initial.K != K:
        raise ParameterError("The initial state has half width {}, expected {}.".format(initial.K, K))

    start = time.perf_counter()
    width = 2 * K + 1
    chunk = batch_size * max(1, CHUNK_DRAWS // (width * batch_size))
    alpha, beta, gamma = (float(rate) for rate in rates.as_tuple())
    state = initial.occupancy.astype(numpy.uint8)
    left = K - 1

    remaining = burn_in
    while remaining > 0:
        steps = min(chunk, remaining)
        tasep_run(state, alpha, beta, gamma, rng.random((steps, width)), left, numpy.empty(steps, dtype=numpy.uint8))
        remaining -= steps

    hits_total = 0
    batch_means = []
    remaining = samples
    while remaining > 0:
        steps = min(chunk, remaining)
        hits = numpy.empty(steps, dtype=numpy.uint8)
        tasep_run(state, alpha, beta, gamma, rng.random((steps, width)), left, hits)
        hits_total += int(hits.sum())
        complete = (steps // batch_size) * batch_size
        if complete:
            batch_means.extend(hits[:complete].reshape(-1, batch_size).mean(axis=1).tolist())
        remaining -= steps

    nu_pair = hits_total / samples
    stderr = batch_means_stderr(batch_means)
    LOG.info("simulated nu K=%d rates=%r: %.6f +- %.6f over %d steps in %.2fs", K, rates, nu_pair, stderr, samples, time.perf_counter() - start)
    return StationaryDistribution(K, rates, Method.SIMULATION, nu_pair, stderr=stderr, samples=samples)
