"""One parallel update of the exclusion process.

Events are indexed like the horizontal edges of a strip column, by row ``-K ... K``:
event 0 is the entry at site ``-K + 1``, event ``p + 1`` the jump of the particle
at position ``p`` and event ``2K`` the exit at site ``K``. Every event is decided
on the state before the update and all fired events are applied simultaneously.
"""

from fractions import Fraction
from itertools import product
from typing import Iterator
from typing import Optional
from typing import Tuple

import numpy
import numpy.typing as npt  # noqa: F401
import scipy.sparse

from compas_fpp.exceptions import ContractError
from compas_fpp.exceptions import ParameterError
from compas_fpp.strip.geometry import EdgeColumn
from compas_fpp.tasep.state import Rate
from compas_fpp.tasep.state import TasepRates
from compas_fpp.tasep.state import TasepState


def enabled_events(occupancy: npt.NDArray[numpy.bool_]) -> npt.NDArray[numpy.bool_]:
    """Events allowed by exclusion, shape ``(..., 2K + 1)`` for occupancy ``(..., 2K)``."""
    occupancy = numpy.asarray(occupancy, dtype=bool)
    shape = occupancy.shape[:-1] + (occupancy.shape[-1] + 1,)
    enabled = numpy.empty(shape, dtype=bool)
    enabled[..., 0] = ~occupancy[..., 0]
    enabled[..., 1:-1] = occupancy[..., :-1] & ~occupancy[..., 1:]
    enabled[..., -1] = occupancy[..., -1]
    return enabled


def apply_events(occupancy: npt.NDArray[numpy.bool_], fired: npt.NDArray[numpy.bool_]) -> npt.NDArray[numpy.bool_]:
    """Apply a set of enabled events simultaneously.

    Parameters
    ----------
    occupancy : numpy.ndarray
        Shape ``(..., 2K)``.
    fired : numpy.ndarray
        Shape ``(..., 2K + 1)``, a subset of the enabled events.

    Returns
    -------
    numpy.ndarray
        The occupancy after the update.

    """
    occupancy = numpy.asarray(occupancy, dtype=bool)
    fired = numpy.asarray(fired, dtype=bool)
    assert not (fired & ~enabled_events(occupancy)).any(), "only enabled events can fire"
    moves = fired[..., 1:-1]
    following = occupancy.copy()
    following[..., 0] |= fired[..., 0]
    following[..., :-1] &= ~moves
    following[..., 1:] |= moves
    following[..., -1] &= ~fired[..., -1]
    assert following.sum(axis=-1).tolist() == (occupancy.sum(axis=-1) + fired[..., 0] - fired[..., -1]).tolist()
    return following


def rate_vector(K: int, rates: TasepRates) -> npt.NDArray[numpy.float64]:
    """Probability of every event index, ``[beta, alpha, ..., alpha, gamma]``."""
    vector = numpy.full(2 * K + 1, float(rates.alpha))
    vector[0] = float(rates.beta)
    vector[-1] = float(rates.gamma)
    return vector


def tasep_step(
    state: TasepState,
    rates: TasepRates,
    draws: Optional[npt.NDArray[numpy.float64]] = None,
    rng: Optional[numpy.random.Generator] = None,
) -> TasepState:
    """One parallel update.

    Parameters
    ----------
    state : :class:`TasepState`
    rates : :class:`TasepRates`
    draws : numpy.ndarray, optional
        ``2K + 1`` uniforms in event order. An enabled event fires iff its draw is below its rate.
    rng : :class:`numpy.random.Generator`, optional
        Stream to take the ``2K + 1`` draws from if ``draws`` is not given.

    Returns
    -------
    :class:`TasepState`

    Raises
    ------
    ContractError
        If the number of draws does not match the number of events.

    Examples
    --------
    >>> rates = TasepRates.from_eps(0.5)
    >>> tasep_step(TasepState([1, 0]), rates, draws=[0.0, 0.0, 0.0])
    TasepState(01)

    """
    K = state.K
    if draws is None:
        if rng is None:
            raise ParameterError("Either draws or a random stream is required.")
        draws = rng.random(2 * K + 1)
    draws = numpy.asarray(draws, dtype=numpy.float64)
    if draws.shape != (2 * K + 1,):
        raise ContractError("A step of {} sites takes {} draws, got {}.".format(2 * K, 2 * K + 1, draws.size))
    fired = enabled_events(state.occupancy) & (draws < rate_vector(K, rates))
    return TasepState(apply_events(state.occupancy, fired))


def coupled_tasep_step(state: TasepState, column: EdgeColumn) -> TasepState:
    """The update driven by a cross model column: an enabled event fires iff its horizontal edge is closed.

    Examples
    --------
    >>> from compas_fpp.strip.geometry import StripGeometry
    >>> column = EdgeColumn.all_closed(StripGeometry(2))
    >>> coupled_tasep_step(TasepState.empty(2), column)
    TasepState(1000)

    """
    if column.vertical is not None:
        raise ContractError("The coupled update takes cross model columns.")
    if column.K != state.K:
        raise ContractError("Column of half width {} applied to a state of half width {}.".format(column.K, state.K))
    fired = enabled_events(state.occupancy) & ~column.horizontal
    return TasepState(apply_events(state.occupancy, fired))


def event_masks(K: int) -> npt.NDArray[numpy.int64]:
    """Bits toggled by every event in the integer state code."""
    size = 2 * K
    masks = [1] + [3 << p for p in range(size - 1)] + [1 << (size - 1)]
    return numpy.array(masks, dtype=numpy.int64)


def state_bits(K: int) -> npt.NDArray[numpy.bool_]:
    """Occupancy of every state code, shape ``(4^K, 2K)``."""
    codes = numpy.arange(1 << (2 * K), dtype=numpy.int64)
    return ((codes[:, None] >> numpy.arange(2 * K)) & 1).astype(bool)


def transition_entries(K: int, rates: TasepRates) -> Iterator[Tuple[int, int, Rate]]:
    """All nonzero transitions ``(source, target, probability)`` between state codes.

    The arithmetic follows the type of the rates, so :class:`fractions.Fraction`
    rates give exact probabilities.
    """
    values = [rates.beta] + [rates.alpha] * (2 * K - 1) + [rates.gamma]
    masks = event_masks(K).tolist()
    for source, occupancy in enumerate(state_bits(K)):
        events = numpy.flatnonzero(enabled_events(occupancy)).tolist()
        for outcome in product((False, True), repeat=len(events)):
            probability = Fraction(1) if isinstance(rates.alpha, Fraction) else 1.0
            target = source
            for index, fires in zip(events, outcome):
                if fires:
                    probability *= values[index]
                    target ^= masks[index]
                else:
                    probability *= 1 - values[index]
            if probability != 0:
                yield source, target, probability


def transition_matrix(K: int, rates: TasepRates) -> scipy.sparse.csr_matrix:
    """Row stochastic sparse transition matrix over the ``4^K`` state codes.

    Enabled events toggle pairwise disjoint bits, so the target of a set of
    fired events is the source code xor the sum of their masks.
    """
    if K < 1:
        raise ParameterError("The half width K must be a positive integer: {}".format(K))
    values = rate_vector(K, rates)
    masks = event_masks(K)
    bits = state_bits(K)
    enabled = enabled_events(bits)
    subsets = {}
    rows, cols, data = [], [], []
    for source in range(bits.shape[0]):
        events = numpy.flatnonzero(enabled[source])
        m = events.size
        if m not in subsets:
            subsets[m] = ((numpy.arange(1 << m)[:, None] >> numpy.arange(m)) & 1).astype(bool)
        fires = subsets[m]
        targets = source ^ (fires.astype(numpy.int64) @ masks[events])
        probabilities = numpy.where(fires, values[events], 1.0 - values[events]).prod(axis=1)
        keep = probabilities > 0
        rows.append(numpy.full(int(keep.sum()), source, dtype=numpy.int64))
        cols.append(targets[keep])
        data.append(probabilities[keep])
    n = bits.shape[0]
    return scipy.sparse.coo_matrix((numpy.concatenate(data), (numpy.concatenate(rows), numpy.concatenate(cols))), shape=(n, n)).tocsr()
