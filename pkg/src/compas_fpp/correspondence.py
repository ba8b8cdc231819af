"""Cross model distance profiles as exclusion process configurations.

Site ``j`` of column ``i`` carries a particle iff ``D(i, j) = D(i, j - 1) - 1``.
Under this map one column of the cross model is one parallel update of the
exclusion process, with the event of row ``j`` firing iff the horizontal edge
of row ``j`` is closed, and ``D(i + 1, j) - D(i, j)`` is 3 if that event fired and 1 otherwise.
"""

import logging
from typing import List
from typing import Optional

import numpy
from compas.data import Data

from compas_fpp.exceptions import ContractError
from compas_fpp.exceptions import ParameterError
from compas_fpp.rng import make_rng
from compas_fpp.strip.cross import cross_step
from compas_fpp.strip.geometry import DistanceProfile
from compas_fpp.strip.geometry import EdgeColumn
from compas_fpp.strip.geometry import StripConfiguration
from compas_fpp.strip.geometry import StripGeometry
from compas_fpp.strip.sampling import check_eps
from compas_fpp.strip.sampling import sample_configuration
from compas_fpp.tasep.dynamics import apply_events
from compas_fpp.tasep.dynamics import coupled_tasep_step
from compas_fpp.tasep.state import TasepState
from compas_fpp.workers import map_replicas

LOG = logging.getLogger(__name__)


def extract_particles(profile: DistanceProfile) -> TasepState:
    """The particle configuration of a distance profile.

    Raises
    ------
    ContractError
        If the profile violates its invariants.

    Examples
    --------
    >>> extract_particles(DistanceProfile.initial(2))
    TasepState(1100)

    """
    profile.check()
    return TasepState(numpy.diff(profile.d) == -1)


def profile_from_state(state: TasepState, anchor: int, column_index: int = 0) -> DistanceProfile:
    """The profile with ``d[-K] = anchor`` whose particle configuration is ``state``.

    Raises
    ------
    ContractError
        If the result has a negative entry or the wrong parity for ``column_index``.

    Examples
    --------
    >>> profile_from_state(TasepState([1, 1, 0, 0]), 2).d.tolist()
    [2, 1, 0, 1, 2]

    """
    steps = numpy.where(state.occupancy, -1, 1)
    d = anchor + numpy.concatenate([[0], numpy.cumsum(steps)])
    profile = DistanceProfile(column_index, d)
    profile.check()
    return profile


def fired_events(y_now: TasepState, y_next: TasepState) -> numpy.ndarray:
    """The events that take ``y_now`` to ``y_next`` in one update.

    Raises
    ------
    ContractError
        If no set of events does.

    """
    if y_now.K != y_next.K:
        raise ContractError("States of half widths {} and {}.".format(y_now.K, y_next.K))
    now = y_now.occupancy
    after = y_next.occupancy
    fired = numpy.empty(now.size + 1, dtype=bool)
    fired[0] = ~now[0] & after[0]
    fired[1:-1] = now[:-1] & ~now[1:] & ~after[:-1] & after[1:]
    fired[-1] = now[-1] & ~after[-1]
    if not numpy.array_equal(apply_events(now, fired), after):
        raise ContractError("{!r} is not reachable from {!r} in one update.".format(y_next, y_now))
    return fired


def reconstruct_increment(y_now: TasepState, y_next: TasepState, j: int) -> int:
    """``D(i + 1, j) - D(i, j)`` from two consecutive particle configurations.

    Parameters
    ----------
    y_now, y_next : :class:`TasepState`
        The configurations of columns ``i`` and ``i + 1``.
    j : int
        Row in ``[-K, K]``. In the bulk the increment is 3 iff the particle on
        site ``j`` jumped to ``j + 1``. Row ``-K`` uses the entry and row ``K`` the exit.

    Returns
    -------
    int
        1 or 3.

    Raises
    ------
    ContractError
        If ``y_next`` is not reachable from ``y_now``.

    Examples
    --------
    >>> reconstruct_increment(TasepState([1, 0]), TasepState([0, 1]), 0)
    3

    """
    K = y_now.K
    if j < -K or j > K:
        raise ParameterError("Row {} is outside of the strip [-{}, {}].".format(j, K, K))
    return 3 if fired_events(y_now, y_next)[j + K] else 1


class CouplingReport(Data):
    """Outcome of running the distance sweep and the coupled exclusion process side by side.

    Parameters
    ----------
    K : int
    eps : float
    seed : int
    columns : int
        Columns per run.
    steps_checked : int
        Columns compared over all runs.
    mismatches : int
        Failed comparisons: particle configurations, increments and ``D(i, 0)``.
    first_mismatch : dict, optional
        ``column``, ``row``, ``kind``, ``expected``, ``actual`` and ``replica`` of the first failure.
    replicas : int, optional

    """

    @property
    def __data__(self):
        return {
            "K": self.K,
            "eps": self.eps,
            "seed": self.seed,
            "columns": self.columns,
            "steps_checked": self.steps_checked,
            "mismatches": self.mismatches,
            "first_mismatch": self.first_mismatch,
            "replicas": self.replicas,
        }

    def __init__(
        self,
        K: int,
        eps: float,
        seed: int,
        columns: int,
        steps_checked: int = 0,
        mismatches: int = 0,
        first_mismatch: Optional[dict] = None,
        replicas: int = 1,
        name: Optional[str] = None,
    ):
        super(CouplingReport, self).__init__(name=name)
        self.K = K
        self.eps = eps
        self.seed = seed
        self.columns = columns
        self.steps_checked = steps_checked
        self.mismatches = mismatches
        self.first_mismatch = first_mismatch
        self.replicas = replicas

    def __repr__(self):
        return "CouplingReport(K={}, eps={}, steps_checked={}, mismatches={})".format(self.K, self.eps, self.steps_checked, self.mismatches)

    @property
    def passed(self) -> bool:
        return self.mismatches == 0

    def merge(self, other: "CouplingReport") -> "CouplingReport":
        """Sum of two reports. The first mismatch of ``self`` wins."""
        return CouplingReport(
            self.K,
            self.eps,
            self.seed,
            self.columns,
            self.steps_checked + other.steps_checked,
            self.mismatches + other.mismatches,
            self.first_mismatch if self.first_mismatch is not None else other.first_mismatch,
            self.replicas + other.replicas,
        )

    def record(self, column: int, row: Optional[int], kind: str, expected, actual, replica: int = 0) -> None:
        self.mismatches += 1
        if self.first_mismatch is None:
            self.first_mismatch = {
                "column": column,
                "row": row,
                "kind": kind,
                "expected": expected,
                "actual": actual,
                "replica": replica,
            }
            LOG.error("coupling mismatch at column %d row %s (%s): expected %s, got %s", column, row, kind, expected, actual)


def compare_step(
    report: CouplingReport,
    profile: DistanceProfile,
    state: TasepState,
    column: EdgeColumn,
    replica: int = 0,
):
    """Advance the profile and the coupled state by one column and record every disagreement."""
    K = profile.K
    following = cross_step(profile, column)
    coupled = coupled_tasep_step(state, column)
    extracted = extract_particles(following)
    report.steps_checked += 1
    i = following.column_index
    if extracted != coupled:
        site = int(numpy.flatnonzero(extracted.occupancy != coupled.occupancy)[0]) - K + 1
        report.record(i, site, "particles", repr(extracted), repr(coupled), replica)
    try:
        fired = fired_events(state, coupled)
    except ContractError as error:
        report.record(i, None, "unreachable", str(error), repr(coupled), replica)
        return following, coupled, None
    increments = numpy.where(fired, 3, 1)
    actual = following.d - profile.d
    for r in numpy.flatnonzero(actual != increments):
        report.record(i, int(r) - K, "increment", int(actual[r]), int(increments[r]), replica)
    return following, coupled, increments


def verify_coupling(
    K: int,
    eps: float,
    n_columns: int,
    seed: int = 0,
    configuration: Optional[StripConfiguration] = None,
    replica: int = 0,
) -> CouplingReport:
    """Check the coupling along one sampled, or replayed, edge sequence.

    The distance sweep starts from ``|j|`` and the exclusion process from the
    extracted step configuration. After every column the extracted configuration
    must equal the coupled one, every row increment must equal the reconstructed
    increment, and the accumulated increments of row 0 must equal ``D(i, 0)``.

    Parameters
    ----------
    K : int
    eps : float
    n_columns : int
    seed : int, optional
    configuration : :class:`StripConfiguration`, optional
        Replay these edges instead of sampling. Only horizontal edges are used.
    replica : int, optional
        Index of the random stream ``make_rng(seed, replica)``.

    Returns
    -------
    :class:`CouplingReport`
        Failures are reported, not raised.

    """
    eps = check_eps(eps)
    if configuration is None:
        if n_columns < 0:
            raise ParameterError("The number of columns must be non-negative: {}".format(n_columns))
        configuration = sample_configuration(make_rng(seed, replica), StripGeometry(K), eps, n_columns)
    elif not configuration.geometry.is_cross:
        configuration = configuration.as_cross()
    K = configuration.geometry.K

    report = CouplingReport(K, eps, seed, configuration.n)
    profile = DistanceProfile.initial(K)
    state = extract_particles(profile)
    if state != TasepState.step_configuration(K):
        report.record(0, None, "initial", repr(TasepState.step_configuration(K)), repr(state), replica)
    reconstructed = profile.at(0)
    for column in configuration.columns:
        following, state, increments = compare_step(report, profile, state, column, replica)
        if increments is not None:
            reconstructed += int(increments[K])
            if reconstructed != following.at(0):
                report.record(following.column_index, 0, "distance", following.at(0), reconstructed, replica)
        profile = following
    LOG.info("coupling K=%d eps=%s: %d columns, %d mismatches", K, eps, report.steps_checked, report.mismatches)
    return report


def verify_coupling_replicas(K: int, eps: float, n_columns: int, seed: int = 0, replicas: int = 1, workers: Optional[int] = None) -> CouplingReport:
    """Run :func:`verify_coupling` on independent streams ``0 ... replicas - 1`` and sum the reports."""
    if replicas < 1:
        raise ParameterError("The number of replicas must be positive: {}".format(replicas))
    reports = map_replicas(lambda r: verify_coupling(K, eps, n_columns, seed, replica=r), replicas, workers)
    report = reports[0]
    for other in reports[1:]:
        report = report.merge(other)
    return report


def verify_coupling_exhaustive(K: int) -> CouplingReport:
    """Check one coupled column for every particle configuration and every horizontal edge column.

    The profile of each configuration is anchored at ``d[-K] = 3K`` in column 0.
    """
    geometry = StripGeometry(K)
    report = CouplingReport(K, None, 0, 1, replicas=0)
    columns: List[EdgeColumn] = []
    for bits in range(1 << geometry.rows):
        columns.append(EdgeColumn([(bits >> r) & 1 for r in range(geometry.rows)]))
    for code in range(1 << geometry.sites):
        state = TasepState.from_int(code, K)
        profile = profile_from_state(state, 3 * K)
        if extract_particles(profile) != state:
            report.record(0, None, "bijection", repr(state), repr(extract_particles(profile)))
        for column in columns:
            compare_step(report, profile, state, column)
    return report
