from typing import List
from typing import Optional
from typing import Sequence
from typing import Union

import numpy
import numpy.typing as npt  # noqa: F401

from compas_fpp.exceptions import ContractError
from compas_fpp.strip.geometry import DistanceProfile
from compas_fpp.strip.geometry import EdgeColumn
from compas_fpp.strip.geometry import StripConfiguration

FAR = numpy.int64(1) << numpy.int64(62)
"""Candidate value of a closed horizontal edge. Never survives relaxation."""


def relax(d: npt.NDArray[numpy.int64], horizontal: npt.NDArray[numpy.bool_]) -> npt.NDArray[numpy.int64]:
    """Distances of the next column in the cross model.

    Works on the last axis, so ``d`` and ``horizontal`` may carry leading batch dimensions.

    Parameters
    ----------
    d : numpy.ndarray
        Distances of column ``i``, shape ``(..., 2K + 1)``.
    horizontal : numpy.ndarray
        Open flags of the horizontal edges leaving column ``i``, same shape.

    Returns
    -------
    numpy.ndarray
        Distances of column ``i + 1``.

    Notes
    -----
    The candidates are the horizontal step (length 1, if open) and the two diagonal steps (length 2).
    The vertical relaxation ``d[j] = min(d[j], d[j - 1] + 1, d[j + 1] + 1)`` is then solved exactly
    by one upward and one downward pass, written as running minima:
    ``min_{k <= j} (c[k] + j - k) = j + min_{k <= j} (c[k] - k)`` and symmetrically downwards.

    """
    d = numpy.asarray(d, dtype=numpy.int64)
    candidate = numpy.where(horizontal, d + 1, FAR)
    candidate[..., 1:] = numpy.minimum(candidate[..., 1:], d[..., :-1] + 2)
    candidate[..., :-1] = numpy.minimum(candidate[..., :-1], d[..., 1:] + 2)
    rows = numpy.arange(d.shape[-1], dtype=numpy.int64)
    upward = numpy.minimum.accumulate(candidate - rows, axis=-1) + rows
    downward = numpy.flip(numpy.minimum.accumulate(numpy.flip(upward + rows, axis=-1), axis=-1), axis=-1) - rows
    return downward


def cross_step(profile: DistanceProfile, column: EdgeColumn) -> DistanceProfile:
    """Advance the cross model distances by one column.

    Parameters
    ----------
    profile : :class:`DistanceProfile`
        The distances ``D(i, .)``.
    column : :class:`EdgeColumn`
        The edges between column ``i`` and ``i + 1``, without vertical component.

    Returns
    -------
    :class:`DistanceProfile`
        The distances ``D(i + 1, .)``.

    Raises
    ------
    ContractError
        If the profile violates its invariants, or the column does not match.

    Examples
    --------
    >>> from compas_fpp.strip.geometry import StripGeometry
    >>> geometry = StripGeometry(2)
    >>> profile = cross_step(DistanceProfile.initial(2), EdgeColumn.all_open(geometry))
    >>> profile.d.tolist()
    [3, 2, 1, 2, 3]

    """
    profile.check()
    if column.vertical is not None:
        raise ContractError("The cross model has no random vertical edges.")
    if column.K != profile.K:
        raise ContractError("Column of half width {} applied to a profile of half width {}.".format(column.K, profile.K))
    return DistanceProfile(profile.column_index + 1, relax(profile.d, column.horizontal))


def cross_sweep(
    columns: Union[StripConfiguration, Sequence[EdgeColumn]],
    profile: Optional[DistanceProfile] = None,
) -> List[DistanceProfile]:
    """All profiles ``D(0, .) ... D(n, .)`` of a cross model segment.

    Parameters
    ----------
    columns : :class:`StripConfiguration` | list[:class:`EdgeColumn`]
        The edges of the segment. For a standard configuration only the horizontal edges are used.
    profile : :class:`DistanceProfile`, optional
        Start profile. Defaults to the source at the origin.

    Returns
    -------
    list[:class:`DistanceProfile`]
        ``n + 1`` profiles.

    """
    if isinstance(columns, StripConfiguration):
        columns = columns.columns
    if profile is None:
        if not columns:
            raise ContractError("Cannot infer the half width of an empty sweep without a start profile.")
        profile = DistanceProfile.initial(columns[0].K)
    profile.check()
    profiles = [profile]
    d = profile.d
    for column in columns:
        if column.K != profile.K:
            raise ContractError("Column of half width {} applied to a profile of half width {}.".format(column.K, profile.K))
        d = relax(d, column.horizontal)
        profiles.append(DistanceProfile(profiles[-1].column_index + 1, d))
    return profiles


def cross_distance(columns: Union[StripConfiguration, Sequence[EdgeColumn]], j: int = 0) -> int:
    """The cross model distance ``D(n, j)`` from the origin, ``n`` the number of columns."""
    return cross_sweep(columns)[-1].at(j)


def batched_cross_distances(horizontal: npt.NDArray[numpy.bool_]) -> npt.NDArray[numpy.int64]:
    """Final profiles ``D(n, .)`` of many independent cross model segments.

    Parameters
    ----------
    horizontal : numpy.ndarray
        Open flags of shape ``(batch, n, 2K + 1)``.

    Returns
    -------
    numpy.ndarray
        Distances of shape ``(batch, 2K + 1)``.

    """
    batch, n, rows = horizontal.shape
    K = (rows - 1) // 2
    d = numpy.tile(numpy.abs(numpy.arange(-K, K + 1, dtype=numpy.int64)), (batch, 1))
    for i in range(n):
        d = relax(d, horizontal[:, i, :])
    return d
