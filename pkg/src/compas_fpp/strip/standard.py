from typing import NamedTuple
from typing import Optional
from typing import Sequence
from typing import Union

import numpy
import numpy.typing as npt  # noqa: F401

from compas_fpp.exceptions import ParameterError
from compas_fpp.strip.geometry import EdgeColumn
from compas_fpp.strip.geometry import StripConfiguration
from compas_fpp.strip.geometry import StripGeometry
from compas_fpp.strip.oracle import shortest_path_oracle
from compas_fpp.types import BoolN


class Box(NamedTuple):
    """Vertex box ``[first_column, last_column] x [low_row, high_row]``."""

    first_column: int
    last_column: int
    low_row: int
    high_row: int


def _configuration(geometry, columns, origin_vertical) -> StripConfiguration:
    if isinstance(columns, StripConfiguration):
        return columns
    return StripConfiguration(geometry, columns, origin_vertical)


def standard_distance(
    geometry: StripGeometry,
    columns: Union[StripConfiguration, Sequence[EdgeColumn]],
    n: int,
    origin_vertical: Optional[BoolN] = None,
) -> Optional[int]:
    """Standard model distance ``D^K(n, 0)`` inside the materialised segment ``[0, n]``.

    Parameters
    ----------
    geometry : :class:`StripGeometry`
        A standard model geometry.
    columns : :class:`StripConfiguration` | list[:class:`EdgeColumn`]
        Columns covering ``0 ... n``. Further columns are ignored.
    n : int
        Target column.
    origin_vertical : BoolN, optional
        Vertical flags of column 0 if ``columns`` is a plain sequence.

    Returns
    -------
    int | None
        The length, or ``None`` if ``(0, 0)`` and ``(n, 0)`` are disconnected inside the segment.

    """
    if geometry.is_cross:
        raise ParameterError("standard_distance needs a standard model geometry.")
    configuration = _configuration(geometry, columns, origin_vertical)
    if n < 0 or n > configuration.n:
        raise ParameterError("Column {} is outside of the materialised range [0, {}].".format(n, configuration.n))
    if n == 0:
        return 0
    return shortest_path_oracle(geometry, configuration.head(n), (0, 0), (n, 0))


def closed_edges_per_square(horizontal: npt.NDArray[numpy.bool_], vertical: npt.NDArray[numpy.bool_]) -> npt.NDArray[numpy.int64]:
    """Number of closed sides of every unit square.

    Parameters
    ----------
    horizontal : numpy.ndarray
        Open flags, shape ``(..., n, 2K + 1)``.
    vertical : numpy.ndarray
        Open flags of columns ``0 ... n``, shape ``(..., n + 1, 2K)``.

    Returns
    -------
    numpy.ndarray
        Shape ``(..., n, 2K)``: entry ``[i, r]`` counts the closed sides of the square
        with lower left corner ``(i, r - K)``.

    """
    closed_h = ~horizontal
    closed_v = ~vertical
    return (
        closed_h[..., :, :-1].astype(numpy.int64)
        + closed_h[..., :, 1:]
        + closed_v[..., :-1, :]
        + closed_v[..., 1:, :]
    )


def event_a_mask(horizontal: npt.NDArray[numpy.bool_], vertical: npt.NDArray[numpy.bool_]) -> npt.NDArray[numpy.bool_]:
    """Event A on whole segments: every unit square has at most one closed side.

    Leading dimensions of the flag arrays are batch dimensions.
    """
    counts = closed_edges_per_square(horizontal, vertical)
    return (counts <= 1).all(axis=(-2, -1))


def check_event_A(
    geometry: StripGeometry,
    columns: Union[StripConfiguration, Sequence[EdgeColumn]],
    box: Optional[Box] = None,
    origin_vertical: Optional[BoolN] = None,
) -> bool:
    """True iff every unit square of ``box`` has at most one closed edge among its four sides.

    Parameters
    ----------
    geometry : :class:`StripGeometry`
    columns : :class:`StripConfiguration` | list[:class:`EdgeColumn`]
    box : :class:`Box`, optional
        Vertex box of the squares to inspect. Defaults to the whole segment ``[0, n] x [-K, K]``.
    origin_vertical : BoolN, optional
        Vertical flags of column 0 if ``columns`` is a plain sequence.

    Returns
    -------
    bool

    Examples
    --------
    >>> geometry = StripGeometry(1, "standard")
    >>> check_event_A(geometry, [EdgeColumn.all_open(geometry)] * 2)
    True

    """
    configuration = _configuration(geometry, columns, origin_vertical)
    K = geometry.K
    if box is None:
        box = Box(0, configuration.n, -K, K)
    if not (0 <= box.first_column <= box.last_column <= configuration.n and -K <= box.low_row <= box.high_row <= K):
        raise ParameterError("Box {} is outside of the materialised segment [0, {}] x [-{}, {}].".format(tuple(box), configuration.n, K, K))
    counts = closed_edges_per_square(configuration.horizontal_array(), configuration.vertical_array())
    squares = counts[box.first_column : box.last_column, box.low_row + K : box.high_row + K]
    return bool((squares <= 1).all())


def event_a_bound(K: int, n: int, eps: float) -> float:
    """Union bound ``22 K n eps^2`` on the probability that event A fails."""
    return 22.0 * K * n * eps * eps


def event_a_bound_sharp(K: int, n: int, eps: float) -> float:
    """The sharper intermediate bound ``2 K n (6 eps^2 + 4 eps^3 + eps^4)``."""
    return 2.0 * K * n * (6.0 * eps**2 + 4.0 * eps**3 + eps**4)
