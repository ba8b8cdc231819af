from typing import Optional
from typing import Sequence
from typing import Union

import numpy
import scipy.sparse

from compas_fpp.exceptions import ParameterError
from compas_fpp.graphs import as_length
from compas_fpp.graphs import edge_graph
from compas_fpp.graphs import grid_edges
from compas_fpp.graphs import single_source_lengths
from compas_fpp.strip.geometry import EdgeColumn
from compas_fpp.strip.geometry import StripConfiguration
from compas_fpp.strip.geometry import StripGeometry
from compas_fpp.types import BoolN
from compas_fpp.types import Vertex

CROSS_DIAGONAL_LENGTH = 2


def strip_graph(configuration: StripConfiguration) -> scipy.sparse.csr_matrix:
    """The explicit weighted graph of a materialised strip segment.

    Vertex ``(i, j)`` has index ``i * (2K + 1) + j + K``.
    Horizontal and vertical edges have length 1, cross model diagonals length 2.
    """
    geometry = configuration.geometry
    width = configuration.n + 1
    diagonal = CROSS_DIAGONAL_LENGTH if geometry.is_cross else None
    u, v, length = grid_edges(
        width,
        geometry.rows,
        horizontal=configuration.horizontal_array(),
        vertical=configuration.vertical_array(),
        diagonal_length=diagonal,
    )
    return edge_graph(width * geometry.rows, u, v, length)


def _vertex_index(configuration: StripConfiguration, vertex: Vertex) -> int:
    i, j = vertex
    K = configuration.geometry.K
    if i < 0 or i > configuration.n or j < -K or j > K:
        raise ParameterError("Vertex {} is outside of the materialised segment [0, {}] x [-{}, {}].".format(vertex, configuration.n, K, K))
    return i * configuration.geometry.rows + j + K


def shortest_path_oracle(
    geometry: StripGeometry,
    columns: Union[StripConfiguration, Sequence[EdgeColumn]],
    source: Vertex,
    target: Vertex,
    origin_vertical: Optional[BoolN] = None,
) -> Optional[int]:
    """Exact shortest path length between two vertices of a materialised strip segment.

    No structural assumption is made: paths may step left, and every edge of the
    segment is available.

    Parameters
    ----------
    geometry : :class:`StripGeometry`
    columns : :class:`StripConfiguration` | list[:class:`EdgeColumn`]
        The edges of columns ``0 ... n``.
    source, target : tuple[int, int]
        Vertices ``(i, j)`` with ``0 <= i <= n`` and ``-K <= j <= K``.
    origin_vertical : BoolN, optional
        Vertical flags of column 0 in the standard model, if ``columns`` is a plain sequence.

    Returns
    -------
    int | None
        The length, or ``None`` if no open path exists (standard model only).

    Raises
    ------
    ParameterError
        If a vertex lies outside of the segment.

    Examples
    --------
    >>> geometry = StripGeometry(2)
    >>> columns = [EdgeColumn.all_open(geometry)] * 3
    >>> shortest_path_oracle(geometry, columns, (0, 0), (3, -2))
    5

    """
    if isinstance(columns, StripConfiguration):
        configuration = columns
    else:
        configuration = StripConfiguration(geometry, columns, origin_vertical)
    s = _vertex_index(configuration, source)
    t = _vertex_index(configuration, target)
    lengths = single_source_lengths(strip_graph(configuration), s)
    return as_length(lengths[t])


def oracle_profile(configuration: StripConfiguration, column: int) -> numpy.ndarray:
    """Oracle distances from the origin to every vertex of ``column``, ``-1`` when unreachable."""
    s = _vertex_index(configuration, (0, 0))
    lengths = single_source_lengths(strip_graph(configuration), s)
    rows = configuration.geometry.rows
    values = lengths[column * rows : (column + 1) * rows]
    return numpy.where(numpy.isinf(values), -1, numpy.round(values)).astype(numpy.int64)
