"""Weighted lattice graphs and exact shortest path lengths.

Graphs are undirected and stored as :class:`scipy.sparse.csr_matrix` with one
entry per edge. Lengths are small positive integers, so the floating point
distances returned by :func:`scipy.sparse.csgraph.dijkstra` are exact integers.
"""

from typing import Optional

import numpy
import numpy.typing as npt  # noqa: F401
import scipy.sparse
from scipy.sparse.csgraph import dijkstra

from compas_fpp.exceptions import ContractError


def edge_graph(
    vertex_count: int,
    u: npt.NDArray[numpy.int64],
    v: npt.NDArray[numpy.int64],
    length: npt.NDArray[numpy.int64],
) -> scipy.sparse.csr_matrix:
    """Assemble an undirected graph from edge endpoint and length arrays."""
    if (length <= 0).any():
        raise ContractError("Edge lengths must be positive.")
    return scipy.sparse.coo_matrix((length.astype(numpy.float64), (u, v)), shape=(vertex_count, vertex_count)).tocsr()


def grid_edges(
    width: int,
    height: int,
    horizontal: Optional[npt.NDArray[numpy.bool_]] = None,
    vertical: Optional[npt.NDArray[numpy.bool_]] = None,
    diagonal_length: Optional[int] = None,
):
    """Open edges of a ``width x height`` grid of vertices.

    Vertex ``(x, y)`` (zero based offsets) has index ``x * height + y``.

    Parameters
    ----------
    width, height : int
        Number of vertex columns and rows.
    horizontal : numpy.ndarray, optional
        Open flags of the edges ``(x, y) -> (x + 1, y)``, shape ``(width - 1, height)``. Default all open.
    vertical : numpy.ndarray, optional
        Open flags of the edges ``(x, y) -> (x, y + 1)``, shape ``(width, height - 1)``. Default all open.
    diagonal_length : int, optional
        If given, both diagonals ``(x, y) -> (x + 1, y +- 1)`` of every unit square are added, open, with this length.

    Returns
    -------
    tuple[numpy.ndarray, numpy.ndarray, numpy.ndarray]
        Endpoints ``u``, ``v`` and lengths of the open edges.

    """
    index = numpy.arange(width * height, dtype=numpy.int64).reshape(width, height)
    if horizontal is None:
        horizontal = numpy.ones((width - 1, height), dtype=bool)
    if vertical is None:
        vertical = numpy.ones((width, height - 1), dtype=bool)
    if horizontal.shape != (width - 1, height) or vertical.shape != (width, height - 1):
        raise ContractError("Edge grids do not match a {} x {} vertex grid.".format(width, height))

    us = [index[:-1, :][horizontal], index[:, :-1][vertical]]
    vs = [index[1:, :][horizontal], index[:, 1:][vertical]]
    lengths = [numpy.ones(int(horizontal.sum()) + int(vertical.sum()), dtype=numpy.int64)]

    if diagonal_length is not None:
        up_u = index[:-1, :-1].ravel()
        up_v = index[1:, 1:].ravel()
        down_u = index[:-1, 1:].ravel()
        down_v = index[1:, :-1].ravel()
        us += [up_u, down_u]
        vs += [up_v, down_v]
        lengths.append(numpy.full(up_u.size + down_u.size, diagonal_length, dtype=numpy.int64))

    return numpy.concatenate(us), numpy.concatenate(vs), numpy.concatenate(lengths)


def single_source_lengths(graph: scipy.sparse.csr_matrix, source: int) -> npt.NDArray[numpy.float64]:
    """Shortest path lengths from ``source`` to every vertex, ``inf`` when unreachable."""
    return dijkstra(graph, directed=False, indices=source)


def as_length(value: float) -> Optional[int]:
    """Convert a graph distance to an integer length, ``None`` when unreachable."""
    if numpy.isinf(value):
        return None
    return int(round(value))
