from typing import Optional

import numpy
import numpy.typing as npt  # noqa: F401

from compas_fpp.exceptions import ParameterError
from compas_fpp.graphs import as_length
from compas_fpp.graphs import single_source_lengths
from compas_fpp.plane.clusters import ClusterLabels
from compas_fpp.plane.window import PlaneWindow
from compas_fpp.strip.oracle import CROSS_DIAGONAL_LENGTH
from compas_fpp.types import Vertex


def distances_from(window: PlaneWindow, source: Vertex) -> npt.NDArray[numpy.float64]:
    """Open path lengths from ``source`` to every vertex index, ``inf`` when unreachable."""
    return single_source_lengths(window.graph(), window.index(source))


def plane_distance(window: PlaneWindow, source: Vertex, target: Vertex) -> Optional[int]:
    """Length of a shortest open path inside the window, ``None`` if there is none.

    Examples
    --------
    >>> plane_distance(PlaneWindow.all_open(0, 5, -2, 2), (0, 0), (5, 1))
    6

    """
    target_index = window.index(target)
    return as_length(distances_from(window, source)[target_index])


def cross_plane_distances(window: PlaneWindow, source: Vertex) -> npt.NDArray[numpy.float64]:
    """Distances from ``source`` with every vertical edge open and diagonals of length 2 added."""
    graph = window.graph(open_verticals=True, diagonal_length=CROSS_DIAGONAL_LENGTH)
    return single_source_lengths(graph, window.index(source))


def axis_points(window: PlaneWindow, n: int):
    """The points ``(n, 0), (2n, 0), ...`` inside the window."""
    if n < 1:
        raise ParameterError("The spacing must be a positive integer: {}".format(n))
    x = n
    while window.contains((x, 0)):
        yield (x, 0)
        x += n


def find_T(window: PlaneWindow, clusters: ClusterLabels, n: int, k: int) -> Optional[Vertex]:
    """The ``k``-th point of ``(n, 0), (2n, 0), ...`` whose cluster reaches the border of the window.

    Returns ``None`` if fewer than ``k`` such points fit in the window.

    Examples
    --------
    >>> from compas_fpp.plane.clusters import label_clusters
    >>> window = PlaneWindow.all_open(-2, 10, -2, 2)
    >>> find_T(window, label_clusters(window), 3, 2)
    (6, 0)

    """
    if k < 1:
        raise ParameterError("The index k must be a positive integer: {}".format(k))
    found = 0
    for point in axis_points(window, n):
        if clusters.is_boundary_connected(point):
            found += 1
            if found == k:
                return point
    return None
