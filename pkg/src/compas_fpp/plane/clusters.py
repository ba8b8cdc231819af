import numpy
import numpy.typing as npt  # noqa: F401
from scipy.sparse.csgraph import connected_components

from compas_fpp.kernels import grid_union_find
from compas_fpp.kernels import has_numba
from compas_fpp.plane.window import PlaneWindow
from compas_fpp.types import Vertex


class ClusterLabels:
    """Open clusters of a window.

    Parameters
    ----------
    window : :class:`PlaneWindow`
    labels : numpy.ndarray
        For every vertex index the smallest vertex index of its cluster.

    Attributes
    ----------
    boundary_connected : numpy.ndarray
        Per vertex: its cluster touches the border of the window.

    """

    def __init__(self, window: PlaneWindow, labels: npt.NDArray[numpy.int64]):
        self.window = window
        self.labels = labels
        border = numpy.unique(labels[window.border_mask()])
        self.boundary_connected = numpy.isin(labels, border)

    def __repr__(self):
        return "ClusterLabels({!r}, clusters={})".format(self.window, self.cluster_count)

    @property
    def cluster_count(self) -> int:
        return int(numpy.unique(self.labels).size)

    def label(self, vertex: Vertex) -> int:
        return int(self.labels[self.window.index(vertex)])

    def connected(self, a: Vertex, b: Vertex) -> bool:
        return self.label(a) == self.label(b)

    def is_boundary_connected(self, vertex: Vertex) -> bool:
        return bool(self.boundary_connected[self.window.index(vertex)])


def label_clusters(window: PlaneWindow) -> ClusterLabels:
    """Connected components of the open subgraph of ``window``.

    Uses the compiled union-find when numba is available and
    :func:`scipy.sparse.csgraph.connected_components` otherwise.
    Both give every vertex the smallest vertex index of its component.

    Examples
    --------
    >>> clusters = label_clusters(PlaneWindow.all_open(0, 2, -1, 1))
    >>> clusters.cluster_count
    1

    """
    if has_numba:
        labels = numpy.empty(window.vertex_count, dtype=numpy.int64)
        grid_union_find(window.width, window.height, window.horizontal, window.vertical, labels)
        return ClusterLabels(window, labels)
    count, component = connected_components(window.graph(), directed=False)
    smallest = numpy.full(count, window.vertex_count, dtype=numpy.int64)
    numpy.minimum.at(smallest, component, numpy.arange(window.vertex_count, dtype=numpy.int64))
    return ClusterLabels(window, smallest[component])
