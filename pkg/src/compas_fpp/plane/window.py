from typing import Optional

import numpy
import numpy.typing as npt  # noqa: F401
import scipy.sparse
from compas.data import Data

from compas_fpp.exceptions import ContractError
from compas_fpp.exceptions import ParameterError
from compas_fpp.graphs import edge_graph
from compas_fpp.graphs import grid_edges
from compas_fpp.strip.sampling import check_eps
from compas_fpp.strip.sampling import sample_flags
from compas_fpp.types import Vertex


class PlaneWindow(Data):
    """A finite window ``[x_min, x_max] x [y_min, y_max]`` of the square lattice with open/closed edges.

    Vertex ``(x, y)`` has index ``(x - x_min) * height + (y - y_min)``.

    Parameters
    ----------
    x_min, y_min : int
        Lower left vertex.
    horizontal : numpy.ndarray
        Open flags of the edges ``(x, y) -> (x + 1, y)``, shape ``(width - 1, height)``.
    vertical : numpy.ndarray
        Open flags of the edges ``(x, y) -> (x, y + 1)``, shape ``(width, height - 1)``.
    eps : float, optional
        Closure probability the edges were sampled with.

    Examples
    --------
    >>> window = PlaneWindow.all_open(0, 3, -1, 1)
    >>> window.width, window.height
    (4, 3)
    >>> window.index((0, 0))
    1

    """

    @property
    def __data__(self):
        return {
            "x_min": self.x_min,
            "y_min": self.y_min,
            "horizontal": self.horizontal.astype(int).tolist(),
            "vertical": self.vertical.astype(int).tolist(),
            "eps": self.eps,
        }

    @classmethod
    def __from_data__(cls, data):
        horizontal = numpy.array(data["horizontal"], dtype=bool)
        vertical = numpy.array(data["vertical"], dtype=bool)
        return cls(data["x_min"], data["y_min"], horizontal, vertical, data.get("eps"))

    def __init__(
        self,
        x_min: int,
        y_min: int,
        horizontal: npt.NDArray[numpy.bool_],
        vertical: npt.NDArray[numpy.bool_],
        eps: Optional[float] = None,
        name: Optional[str] = None,
    ):
        super(PlaneWindow, self).__init__(name=name)
        self.x_min = int(x_min)
        self.y_min = int(y_min)
        self.horizontal = numpy.asarray(horizontal, dtype=bool)
        self.vertical = numpy.asarray(vertical, dtype=bool)
        self.eps = eps
        if self.horizontal.ndim != 2 or self.vertical.ndim != 2:
            raise ContractError("Edge grids must be two dimensional.")
        width = self.vertical.shape[0]
        height = self.horizontal.shape[1]
        if width < 1 or height < 1 or self.horizontal.shape != (width - 1, height) or self.vertical.shape != (width, height - 1):
            raise ContractError("Edge grids {} and {} do not describe a vertex window.".format(self.horizontal.shape, self.vertical.shape))

    def __repr__(self):
        return "PlaneWindow([{}, {}] x [{}, {}])".format(self.x_min, self.x_max, self.y_min, self.y_max)

    @property
    def width(self) -> int:
        return self.vertical.shape[0]

    @property
    def height(self) -> int:
        return self.horizontal.shape[1]

    @property
    def x_max(self) -> int:
        return self.x_min + self.width - 1

    @property
    def y_max(self) -> int:
        return self.y_min + self.height - 1

    @property
    def vertex_count(self) -> int:
        return self.width * self.height

    def contains(self, vertex: Vertex) -> bool:
        x, y = vertex
        return self.x_min <= x <= self.x_max and self.y_min <= y <= self.y_max

    def index(self, vertex: Vertex) -> int:
        if not self.contains(vertex):
            raise ParameterError("Vertex {} is outside of {!r}.".format(vertex, self))
        x, y = vertex
        return (x - self.x_min) * self.height + (y - self.y_min)

    def vertex(self, index: int) -> Vertex:
        x, y = divmod(int(index), self.height)
        return (x + self.x_min, y + self.y_min)

    def border_mask(self) -> npt.NDArray[numpy.bool_]:
        """Vertices on the boundary of the window, by index."""
        mask = numpy.zeros((self.width, self.height), dtype=bool)
        mask[0, :] = mask[-1, :] = True
        mask[:, 0] = mask[:, -1] = True
        return mask.ravel()

    def graph(self, open_verticals: bool = False, diagonal_length: Optional[int] = None) -> scipy.sparse.csr_matrix:
        """The open subgraph as a sparse matrix of edge lengths.

        Parameters
        ----------
        open_verticals : bool, optional
            Treat every vertical edge as open.
        diagonal_length : int, optional
            Add both diagonals of every unit square, open, with this length.

        """
        vertical = None if open_verticals else self.vertical
        u, v, length = grid_edges(self.width, self.height, self.horizontal, vertical, diagonal_length)
        return edge_graph(self.vertex_count, u, v, length)

    def with_edge(self, kind: str, vertex: Vertex, is_open: bool) -> "PlaneWindow":
        """Copy with the horizontal (``"h"``) or vertical (``"v"``) edge leaving ``vertex`` set."""
        x = vertex[0] - self.x_min
        y = vertex[1] - self.y_min
        horizontal = self.horizontal.copy()
        vertical = self.vertical.copy()
        if kind == "h":
            horizontal[x, y] = is_open
        elif kind == "v":
            vertical[x, y] = is_open
        else:
            raise ParameterError("Edge kind must be 'h' or 'v': {!r}".format(kind))
        return PlaneWindow(self.x_min, self.y_min, horizontal, vertical, self.eps)

    def crop(self, x_min: int, x_max: int, y_min: int, y_max: int) -> "PlaneWindow":
        """The sub-window ``[x_min, x_max] x [y_min, y_max]`` with the same edges.

        Examples
        --------
        >>> window = PlaneWindow.all_open(-4, 8, -4, 4).crop(-2, 6, -2, 2)
        >>> window.width, window.height
        (9, 5)

        """
        _extent(x_min, x_max, y_min, y_max)
        if not self.contains((x_min, y_min)) or not self.contains((x_max, y_max)):
            raise ParameterError("[{}, {}] x [{}, {}] is not inside {!r}.".format(x_min, x_max, y_min, y_max, self))
        x0, x1 = x_min - self.x_min, x_max - self.x_min
        y0, y1 = y_min - self.y_min, y_max - self.y_min
        horizontal = self.horizontal[x0:x1, y0 : y1 + 1].copy()
        vertical = self.vertical[x0 : x1 + 1, y0:y1].copy()
        return PlaneWindow(x_min, y_min, horizontal, vertical, self.eps)

    @classmethod
    def sample(cls, rng: numpy.random.Generator, eps: float, x_min: int, x_max: int, y_min: int, y_max: int) -> "PlaneWindow":
        """Sample every edge of the window, closed with probability ``eps``.

        All horizontal flags are drawn first, as one ``(width - 1, height)`` block, then the vertical flags.
        """
        eps = check_eps(eps)
        width, height = _extent(x_min, x_max, y_min, y_max)
        horizontal = sample_flags(rng, (width - 1, height), eps)
        vertical = sample_flags(rng, (width, height - 1), eps)
        return cls(x_min, y_min, horizontal, vertical, eps)

    @classmethod
    def all_open(cls, x_min: int, x_max: int, y_min: int, y_max: int) -> "PlaneWindow":
        width, height = _extent(x_min, x_max, y_min, y_max)
        return cls(x_min, y_min, numpy.ones((width - 1, height), dtype=bool), numpy.ones((width, height - 1), dtype=bool), 0.0)

    @classmethod
    def all_closed(cls, x_min: int, x_max: int, y_min: int, y_max: int) -> "PlaneWindow":
        width, height = _extent(x_min, x_max, y_min, y_max)
        return cls(x_min, y_min, numpy.zeros((width - 1, height), dtype=bool), numpy.zeros((width, height - 1), dtype=bool), 1.0)


def _extent(x_min: int, x_max: int, y_min: int, y_max: int):
    if x_max < x_min or y_max < y_min:
        raise ParameterError("Empty window [{}, {}] x [{}, {}].".format(x_min, x_max, y_min, y_max))
    return x_max - x_min + 1, y_max - y_min + 1
