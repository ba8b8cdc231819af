from enum import Enum
from typing import List
from typing import Optional
from typing import Sequence

import numpy
import numpy.typing as npt  # noqa: F401
from compas.data import Data

from compas_fpp.exceptions import ContractError
from compas_fpp.exceptions import ParameterError
from compas_fpp.types import BoolN
from compas_fpp.types import IntN


class Model(str, Enum):
    """Edge model of the strip.

    * ``CROSS``: vertical and diagonal edges always open, horizontal edges random.
    * ``STANDARD``: no diagonals, horizontal and vertical edges random.

    """

    CROSS = "cross"
    STANDARD = "standard"


def _readonly(array: numpy.ndarray) -> numpy.ndarray:
    array.flags.writeable = False
    return array


def as_flags(values: BoolN) -> numpy.ndarray:
    """Copy of ``values`` as a read-only boolean vector."""
    return _readonly(numpy.array(values, dtype=bool).ravel())


class StripGeometry(Data):
    """The strip :math:`\\mathbb{Z} \\times [-K, K]` and its edge model.

    Parameters
    ----------
    K : int
        Half width of the strip. Rows span ``-K ... K``.
    model : :class:`Model` | str, optional
        The edge model.

    Attributes
    ----------
    K : int
    model : :class:`Model`
    rows : int
        Number of rows, ``2K + 1``.
    sites : int
        Number of vertical edges per column, ``2K``.
        This is also the number of sites of the associated particle system.

    Examples
    --------
    >>> geometry = StripGeometry(2)
    >>> geometry.rows
    5
    >>> geometry.row_index(-2)
    0

    """

    @property
    def __data__(self):
        return {"K": self.K, "model": self.model.value}

    def __init__(self, K: int, model: Model = Model.CROSS, name: Optional[str] = None):
        super(StripGeometry, self).__init__(name=name)
        if int(K) != K or K < 1:
            raise ParameterError("The half width K must be a positive integer: {}".format(K))
        self.K = int(K)
        self.model = Model(model)

    def __repr__(self):
        return "StripGeometry(K={}, model={})".format(self.K, self.model.value)

    def __eq__(self, other):
        return isinstance(other, StripGeometry) and self.K == other.K and self.model == other.model

    def __hash__(self):
        return hash((self.K, self.model))

    @property
    def rows(self) -> int:
        return 2 * self.K + 1

    @property
    def sites(self) -> int:
        return 2 * self.K

    @property
    def is_cross(self) -> bool:
        return self.model == Model.CROSS

    def row_index(self, j: int) -> int:
        """Position of row ``j`` in a column vector."""
        if j < -self.K or j > self.K:
            raise ParameterError("Row {} is outside of the strip [-{}, {}].".format(j, self.K, self.K))
        return j + self.K

    def row_values(self) -> npt.NDArray[numpy.int64]:
        return numpy.arange(-self.K, self.K + 1, dtype=numpy.int64)


class EdgeColumn(Data):
    """Open/closed flags of the edges between column ``i`` and column ``i + 1``.

    Parameters
    ----------
    horizontal : BoolN
        ``2K + 1`` flags of the edges ``(i, j) -> (i + 1, j)``, rows ``-K ... K``.
        ``True`` is open.
    vertical : BoolN, optional
        ``2K`` flags of the edges ``(i + 1, j) -> (i + 1, j + 1)``, rows ``-K ... K - 1``.
        Only for the standard model. In the cross model all verticals are open.

    """

    @property
    def __data__(self):
        data = {"horizontal": self.horizontal.astype(int).tolist()}
        if self.vertical is not None:
            data["vertical"] = self.vertical.astype(int).tolist()
        return data

    def __init__(self, horizontal: BoolN, vertical: Optional[BoolN] = None, name: Optional[str] = None):
        super(EdgeColumn, self).__init__(name=name)
        self.horizontal = as_flags(horizontal)
        self.vertical = None if vertical is None else as_flags(vertical)
        if self.horizontal.size < 3 or self.horizontal.size % 2 == 0:
            raise ContractError("A column has 2K + 1 horizontal flags, got {}.".format(self.horizontal.size))
        if self.vertical is not None and self.vertical.size != self.horizontal.size - 1:
            raise ContractError("A column has 2K vertical flags, got {}.".format(self.vertical.size))

    def __repr__(self):
        return "EdgeColumn(K={}, closed={})".format(self.K, self.closed_count)

    def __eq__(self, other):
        if not isinstance(other, EdgeColumn):
            return False
        if (self.vertical is None) != (other.vertical is None):
            return False
        if not numpy.array_equal(self.horizontal, other.horizontal):
            return False
        return self.vertical is None or numpy.array_equal(self.vertical, other.vertical)

    __hash__ = None

    @property
    def K(self) -> int:
        return (self.horizontal.size - 1) // 2

    @property
    def closed_count(self) -> int:
        closed = int((~self.horizontal).sum())
        if self.vertical is not None:
            closed += int((~self.vertical).sum())
        return closed

    def check(self, geometry: StripGeometry) -> None:
        """Raise a :class:`ContractError` if the column does not fit ``geometry``."""
        if self.K != geometry.K:
            raise ContractError("Column of half width {} used in a strip of half width {}.".format(self.K, geometry.K))
        if geometry.is_cross and self.vertical is not None:
            raise ContractError("Cross model columns have no vertical component.")
        if not geometry.is_cross and self.vertical is None:
            raise ContractError("Standard model columns need vertical flags.")

    @classmethod
    def all_open(cls, geometry: StripGeometry) -> "EdgeColumn":
        vertical = None if geometry.is_cross else numpy.ones(geometry.sites, dtype=bool)
        return cls(numpy.ones(geometry.rows, dtype=bool), vertical)

    @classmethod
    def all_closed(cls, geometry: StripGeometry) -> "EdgeColumn":
        vertical = None if geometry.is_cross else numpy.zeros(geometry.sites, dtype=bool)
        return cls(numpy.zeros(geometry.rows, dtype=bool), vertical)


class DistanceProfile(Data):
    """The distances ``D(i, j)``, ``j = -K ... K``, from the origin to column ``i``.

    Parameters
    ----------
    column_index : int
        The column ``i``.
    d : IntN
        ``2K + 1`` non-negative distances.

    Examples
    --------
    >>> profile = DistanceProfile.initial(2)
    >>> profile.d.tolist()
    [2, 1, 0, 1, 2]
    >>> profile.at(0)
    0

    """

    @property
    def __data__(self):
        return {"column_index": self.column_index, "d": self.d.tolist()}

    def __init__(self, column_index: int, d: IntN, name: Optional[str] = None):
        super(DistanceProfile, self).__init__(name=name)
        if column_index < 0:
            raise ContractError("The column index must be non-negative: {}".format(column_index))
        self.column_index = int(column_index)
        self.d = _readonly(numpy.array(d, dtype=numpy.int64).ravel())
        if self.d.size < 3 or self.d.size % 2 == 0:
            raise ContractError("A profile has 2K + 1 entries, got {}.".format(self.d.size))

    def __repr__(self):
        return "DistanceProfile(column_index={}, d={})".format(self.column_index, self.d.tolist())

    def __eq__(self, other):
        return isinstance(other, DistanceProfile) and self.column_index == other.column_index and numpy.array_equal(self.d, other.d)

    __hash__ = None

    @property
    def K(self) -> int:
        return (self.d.size - 1) // 2

    def at(self, j: int) -> int:
        """Distance to the vertex ``(i, j)``."""
        if j < -self.K or j > self.K:
            raise ParameterError("Row {} is outside of the strip [-{}, {}].".format(j, self.K, self.K))
        return int(self.d[j + self.K])

    def check(self) -> None:
        """Raise a :class:`ContractError` unless the cross model invariants hold.

        Adjacent entries differ by exactly one, and ``d[j]`` has the parity of ``i + j``.
        """
        if (self.d < 0).any():
            raise ContractError("Distances must be non-negative: {}".format(self.d.tolist()))
        if not (numpy.abs(numpy.diff(self.d)) == 1).all():
            raise ContractError("Vertical neighbours must differ by exactly one: {}".format(self.d.tolist()))
        rows = numpy.arange(-self.K, self.K + 1)
        if not ((self.d - self.column_index - rows) % 2 == 0).all():
            raise ContractError("Distances must have the parity of i + j in column {}: {}".format(self.column_index, self.d.tolist()))

    @classmethod
    def initial(cls, K: int) -> "DistanceProfile":
        """Column 0 with the source at the origin, ``d[j] = |j|``."""
        return cls(0, numpy.abs(numpy.arange(-K, K + 1)))


class StripConfiguration(Data):
    """A materialised segment of the strip: columns ``0 ... n`` and their edges.

    Parameters
    ----------
    geometry : :class:`StripGeometry`
    columns : list[:class:`EdgeColumn`]
        ``columns[i]`` holds the edges between column ``i`` and ``i + 1``.
    origin_vertical : BoolN, optional
        The ``2K`` vertical flags of column 0 (standard model only).
        Defaults to all open.

    """

    @property
    def __data__(self):
        return {
            "geometry": self.geometry.__data__,
            "columns": [column.__data__ for column in self.columns],
            "origin_vertical": None if self.origin_vertical is None else self.origin_vertical.astype(int).tolist(),
        }

    @classmethod
    def __from_data__(cls, data):
        geometry = StripGeometry.__from_data__(data["geometry"])
        columns = [EdgeColumn.__from_data__(column) for column in data["columns"]]
        return cls(geometry, columns, data.get("origin_vertical"))

    def __init__(
        self,
        geometry: StripGeometry,
        columns: Sequence[EdgeColumn],
        origin_vertical: Optional[BoolN] = None,
        name: Optional[str] = None,
    ):
        super(StripConfiguration, self).__init__(name=name)
        self.geometry = geometry
        self.columns = list(columns)  # type: List[EdgeColumn]
        for column in self.columns:
            column.check(geometry)
        if geometry.is_cross:
            if origin_vertical is not None:
                raise ContractError("Cross model configurations have no origin verticals.")
            self.origin_vertical = None
        else:
            if origin_vertical is None:
                origin_vertical = numpy.ones(geometry.sites, dtype=bool)
            self.origin_vertical = as_flags(origin_vertical)
            if self.origin_vertical.size != geometry.sites:
                raise ContractError("Column 0 has 2K vertical flags, got {}.".format(self.origin_vertical.size))

    def __repr__(self):
        return "StripConfiguration({!r}, n={})".format(self.geometry, self.n)

    def __eq__(self, other):
        if not isinstance(other, StripConfiguration):
            return False
        if self.geometry != other.geometry or self.columns != other.columns:
            return False
        if self.origin_vertical is None:
            return other.origin_vertical is None
        return numpy.array_equal(self.origin_vertical, other.origin_vertical)

    __hash__ = None

    @property
    def n(self) -> int:
        """Index of the last materialised column."""
        return len(self.columns)

    def horizontal_array(self) -> npt.NDArray[numpy.bool_]:
        """Horizontal flags as an ``(n, 2K + 1)`` array."""
        if not self.columns:
            return numpy.ones((0, self.geometry.rows), dtype=bool)
        return numpy.stack([column.horizontal for column in self.columns])

    def vertical_array(self) -> npt.NDArray[numpy.bool_]:
        """Vertical flags of columns ``0 ... n`` as an ``(n + 1, 2K)`` array.

        All open for the cross model.
        """
        if self.geometry.is_cross:
            return numpy.ones((self.n + 1, self.geometry.sites), dtype=bool)
        return numpy.stack([self.origin_vertical] + [column.vertical for column in self.columns])

    @classmethod
    def from_arrays(
        cls,
        geometry: StripGeometry,
        horizontal: npt.NDArray[numpy.bool_],
        vertical: Optional[npt.NDArray[numpy.bool_]] = None,
    ) -> "StripConfiguration":
        """Inverse of :meth:`horizontal_array` and :meth:`vertical_array`."""
        if geometry.is_cross:
            return cls(geometry, [EdgeColumn(row) for row in horizontal])
        if vertical is None or len(vertical) != len(horizontal) + 1:
            raise ContractError("A standard segment of {} columns needs {} vertical rows.".format(len(horizontal), len(horizontal) + 1))
        columns = [EdgeColumn(horizontal[i], vertical[i + 1]) for i in range(len(horizontal))]
        return cls(geometry, columns, vertical[0])

    def head(self, n: int) -> "StripConfiguration":
        """The configuration restricted to columns ``0 ... n``."""
        if n < 0 or n > self.n:
            raise ParameterError("Column {} is outside of the materialised range [0, {}].".format(n, self.n))
        return StripConfiguration(self.geometry, self.columns[:n], self.origin_vertical)

    def as_cross(self) -> "StripConfiguration":
        """Same horizontal edges with open verticals and open diagonals."""
        geometry = StripGeometry(self.geometry.K, Model.CROSS)
        return StripConfiguration(geometry, [EdgeColumn(column.horizontal) for column in self.columns])
