"""Sampling of strip edges.

Every edge flag consumes exactly one uniform draw ``u`` from the stream and is
closed iff ``u < eps``. Within a column the draws are taken in row order:
first the ``2K + 1`` horizontal flags (rows ``-K ... K``), then, for the standard
model only, the ``2K`` vertical flags (rows ``-K ... K - 1``). A configuration
first draws the verticals of column 0 (standard model only) and then its columns
one after the other, so a fixed seed reproduces the same edges column by column.
"""

import numpy

from compas_fpp.exceptions import ParameterError
from compas_fpp.strip.geometry import EdgeColumn
from compas_fpp.strip.geometry import StripConfiguration
from compas_fpp.strip.geometry import StripGeometry


def check_eps(eps: float) -> float:
    """Validate a closure probability."""
    if not 0.0 <= eps <= 1.0:
        raise ParameterError("The closure probability must lie in [0, 1]: {}".format(eps))
    return float(eps)


def sample_flags(rng: numpy.random.Generator, size, eps: float) -> numpy.ndarray:
    """Open (``True``) flags, each closed independently with probability ``eps``."""
    return rng.random(size) >= eps


def sample_column(rng: numpy.random.Generator, geometry: StripGeometry, eps: float) -> EdgeColumn:
    """Sample the edges between two consecutive columns.

    Parameters
    ----------
    rng : :class:`numpy.random.Generator`
        The random stream. Consumes ``2K + 1`` draws (cross) or ``4K + 1`` draws (standard).
    geometry : :class:`StripGeometry`
    eps : float
        Closure probability of every random edge.

    Returns
    -------
    :class:`EdgeColumn`

    Raises
    ------
    ParameterError
        If ``eps`` is outside of ``[0, 1]``.

    """
    eps = check_eps(eps)
    horizontal = sample_flags(rng, geometry.rows, eps)
    vertical = None if geometry.is_cross else sample_flags(rng, geometry.sites, eps)
    return EdgeColumn(horizontal, vertical)


def sample_configuration(rng: numpy.random.Generator, geometry: StripGeometry, eps: float, n: int) -> StripConfiguration:
    """Sample the columns ``0 ... n`` of the strip."""
    eps = check_eps(eps)
    if n < 0:
        raise ParameterError("The number of columns must be non-negative: {}".format(n))
    origin_vertical = None if geometry.is_cross else sample_flags(rng, geometry.sites, eps)
    columns = [sample_column(rng, geometry, eps) for _ in range(n)]
    return StripConfiguration(geometry, columns, origin_vertical)


def sample_standard_arrays(rng: numpy.random.Generator, K: int, eps: float, batch: int, n: int):
    """Sample ``batch`` standard model segments at once.

    The draws are laid out as one ``(batch, n, 2K + 1)`` block of horizontal flags
    followed by one ``(batch, n + 1, 2K)`` block of vertical flags.

    Returns
    -------
    tuple[numpy.ndarray, numpy.ndarray]
        Horizontal and vertical open flags.

    """
    eps = check_eps(eps)
    horizontal = sample_flags(rng, (batch, n, 2 * K + 1), eps)
    vertical = sample_flags(rng, (batch, n + 1, 2 * K), eps)
    return horizontal, vertical
