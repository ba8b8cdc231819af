import logging
import time
from typing import Optional

from compas.data import Data

from compas_fpp.exceptions import EstimationError
from compas_fpp.exceptions import ParameterError
from compas_fpp.plane.clusters import label_clusters
from compas_fpp.plane.distances import distances_from
from compas_fpp.plane.window import PlaneWindow
from compas_fpp.rng import make_rng
from compas_fpp.stats import RunningStats
from compas_fpp.strip.sampling import check_eps
from compas_fpp.workers import map_replicas

LOG = logging.getLogger(__name__)

MIN_REPLICAS = 100


def mu_reference(eps: float) -> dict:
    """Reference values of the time constant at closure probability ``eps``.

    * ``first_order``: the asymptotic ``1 + eps / 2``.
    * ``upper_bound``: the earlier upper bound ``1 + eps``.
    * ``detour``: ``1 + 2 eps``, one detour of length 2 per closed axis edge.

    """
    eps = check_eps(eps)
    return {"first_order": 1.0 + eps / 2.0, "upper_bound": 1.0 + eps, "detour": 1.0 + 2.0 * eps}


class MuEstimate(Data):
    """Monte Carlo estimate of the time constant along the horizontal axis.

    Attributes
    ----------
    mu_hat : float
        Mean of ``D((0, 0), (n, 0)) / n`` over admissible replicas.
    stderr : float
    admissible_fraction : float
        Replicas with both endpoints connected to each other and to the window border.
    origin_disconnected_fraction : float
        Replicas whose origin cluster does not reach the border.

    """

    @property
    def __data__(self):
        return {
            "eps": self.eps,
            "n": self.n,
            "margin": self.margin,
            "replicas": self.replicas,
            "seed": self.seed,
            "mu_hat": self.mu_hat,
            "stderr": self.stderr,
            "admissible_fraction": self.admissible_fraction,
            "origin_disconnected_fraction": self.origin_disconnected_fraction,
        }

    def __init__(
        self,
        eps: float,
        n: int,
        margin: int,
        replicas: int,
        seed: int,
        mu_hat: float,
        stderr: float,
        admissible_fraction: float,
        origin_disconnected_fraction: float,
        name: Optional[str] = None,
    ):
        super(MuEstimate, self).__init__(name=name)
        self.eps = eps
        self.n = n
        self.margin = margin
        self.replicas = replicas
        self.seed = seed
        self.mu_hat = mu_hat
        self.stderr = stderr
        self.admissible_fraction = admissible_fraction
        self.origin_disconnected_fraction = origin_disconnected_fraction

    def __repr__(self):
        return "MuEstimate(eps={}, n={}, mu_hat={:.6f} +- {:.6f})".format(self.eps, self.n, self.mu_hat, self.stderr)

    @property
    def reference(self) -> dict:
        return mu_reference(self.eps)

    @property
    def slope(self) -> Optional[float]:
        """``(mu_hat - 1) / eps``, to compare with the first order slope 1/2."""
        if self.eps == 0:
            return None
        return (self.mu_hat - 1.0) / self.eps


def window_ratio(window: PlaneWindow, n: int):
    """``(admissible, origin_disconnected, D / n or None)`` of one window containing ``(0, 0)`` and ``(n, 0)``."""
    clusters = label_clusters(window)
    origin = window.index((0, 0))
    target = window.index((n, 0))
    origin_connected = bool(clusters.boundary_connected[origin])
    admissible = origin_connected and bool(clusters.boundary_connected[target]) and clusters.labels[origin] == clusters.labels[target]
    if not admissible:
        return False, not origin_connected, None
    length = distances_from(window, (0, 0))[target]
    assert length != float("inf"), "vertices of one cluster are at finite distance"
    return True, False, float(length) / n


def mu_replica(eps: float, n: int, margin: int, seed: int, index: int):
    """One window ``[-margin, n + margin] x [-margin, margin]`` drawn from ``make_rng(seed, index)``."""
    window = PlaneWindow.sample(make_rng(seed, index), eps, -margin, n + margin, -margin, margin)
    return window_ratio(window, n)


def _check_parameters(eps: float, n: int, margin: Optional[int], replicas: int):
    eps = check_eps(eps)
    if n < 1:
        raise ParameterError("n must be a positive integer: {}".format(n))
    if margin is None:
        margin = (n + 1) // 2
    if 2 * margin < n:
        raise ParameterError("The margin must be at least n / 2 = {}: {}".format(n / 2, margin))
    if replicas < MIN_REPLICAS:
        raise ParameterError("At least {} replicas are required: {}".format(MIN_REPLICAS, replicas))
    return eps, margin


def _merge(eps: float, n: int, margin: int, replicas: int, seed: int, results) -> MuEstimate:
    stats = RunningStats()
    admissible = 0
    disconnected = 0
    for is_admissible, origin_disconnected, ratio in results:
        disconnected += origin_disconnected
        if is_admissible:
            admissible += 1
            stats.push(ratio)
    if admissible == 0:
        raise EstimationError("No admissible replica among {} at eps = {}: lower eps or enlarge the window.".format(replicas, eps))
    return MuEstimate(eps, n, margin, replicas, seed, stats.mean, stats.stderr, admissible / replicas, disconnected / replicas)


def estimate_mu(
    eps: float,
    n: int,
    margin: Optional[int] = None,
    replicas: int = 400,
    seed: int = 0,
    workers: Optional[int] = None,
) -> MuEstimate:
    """Estimate the time constant from independent windows ``[-margin, n + margin] x [-margin, margin]``.

    Parameters
    ----------
    eps : float
        Closure probability, ``1 - p``.
    n : int
        Target ``(n, 0)``.
    margin : int, optional
        Window margin, at least ``n / 2``. Defaults to ``ceil(n / 2)``.
    replicas : int, optional
        At least 100.
    seed : int, optional
    workers : int, optional

    Returns
    -------
    :class:`MuEstimate`

    Raises
    ------
    EstimationError
        If no replica is admissible.

    """
    eps, margin = _check_parameters(eps, n, margin, replicas)
    start = time.perf_counter()
    results = map_replicas(lambda r: mu_replica(eps, n, margin, seed, r), replicas, workers)
    estimate = _merge(eps, n, margin, replicas, seed, results)
    LOG.info(
        "mu estimate eps=%s n=%d margin=%d: %.6f +- %.6f, admissible %.3f, origin disconnected %.2e (2 eps^4 = %.2e), %.1fs",
        eps,
        n,
        margin,
        estimate.mu_hat,
        estimate.stderr,
        estimate.admissible_fraction,
        estimate.origin_disconnected_fraction,
        2 * eps**4,
        time.perf_counter() - start,
    )
    return estimate


class WindowDoubling(Data):
    """Estimates on the margins ``M`` and ``2 M`` from the same edges.

    Parameters
    ----------
    inner : :class:`MuEstimate`
        Margin ``M``.
    outer : :class:`MuEstimate`
        Margin ``2 M``.

    """

    @property
    def __data__(self):
        return {"inner": self.inner.__data__, "outer": self.outer.__data__}

    @classmethod
    def __from_data__(cls, data):
        return cls(MuEstimate.__from_data__(data["inner"]), MuEstimate.__from_data__(data["outer"]))

    def __init__(self, inner: MuEstimate, outer: MuEstimate, name: Optional[str] = None):
        super(WindowDoubling, self).__init__(name=name)
        self.inner = inner
        self.outer = outer

    def __repr__(self):
        return "WindowDoubling(margin={}, shift={:.6f}, stderr={:.6f})".format(self.inner.margin, self.shift, self.inner.stderr)

    @property
    def shift(self) -> float:
        return self.outer.mu_hat - self.inner.mu_hat

    def stable(self, sigmas: float = 2.0) -> bool:
        """The shift is within ``sigmas`` standard errors of the margin ``M`` estimate."""
        return abs(self.shift) <= sigmas * self.inner.stderr


def window_doubling(
    eps: float,
    n: int,
    margin: Optional[int] = None,
    replicas: int = 400,
    seed: int = 0,
    workers: Optional[int] = None,
) -> WindowDoubling:
    """Finite size check of :func:`estimate_mu`: compare the margins ``margin`` and ``2 margin``.

    Replica ``r`` samples the window of margin ``2 margin`` from ``make_rng(seed, r)``.
    The window of margin ``margin`` is its central crop, so both estimates see the same edges
    and the shift measures the effect of the window size only.

    Parameters are those of :func:`estimate_mu`.

    Returns
    -------
    :class:`WindowDoubling`

    """
    eps, margin = _check_parameters(eps, n, margin, replicas)
    outer_margin = 2 * margin

    def replica(index):
        window = PlaneWindow.sample(make_rng(seed, index), eps, -outer_margin, n + outer_margin, -outer_margin, outer_margin)
        inner = window.crop(-margin, n + margin, -margin, margin)
        return window_ratio(inner, n), window_ratio(window, n)

    results = map_replicas(replica, replicas, workers)
    doubling = WindowDoubling(
        _merge(eps, n, margin, replicas, seed, [inner for inner, _ in results]),
        _merge(eps, n, outer_margin, replicas, seed, [outer for _, outer in results]),
    )
    LOG.info("window doubling eps=%s n=%d margin=%d: shift %.6f, stderr %.6f", eps, n, margin, doubling.shift, doubling.inner.stderr)
    return doubling
