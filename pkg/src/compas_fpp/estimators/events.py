"""Event A on the standard strip: every unit square has at most one closed side."""

import logging
import math
import time
from typing import Optional

import numpy
from compas.data import Data

from compas_fpp.exceptions import EstimationError
from compas_fpp.exceptions import ParameterError
from compas_fpp.rng import make_rng
from compas_fpp.strip.cross import batched_cross_distances
from compas_fpp.strip.geometry import Model
from compas_fpp.strip.geometry import StripConfiguration
from compas_fpp.strip.geometry import StripGeometry
from compas_fpp.strip.sampling import check_eps
from compas_fpp.strip.sampling import sample_standard_arrays
from compas_fpp.strip.standard import event_a_bound
from compas_fpp.strip.standard import event_a_bound_sharp
from compas_fpp.strip.standard import event_a_mask
from compas_fpp.strip.standard import standard_distance
from compas_fpp.workers import map_replicas

LOG = logging.getLogger(__name__)

EVENT_BATCH = 4096
MAX_SAMPLES = 10**8


def _check(K: int, n: int) -> None:
    if int(K) != K or K < 1:
        raise ParameterError("The half width K must be a positive integer: {}".format(K))
    if n < 1:
        raise ParameterError("n must be a positive integer: {}".format(n))


class EventAEstimate(Data):
    """Empirical probability that event A fails on ``[0, n] x [-K, K]``, with its union bounds."""

    @property
    def __data__(self):
        return {
            "K": self.K,
            "n": self.n,
            "eps": self.eps,
            "samples": self.samples,
            "failures": self.failures,
            "seed": self.seed,
        }

    def __init__(self, K: int, n: int, eps: float, samples: int, failures: int, seed: int, name: Optional[str] = None):
        super(EventAEstimate, self).__init__(name=name)
        self.K = K
        self.n = n
        self.eps = eps
        self.samples = samples
        self.failures = failures
        self.seed = seed

    def __repr__(self):
        return "EventAEstimate(K={}, n={}, eps={}, probability={:.3e}, bound={:.3e})".format(self.K, self.n, self.eps, self.probability, self.bound)

    @property
    def probability(self) -> float:
        return self.failures / self.samples

    @property
    def stderr(self) -> float:
        p = self.probability
        return math.sqrt(p * (1.0 - p) / self.samples)

    @property
    def bound(self) -> float:
        return event_a_bound(self.K, self.n, self.eps)

    @property
    def sharp_bound(self) -> float:
        return event_a_bound_sharp(self.K, self.n, self.eps)

    def within_bound(self, sigmas: float = 4.0) -> bool:
        return self.probability <= self.bound + sigmas * self.stderr


def _count_failures(K: int, n: int, eps: float, size: int, seed: int, index: int) -> int:
    horizontal, vertical = sample_standard_arrays(make_rng(seed, index), K, eps, size, n)
    return int(size - event_a_mask(horizontal, vertical).sum())


def event_a_probability(
    K: int,
    n: int,
    eps: float,
    samples: int = 100000,
    seed: int = 0,
    workers: Optional[int] = None,
    batch: int = EVENT_BATCH,
) -> EventAEstimate:
    """Estimate ``P(A^c)`` on ``[0, n] x [-K, K]`` from independent standard segments.

    Batch ``b`` draws from ``make_rng(seed, b)``.
    """
    eps = check_eps(eps)
    _check(K, n)
    if samples < 1:
        raise ParameterError("The number of samples must be positive: {}".format(samples))
    count = math.ceil(samples / batch)
    sizes = [min(batch, samples - b * batch) for b in range(count)]
    failures = sum(map_replicas(lambda b: _count_failures(K, n, eps, sizes[b], seed, b), count, workers))
    estimate = EventAEstimate(K, n, eps, samples, failures, seed)
    LOG.info("event A failure K=%d n=%d eps=%s: %.3e +- %.1e, bound %.3e", K, n, eps, estimate.probability, estimate.stderr, estimate.bound)
    return estimate


class StandardBoundReport(Data):
    """Configurations accepted on event A and violations of ``D^K(n, 0) <= D^{K,d}(n, 0) + 3K``."""

    @property
    def __data__(self):
        return {
            "K": self.K,
            "n": self.n,
            "eps": self.eps,
            "seed": self.seed,
            "accepted": self.accepted,
            "sampled": self.sampled,
            "violations": self.violations,
            "max_excess": self.max_excess,
            "first_violation": self.first_violation,
        }

    def __init__(
        self,
        K: int,
        n: int,
        eps: float,
        seed: int,
        accepted: int = 0,
        sampled: int = 0,
        violations: int = 0,
        max_excess: Optional[int] = None,
        first_violation: Optional[dict] = None,
        name: Optional[str] = None,
    ):
        super(StandardBoundReport, self).__init__(name=name)
        self.K = K
        self.n = n
        self.eps = eps
        self.seed = seed
        self.accepted = accepted
        self.sampled = sampled
        self.violations = violations
        self.max_excess = max_excess
        self.first_violation = first_violation

    def __repr__(self):
        return "StandardBoundReport(K={}, n={}, eps={}, accepted={}, violations={})".format(self.K, self.n, self.eps, self.accepted, self.violations)

    @property
    def passed(self) -> bool:
        return self.violations == 0


def check_standard_bound(
    K: int,
    n: int,
    eps: float,
    accepted: int = 1000,
    seed: int = 0,
    max_samples: int = MAX_SAMPLES,
    batch: int = EVENT_BATCH,
) -> StandardBoundReport:
    """Rejection sample standard segments on event A and compare their distance with the cross model.

    The cross model distance uses the same horizontal edges. Batches ``0, 1, ...`` draw from
    ``make_rng(seed, b)`` and accepted configurations are taken in sampling order.

    Raises
    ------
    EstimationError
        If fewer than ``accepted`` configurations satisfy event A within ``max_samples`` draws.

    """
    eps = check_eps(eps)
    _check(K, n)
    if accepted < 1:
        raise ParameterError("The number of accepted configurations must be positive: {}".format(accepted))
    start = time.perf_counter()
    geometry = StripGeometry(K, Model.STANDARD)
    report = StandardBoundReport(K, n, eps, seed)
    index = 0
    while report.accepted < accepted:
        if report.sampled >= max_samples:
            raise EstimationError("Only {} of {} configurations satisfy event A in {} samples.".format(report.accepted, accepted, report.sampled))
        horizontal, vertical = sample_standard_arrays(make_rng(seed, index), K, eps, batch, n)
        report.sampled += batch
        keep = numpy.flatnonzero(event_a_mask(horizontal, vertical))[: accepted - report.accepted]
        if keep.size:
            cross = batched_cross_distances(horizontal[keep])[:, K]
            for position, sample in enumerate(keep):
                configuration = StripConfiguration.from_arrays(geometry, horizontal[sample], vertical[sample])
                length = standard_distance(geometry, configuration, n)
                excess = None if length is None else length - int(cross[position])
                if excess is not None:
                    report.max_excess = excess if report.max_excess is None else max(report.max_excess, excess)
                if excess is None or excess > 3 * K:
                    report.violations += 1
                    if report.first_violation is None:
                        report.first_violation = {"batch": index, "sample": int(sample), "standard": length, "cross": int(cross[position])}
            report.accepted += int(keep.size)
        index += 1
    LOG.info("standard bound K=%d n=%d eps=%s: %d accepted of %d, %d violations in %.2fs", K, n, eps, report.accepted, report.sampled, report.violations, time.perf_counter() - start)
    return report
