from math import sqrt
from typing import Iterable

import numpy


class RunningStats:
    """Count, mean and sum of squared deviations of a stream of values.

    Accumulators merge associatively (Chan et al. pairwise update),
    so replica results can be folded in any grouping as long as the order is fixed.

    Examples
    --------
    >>> stats = RunningStats()
    >>> stats.extend([1.0, 2.0, 3.0])
    >>> stats.mean
    2.0
    >>> stats.variance
    1.0

    """

    def __init__(self, count: int = 0, mean: float = 0.0, m2: float = 0.0):
        self.count = count
        self.mean = mean
        self.m2 = m2

    def __repr__(self):
        return "RunningStats(count={}, mean={!r}, m2={!r})".format(self.count, self.mean, self.m2)

    def push(self, value: float) -> None:
        self.count += 1
        delta = value - self.mean
        self.mean += delta / self.count
        self.m2 += delta * (value - self.mean)

    def extend(self, values: Iterable[float]) -> None:
        if not isinstance(values, numpy.ndarray):
            values = list(values)
        self.merge(RunningStats.from_array(values))

    def merge(self, other: "RunningStats") -> "RunningStats":
        if other.count == 0:
            return self
        if self.count == 0:
            self.count, self.mean, self.m2 = other.count, other.mean, other.m2
            return self
        count = self.count + other.count
        delta = other.mean - self.mean
        self.mean += delta * other.count / count
        self.m2 += other.m2 + delta * delta * self.count * other.count / count
        self.count = count
        return self

    @classmethod
    def from_array(cls, values) -> "RunningStats":
        values = numpy.asarray(values, dtype=numpy.float64).ravel()
        if values.size == 0:
            return cls()
        mean = float(values.mean())
        return cls(int(values.size), mean, float(((values - mean) ** 2).sum()))

    @property
    def variance(self) -> float:
        if self.count < 2:
            return 0.0
        return self.m2 / (self.count - 1)

    @property
    def stderr(self) -> float:
        if self.count < 2:
            return 0.0
        return sqrt(self.variance / self.count)


def batch_means_stderr(batch_means) -> float:
    """Standard error of the overall mean from equally sized batch means."""
    batch_means = numpy.asarray(batch_means, dtype=numpy.float64)
    if batch_means.size < 2:
        return 0.0
    return float(batch_means.std(ddof=1) / sqrt(batch_means.size))
