"""Sufficient statistics of bounded samples and finite-sample deviation radii.

Both radii bound ``|S_n - E[X]|`` for i.i.d. ``X`` in ``[a, b]``: the
Hoeffding radius uses only the worst-case variance ``(b - a)**2 / 4``, the
empirical Bernstein radius uses the unbiased sample variance plus a
``1/(n - 1)`` range correction.
"""

from dataclasses import dataclass
import math
from typing import Optional

import numpy as np

from ._validation import check_bounds, check_count, check_epsilon, check_nonnegative, check_outcomes
from .exceptions import DomainError

__all__ = [
    "DataAggregate",
    "aggregate",
    "hoeffding_radius",
    "empirical_bernstein_radius",
]


@dataclass(frozen=True)
class DataAggregate:
    """Sample size, mean and unbiased variance of outcomes bounded by ``[a, b]``.

    ``sample_variance`` is ``None`` for a single outcome.
    """

    n: int
    sample_mean: float
    sample_variance: Optional[float]
    a: float
    b: float

    @property
    def v_max(self) -> float:
        """Largest variance any distribution on ``[a, b]`` can have."""
        return (self.b - self.a) ** 2 / 4.0

    @property
    def width(self) -> float:
        return self.b - self.a

    def merge(self, other: "DataAggregate") -> "DataAggregate":
        """Aggregate of the concatenation of the two underlying samples.

        Uses the pairwise (Chan et al.) update of the centred sum of squares,
        so the result agrees with :func:`aggregate` on the concatenated
        outcomes up to rounding.
        """
        if (self.a, self.b) != (other.a, other.b):
            raise DomainError("cannot merge aggregates with different outcome bounds")
        n = self.n + other.n
        ss_self = (self.n - 1) * self.sample_variance if self.n > 1 else 0.0
        ss_other = (other.n - 1) * other.sample_variance if other.n > 1 else 0.0
        diff = other.sample_mean - self.sample_mean
        mean = self.sample_mean + diff * other.n / n
        ss = ss_self + ss_other + diff * diff * self.n * other.n / n
        mean = min(max(mean, self.a), self.b)
        return DataAggregate(n, mean, ss / (n - 1), self.a, self.b)

    @classmethod
    def from_counts(cls, support, counts, a, b) -> "DataAggregate":
        """Aggregate of a sample given as occurrence counts over a finite support."""
        support = np.asarray(support, dtype=float)
        counts = np.asarray(counts, dtype=np.int64)
        n = int(counts.sum())
        if n < 1:
            raise DomainError("count vector must contain at least one outcome")
        mean = float(np.dot(counts, support)) / n
        mean = min(max(mean, a), b)
        var = float(np.dot(counts, (support - mean) ** 2)) / (n - 1) if n > 1 else None
        return cls(n, mean, var, float(a), float(b))


def _summarise(x, a, b):
    # two-pass mean/variance; x is already validated
    n = x.shape[0]
    mean = float(x.mean())
    # rounding may push the mean an ulp past a bound
    mean = min(max(mean, a), b)
    if n == 1:
        return DataAggregate(1, mean, None, a, b)
    dev = x - mean
    var = float(np.dot(dev, dev)) / (n - 1)
    return DataAggregate(n, mean, var, a, b)


def aggregate(outcomes, a, b) -> DataAggregate:
    """Compute ``(n, S_n, V_n)`` from raw outcomes after checking they lie in ``[a, b]``.

    Raises :class:`~metroci.exceptions.EmptyDataError` for an empty sample and
    :class:`~metroci.exceptions.BoundsViolationError` (carrying the index of the
    first offending outcome) for out-of-bounds data.
    """
    a, b = check_bounds(a, b)
    x = check_outcomes(outcomes, a, b)
    return _summarise(x, a, b)


def hoeffding_radius(n, v_max, epsilon) -> float:
    """Radius ``sqrt((2/n) * v_max * ln(2/epsilon))``.

    ``P[|S_n - E X| > radius] <= epsilon`` for i.i.d. outcomes whose range
    satisfies ``(b - a)**2 / 4 <= v_max``.
    """
    n = check_count(n, 1)
    v_max = check_nonnegative(v_max, "v_max")
    eps = check_epsilon(epsilon)
    return math.sqrt(2.0 / n * v_max * math.log(2.0 / eps))


def empirical_bernstein_radius(n, v_n, range_, epsilon) -> float:
    """Radius ``sqrt((2/n) V_n ln(4/eps)) + 8 (b - a) ln(4/eps) / (3 (n - 1))``.

    ``range_`` is ``b - a``. Requires ``n >= 2`` because the sample variance
    is undefined for a single outcome.
    """
    n = check_count(n, 2)
    v_n = check_nonnegative(v_n, "v_n")
    range_ = check_nonnegative(range_, "range")
    eps = check_epsilon(epsilon)
    log_term = math.log(4.0 / eps)
    return math.sqrt(2.0 / n * v_n * log_term) + 8.0 * range_ / (3.0 * (n - 1)) * log_term
