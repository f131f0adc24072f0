"""Exception types raised by metroci.

All input problems derive from ``ValueError`` so callers that only care
about "bad input" can catch that.
"""


class MetrociError(Exception):
    """Base class for every error raised by this package."""


class DomainError(MetrociError, ValueError):
    """An argument lies outside the domain of a formula (e.g. epsilon not in (0, 1))."""


class EmptyDataError(MetrociError, ValueError):
    """No outcomes were supplied."""


class BoundsViolationError(MetrociError, ValueError):
    """An outcome lies outside the declared outcome bounds [a, b]."""

    def __init__(self, index, value, a, b):
        self.index = index
        self.value = value
        self.a = a
        self.b = b
        super().__init__(f"outcome #{index} = {value!r} lies outside [{a!r}, {b!r}]")


class AssumptionViolation(MetrociError, ValueError):
    """The statistical model breaks boundedness, injectivity or the non-zero derivative condition."""


class OutOfRangeError(MetrociError, ValueError):
    """A value lies outside the range of the expectation function."""

    def __init__(self, value, lo, hi):
        self.value = value
        self.lo = lo
        self.hi = hi
        super().__init__(f"{value!r} lies outside the range [{lo!r}, {hi!r}] of f")


class SingularSupportError(MetrociError, ValueError):
    """A zero-probability outcome has a non-vanishing derivative (Fisher information diverges)."""


class EnumerationBudgetError(MetrociError, ValueError):
    """Exact enumeration would visit more configurations than allowed."""
