"""Small argument checkers shared by the public functions."""

import math
import numbers

import numpy as np
from sklearn.utils.validation import check_array

from .exceptions import BoundsViolationError, DomainError, EmptyDataError


def check_epsilon(epsilon):
    """Return ``epsilon`` as float, raising :class:`DomainError` unless 0 < epsilon < 1."""
    try:
        eps = float(epsilon)
    except (TypeError, ValueError):
        raise DomainError(f"epsilon must be a real number, got {epsilon!r}") from None
    if not (0.0 < eps < 1.0):
        raise DomainError(f"epsilon must lie in the open interval (0, 1), got {epsilon!r}")
    return eps


def check_count(n, minimum=1, name="n"):
    if isinstance(n, bool) or not isinstance(n, numbers.Integral):
        raise DomainError(f"{name} must be an integer, got {n!r}")
    if n < minimum:
        raise DomainError(f"{name} must be >= {minimum}, got {n}")
    return int(n)


def check_nonnegative(x, name):
    x = float(x)
    if not (x >= 0.0) or math.isinf(x):
        raise DomainError(f"{name} must be a finite non-negative number, got {x!r}")
    return x


def check_bounds(a, b):
    a = float(a)
    b = float(b)
    if not (math.isfinite(a) and math.isfinite(b)):
        raise DomainError(f"outcome bounds must be finite, got [{a!r}, {b!r}]")
    if a > b:
        raise DomainError(f"lower bound {a!r} exceeds upper bound {b!r}")
    return a, b


def check_outcomes(outcomes, a, b):
    """Validate a one-dimensional sample of outcomes lying in [a, b].

    Accepts any array-like, including a single-column 2-D array as produced
    by scikit-learn style callers. Returns a contiguous float64 vector.
    """
    a, b = check_bounds(a, b)
    x = np.asarray(outcomes, dtype=float) if not hasattr(outcomes, "shape") else outcomes
    if np.size(x) == 0:
        raise EmptyDataError("no outcomes supplied")
    x = check_array(x, ensure_2d=False, dtype=np.float64, ensure_all_finite=True,
                    input_name="outcomes")
    if x.ndim == 2:
        if x.shape[1] != 1:
            raise DomainError(f"outcomes must be one-dimensional, got shape {x.shape}")
        x = x[:, 0]
    bad = np.flatnonzero((x < a) | (x > b))
    if bad.size:
        i = int(bad[0])
        raise BoundsViolationError(i, float(x[i]), a, b)
    return np.ascontiguousarray(x)
