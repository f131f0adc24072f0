"""Scalar-parameter statistical models with bounded outcomes.

A model exposes the single-outcome expectation ``f`` on a parameter interval,
its first two derivatives, and (for discrete models) the outcome distribution.
Everything the estimator needs follows from these: the range of ``f``, the
inverse ``g = f^-1`` by bisection, clamping onto the range, and the curvature
constant ``L = max |f'^-3 f''|``.
"""

from dataclasses import dataclass, field
from functools import cached_property
import math
from typing import Callable, Optional, Sequence

import numpy as np

from ._validation import check_bounds, check_count
from .exceptions import AssumptionViolation, DomainError, OutOfRangeError

__all__ = [
    "ParameterInterval",
    "OutcomeSpace",
    "StatisticalModel",
    "CallableModel",
    "AssumptionReport",
    "validate_assumptions",
    "consistency_report",
    "curvature_constant",
    "invert_f",
    "project_to_range",
    "DEFAULT_CURVATURE_GRID",
]

DEFAULT_CURVATURE_GRID = 100_000


@dataclass(frozen=True)
class ParameterInterval:
    phi_min: float
    phi_max: float

    def __post_init__(self):
        lo, hi = float(self.phi_min), float(self.phi_max)
        if not (math.isfinite(lo) and math.isfinite(hi)) or not lo < hi:
            raise DomainError(f"parameter interval needs finite phi_min < phi_max, got [{lo}, {hi}]")
        object.__setattr__(self, "phi_min", lo)
        object.__setattr__(self, "phi_max", hi)

    @property
    def width(self) -> float:
        return self.phi_max - self.phi_min

    def __contains__(self, phi) -> bool:
        return self.phi_min <= phi <= self.phi_max

    def grid(self, points: int) -> np.ndarray:
        points = check_count(points, 2, "grid_points")
        return np.linspace(self.phi_min, self.phi_max, points)

    def clip(self, phi: float) -> float:
        return min(max(phi, self.phi_min), self.phi_max)


@dataclass(frozen=True)
class OutcomeSpace:
    """Bounds ``[a, b]`` of a single outcome, with an optional finite support."""

    a: float
    b: float
    support: Optional[tuple] = None

    def __post_init__(self):
        a, b = check_bounds(self.a, self.b)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        if self.support is not None:
            sup = tuple(float(x) for x in self.support)
            if not sup:
                raise DomainError("support must not be empty")
            if min(sup) != a or max(sup) != b:
                raise DomainError(f"support extremes {min(sup)}, {max(sup)} must equal bounds {a}, {b}")
            if len(set(sup)) != len(sup):
                raise DomainError("support values must be distinct")
            object.__setattr__(self, "support", tuple(sorted(sup)))

    @property
    def v_max(self) -> float:
        return (self.b - self.a) ** 2 / 4.0

    @property
    def width(self) -> float:
        return self.b - self.a


class StatisticalModel:
    """Base class for a one-parameter model ``phi -> outcome distribution``.

    Subclasses implement :meth:`f`, :meth:`df`, :meth:`d2f` and, for discrete
    models, :meth:`probabilities` (a vector aligned with ``outcomes.support``).
    Instances are treated as immutable once built.
    """

    name = "model"

    def __init__(self, interval: ParameterInterval, outcomes: OutcomeSpace):
        self.interval = interval
        self.outcomes = outcomes

    def f(self, phi: float) -> float:
        raise NotImplementedError

    def df(self, phi: float) -> float:
        raise NotImplementedError

    def d2f(self, phi: float) -> float:
        raise NotImplementedError

    def probabilities(self, phi: float) -> np.ndarray:
        raise NotImplementedError(f"{type(self).__name__} has no discrete outcome distribution")

    @property
    def support(self) -> np.ndarray:
        if self.outcomes.support is None:
            raise NotImplementedError(f"{type(self).__name__} has no finite support")
        return np.asarray(self.outcomes.support)

    @property
    def is_discrete(self) -> bool:
        return self.outcomes.support is not None

    def pmf(self, x: float, phi: float) -> float:
        sup = self.outcomes.support
        if sup is None:
            raise NotImplementedError(f"{type(self).__name__} has no finite support")
        try:
            i = sup.index(float(x))
        except ValueError:
            return 0.0
        return float(self.probabilities(phi)[i])

    def variance(self, phi: float) -> float:
        p = self.probabilities(phi)
        x = self.support
        mean = float(np.dot(p, x))
        return max(float(np.dot(p, (x - mean) ** 2)), 0.0)

    def sample(self, phi: float, rng: np.random.Generator, size: int) -> np.ndarray:
        """Draw ``size`` outcomes by inverse-CDF lookup over the finite support."""
        p = self.probabilities(phi)
        cdf = np.cumsum(p)
        u = rng.random(size)
        idx = np.searchsorted(cdf, u, side="right")
        np.minimum(idx, len(p) - 1, out=idx)
        return self.support[idx]

    def analytic_curvature(self) -> Optional[float]:
        """Closed-form ``L`` over the interval, or ``None`` when unavailable."""
        return None

    @cached_property
    def range_f(self) -> tuple:
        lo = self.f(self.interval.phi_min)
        hi = self.f(self.interval.phi_max)
        return (min(lo, hi), max(lo, hi))

    @cached_property
    def increasing(self) -> bool:
        return self.f(self.interval.phi_max) > self.f(self.interval.phi_min)

    @cached_property
    def curvature(self) -> float:
        """``L`` used by the confidence radii (analytic when available, else dense grid)."""
        value = self.analytic_curvature()
        if value is not None:
            return float(value)
        return _grid_curvature(self, DEFAULT_CURVATURE_GRID)

    def __repr__(self):
        return (f"{type(self).__name__}(interval=[{self.interval.phi_min!r}, "
                f"{self.interval.phi_max!r}], outcomes=[{self.outcomes.a!r}, {self.outcomes.b!r}])")


class CallableModel(StatisticalModel):
    """Model assembled from plain functions.

    ``probabilities`` must return a vector aligned with the sorted support.
    ``variance`` defaults to the pmf-derived value. ``sampler(phi, rng, size)``
    defaults to inverse-CDF sampling.
    """

    def __init__(self, interval, outcomes, f, df, d2f, probabilities=None, variance=None,
                 sampler=None, curvature=None, name="callable"):
        super().__init__(interval, outcomes)
        self._f = f
        self._df = df
        self._d2f = d2f
        self._probabilities = probabilities
        self._variance = variance
        self._sampler = sampler
        self._curvature = curvature
        self.name = name

    def f(self, phi):
        return float(self._f(phi))

    def df(self, phi):
        return float(self._df(phi))

    def d2f(self, phi):
        return float(self._d2f(phi))

    def probabilities(self, phi):
        if self._probabilities is None:
            return super().probabilities(phi)
        return np.asarray(self._probabilities(phi), dtype=float)

    def variance(self, phi):
        if self._variance is not None:
            return float(self._variance(phi))
        return super().variance(phi)

    def sample(self, phi, rng, size):
        if self._sampler is not None:
            return np.asarray(self._sampler(phi, rng, size), dtype=float)
        return super().sample(phi, rng, size)

    def analytic_curvature(self):
        return self._curvature


def _evaluate(fn: Callable[[float], float], grid: np.ndarray) -> np.ndarray:
    return np.fromiter((fn(float(p)) for p in grid), dtype=float, count=grid.size)


@dataclass
class AssumptionReport:
    """Verdicts on boundedness (A2), injectivity (A3) and non-zero slope (A4) over a grid."""

    grid_points: int
    bounded: bool
    monotone: bool
    nonzero_derivative: bool
    min_abs_df: float
    details: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.bounded and self.monotone and self.nonzero_derivative

    def to_dict(self) -> dict:
        return {
            "grid_points": self.grid_points,
            "A2_bounded_outcomes": self.bounded,
            "A3_injective": self.monotone,
            "A4_nonzero_derivative": self.nonzero_derivative,
            "min_abs_df": self.min_abs_df,
            "passed": self.passed,
            "details": list(self.details),
        }


def validate_assumptions(model: StatisticalModel, grid_points: int = 10_000) -> AssumptionReport:
    """Check A2-A4 on a uniform grid over the parameter interval.

    Never raises for a failing model; failures are reported. A grid can only
    refute injectivity or find a (near-)zero derivative, it cannot prove them.
    """
    grid = model.interval.grid(grid_points)
    details = []
    a, b = model.outcomes.a, model.outcomes.b
    bounded = math.isfinite(a) and math.isfinite(b) and a <= b
    if not bounded:
        details.append("outcome bounds are not finite")

    fv = _evaluate(model.f, grid)
    dfv = _evaluate(model.df, grid)
    steps = np.diff(fv)
    sign_change = bool(np.any(dfv > 0) and np.any(dfv < 0))
    monotone = bool(np.all(steps > 0) or np.all(steps < 0)) and not sign_change
    if not monotone:
        details.append("f is not strictly monotone on the grid")

    abs_df = np.abs(dfv)
    min_abs_df = float(abs_df.min())
    nonzero = min_abs_df > 0 and not sign_change
    if not nonzero:
        i = int(np.argmin(abs_df))
        details.append(f"df vanishes or changes sign; min |df| = {min_abs_df!r} at phi = {grid[i]!r}")
    return AssumptionReport(int(grid.size), bounded, monotone, nonzero, min_abs_df, details)


def consistency_report(model: StatisticalModel, grid_points: int = 101) -> dict:
    """Largest discrepancies between a model's ingredients on a grid.

    Compares pmf normalisation, pmf mean vs ``f``, pmf variance vs
    ``variance``, and ``df``/``d2f`` against centred finite differences with
    step ``1e-6 * |Phi|`` (relative errors, scaled by ``max(|df|)`` resp.
    ``max(|d2f|, |df|)``).
    """
    grid = model.interval.grid(grid_points)
    h = model.interval.width * 1e-6
    out = {}
    if model.is_discrete:
        x = model.support
        norm = mean = var = 0.0
        for phi in grid:
            p = model.probabilities(float(phi))
            norm = max(norm, abs(float(p.sum()) - 1.0))
            m = float(np.dot(p, x))
            mean = max(mean, abs(m - model.f(float(phi))))
            var = max(var, abs(float(np.dot(p, (x - m) ** 2)) - model.variance(float(phi))))
        out.update(pmf_sum_error=norm, mean_error=mean, variance_error=var)
    dfv = _evaluate(model.df, grid)
    d2v = _evaluate(model.d2f, grid)
    fd1 = (_evaluate(model.f, grid + h) - _evaluate(model.f, grid - h)) / (2 * h)
    fd2 = (_evaluate(model.df, grid + h) - _evaluate(model.df, grid - h)) / (2 * h)
    scale1 = max(float(np.max(np.abs(dfv))), 1e-300)
    scale2 = max(float(np.max(np.abs(d2v))), scale1)
    out["df_relative_error"] = float(np.max(np.abs(fd1 - dfv))) / scale1
    out["d2f_relative_error"] = float(np.max(np.abs(fd2 - d2v))) / scale2
    return out


def _grid_curvature(model, grid_points):
    grid = model.interval.grid(grid_points)
    dfv = _evaluate(model.df, grid)
    if np.any(dfv == 0):
        i = int(np.flatnonzero(dfv == 0)[0])
        raise AssumptionViolation(f"df = 0 at phi = {grid[i]!r}; curvature constant undefined")
    d2v = _evaluate(model.d2f, grid)
    return float(np.max(np.abs(d2v / dfv ** 3)))


def curvature_constant(model: StatisticalModel, grid_points: int = DEFAULT_CURVATURE_GRID) -> float:
    """``L = max over Phi of |f''(phi) / f'(phi)**3|``.

    The grid maximum is only a lower bound on the true maximum. When the model
    supplies a closed form it is returned, after checking the grid value does
    not exceed it by more than a relative ``1e-6``.
    """
    grid_value = _grid_curvature(model, grid_points)
    analytic = model.analytic_curvature()
    if analytic is None:
        return grid_value
    if grid_value > analytic * (1 + 1e-6) + 1e-300:
        raise AssumptionViolation(
            f"grid curvature {grid_value!r} exceeds the model's analytic value {analytic!r}")
    return float(analytic)


def project_to_range(model: StatisticalModel, s: float) -> float:
    """Closest point of ``R_f`` to ``s`` (a clamp, since ``f`` is monotone)."""
    lo, hi = model.range_f
    return min(max(float(s), lo), hi)


def invert_f(model: StatisticalModel, r: float) -> float:
    """Solve ``f(phi) = r`` on the parameter interval by bisection.

    Terminates once the bracket is narrower than ``1e-14 * max(1, |Phi|)``.
    Raises :class:`OutOfRangeError` if ``r`` is not in ``R_f``.
    """
    r = float(r)
    lo_r, hi_r = model.range_f
    if not (lo_r <= r <= hi_r):
        raise OutOfRangeError(r, lo_r, hi_r)
    lo, hi = model.interval.phi_min, model.interval.phi_max
    f = model.f
    if r == f(lo):
        return lo
    if r == f(hi):
        return hi
    increasing = model.increasing
    tol = 1e-14 * max(1.0, hi - lo)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        fm = f(mid)
        if fm == r:
            return mid
        if (fm < r) == increasing:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
