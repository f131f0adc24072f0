"""Least-squares phase estimate with a finite-sample confidence radius.

The estimate clamps the sample mean onto the range of ``f`` and inverts.
Two radii bound the estimation error with probability ``1 - epsilon``:
``delta1`` from the Hoeffding radius and ``delta2`` from the empirical
Bernstein radius, each pushed through the second-order expansion of
``g = f^-1`` with curvature constant ``L``. The reported radius is their
minimum (``delta1`` alone for a single outcome).
"""

from dataclasses import asdict, dataclass
import math
from typing import Optional

from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from ._validation import check_epsilon, check_outcomes
from .concentration import DataAggregate, _summarise, empirical_bernstein_radius, hoeffding_radius
from .exceptions import AssumptionViolation, DomainError, OutOfRangeError
from .model import StatisticalModel, invert_f, project_to_range

__all__ = [
    "ConfidenceResult",
    "ls_estimate",
    "di_estimate",
    "delta1",
    "delta2",
    "confidence",
    "deviation_threshold",
    "PhaseEstimator",
]


@dataclass(frozen=True)
class ConfidenceResult:
    """Estimate, radii and the clipped interval for one data set.

    ``trivial_width`` is ``phi_max - phi_min``; a radius larger than that
    carries no information beyond the prior interval. ``delta`` is never
    truncated.
    """

    phi_ls: float
    delta1: float
    delta2: Optional[float]
    delta: float
    interval_lo: float
    interval_hi: float
    epsilon: float
    n: int
    trivial_width: float

    def to_dict(self) -> dict:
        return asdict(self)

    def covers(self, phi: float) -> bool:
        return abs(self.phi_ls - phi) <= self.delta


def _slope_at(model, phi):
    d = model.df(phi)
    if d == 0:
        raise AssumptionViolation(f"df vanishes at phi = {phi!r}; the confidence radius diverges")
    return abs(d)


def ls_estimate(model: StatisticalModel, agg: DataAggregate) -> float:
    """``argmin over Phi of |S_n - f(phi)|``, i.e. ``g(clamp(S_n))``. Always lies in Phi."""
    return invert_f(model, project_to_range(model, agg.sample_mean))


def di_estimate(model: StatisticalModel, agg: DataAggregate) -> float:
    """Direct inversion ``g(S_n)``.

    Raises :class:`OutOfRangeError` (carrying ``S_n`` and the range end points)
    when the sample mean falls outside the range of ``f``.
    """
    return invert_f(model, agg.sample_mean)


def delta1(model: StatisticalModel, agg: DataAggregate, epsilon: float,
           phi_ls: Optional[float] = None) -> float:
    """Hoeffding-based radius: ``t/|f'(phi_ls)| + (L/n) V_max ln(2/eps)`` with ``t`` the Hoeffding radius."""
    eps = check_epsilon(epsilon)
    if phi_ls is None:
        phi_ls = ls_estimate(model, agg)
    v_max = agg.v_max
    t = hoeffding_radius(agg.n, v_max, eps)
    return t / _slope_at(model, phi_ls) + model.curvature / agg.n * v_max * math.log(2.0 / eps)


def delta2(model: StatisticalModel, agg: DataAggregate, epsilon: float,
           phi_ls: Optional[float] = None) -> float:
    """Empirical-Bernstein-based radius: ``r/|f'(phi_ls)| + (L/2) r**2``."""
    eps = check_epsilon(epsilon)
    if agg.n < 2 or agg.sample_variance is None:
        raise DomainError("delta2 is undefined for a single outcome (n = 1)")
    if phi_ls is None:
        phi_ls = ls_estimate(model, agg)
    r = empirical_bernstein_radius(agg.n, agg.sample_variance, agg.width, eps)
    return r / _slope_at(model, phi_ls) + model.curvature / 2.0 * r * r


def deviation_threshold(delta: float, slope_g: float, curvature: float) -> float:
    """Smallest ``|S_n - f(phi)|`` that can push the error past ``delta``.

    Positive root ``u`` of ``slope_g * u + (curvature / 2) * u**2 = delta``,
    i.e. ``(sqrt(slope_g**2 + 2 delta L) - slope_g) / L``, written in the
    cancellation-free form ``2 delta / (sqrt(slope_g**2 + 2 delta L) + slope_g)``
    (which also covers ``L = 0``).
    """
    if delta < 0 or slope_g < 0 or curvature < 0:
        raise DomainError("delta, slope and curvature must be non-negative")
    if delta == 0:
        return 0.0
    return 2.0 * delta / (math.sqrt(slope_g * slope_g + 2.0 * delta * curvature) + slope_g)


def confidence(model: StatisticalModel, agg: DataAggregate, epsilon: float) -> ConfidenceResult:
    """Estimate plus ``delta1``, ``delta2`` and ``delta`` at confidence level ``1 - epsilon``."""
    eps = check_epsilon(epsilon)
    phi = ls_estimate(model, agg)
    d1 = delta1(model, agg, eps, phi_ls=phi)
    if agg.n >= 2:
        d2 = delta2(model, agg, eps, phi_ls=phi)
        d = min(d1, d2)
    else:
        d2 = None
        d = d1
    iv = model.interval
    return ConfidenceResult(
        phi_ls=phi,
        delta1=d1,
        delta2=d2,
        delta=d,
        interval_lo=max(iv.phi_min, phi - d),
        interval_hi=min(iv.phi_max, phi + d),
        epsilon=eps,
        n=agg.n,
        trivial_width=iv.width,
    )


class PhaseEstimator(BaseEstimator):
    """scikit-learn style wrapper around :func:`confidence`.

    Parameters
    ----------
    model : StatisticalModel
        Model of one measurement outcome.
    epsilon : float, default=0.1
        Allowed failure probability; the interval has confidence ``1 - epsilon``.

    Attributes
    ----------
    phi_ : float
        Least-squares estimate.
    delta_, delta1_, delta2_ : float
        Confidence radii (``delta2_`` is ``None`` for a single outcome).
    interval_ : tuple of float
        Parameter interval intersected with ``[phi_ - delta_, phi_ + delta_]``.
    aggregate_ : DataAggregate
    result_ : ConfidenceResult
    n_samples_ : int
    """

    def __init__(self, model=None, epsilon=0.1):
        self.model = model
        self.epsilon = epsilon

    def fit(self, X, y=None):
        """Fit on a 1-D array of outcomes (or an ``(n, 1)`` column)."""
        if not isinstance(self.model, StatisticalModel):
            raise DomainError(f"model must be a StatisticalModel, got {self.model!r}")
        a, b = self.model.outcomes.a, self.model.outcomes.b
        x = check_outcomes(X, a, b)
        agg = _summarise(x, a, b)
        res = confidence(self.model, agg, self.epsilon)
        self.aggregate_ = agg
        self.result_ = res
        self.phi_ = res.phi_ls
        self.delta_ = res.delta
        self.delta1_ = res.delta1
        self.delta2_ = res.delta2
        self.interval_ = (res.interval_lo, res.interval_hi)
        self.n_samples_ = agg.n
        return self

    def confidence_interval(self):
        check_is_fitted(self, "interval_")
        return self.interval_
