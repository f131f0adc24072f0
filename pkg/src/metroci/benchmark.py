"""Standard asymptotic benchmarks to compare the confidence radius against.

``B_LU = sqrt(Var) / |f'|`` is the per-trial linearized uncertainty, the
classical Fisher information gives the Cramer-Rao floor ``1/sqrt(F)``, and
``B_LU * sqrt(2 ln(4/eps))`` is the large-n limit bounding ``sqrt(n) E[delta]``.
"""

from dataclasses import asdict, dataclass
import math


from ._validation import check_epsilon, check_nonnegative
from .concentration import DataAggregate
from .estimator import ls_estimate
from .exceptions import AssumptionViolation, DomainError, SingularSupportError
from .model import StatisticalModel

__all__ = [
    "BenchmarkReport",
    "b_lu",
    "b_lu_estimate",
    "asymptotic_delta_bound",
    "fisher_classical",
    "benchmark_report",
]

_PMF_FLOOR = 1e-15
_DERIV_FLOOR = 1e-9


@dataclass(frozen=True)
class BenchmarkReport:
    b_lu: float
    b_lu_estimate: float
    lu: float
    asymptotic_delta_bound: float
    fisher_classical: float

    def to_dict(self):
        return asdict(self)


def _nonzero_slope(model, phi):
    d = model.df(phi)
    if d == 0:
        raise AssumptionViolation(f"df vanishes at phi = {phi!r}")
    return abs(d)


def b_lu(model: StatisticalModel, phi: float) -> float:
    """Linearized uncertainty per trial at ``phi``: ``sqrt(Var(phi)) / |f'(phi)|``."""
    return math.sqrt(model.variance(phi)) / _nonzero_slope(model, phi)


def b_lu_estimate(model: StatisticalModel, agg: DataAggregate, phi_ls=None) -> float:
    """Plug-in ``sqrt(V_n) / |f'(phi_ls)|``; needs at least two outcomes."""
    if agg.n < 2 or agg.sample_variance is None:
        raise DomainError("the B_LU estimate needs n >= 2 outcomes")
    phi = ls_estimate(model, agg) if phi_ls is None else phi_ls
    return math.sqrt(agg.sample_variance) / _nonzero_slope(model, phi)


def asymptotic_delta_bound(b_lu_value: float, epsilon: float) -> float:
    """``b_lu * sqrt(2 ln(4/eps))``, the limit of ``sqrt(n) E[delta]`` is at most this."""
    eps = check_epsilon(epsilon)
    b = check_nonnegative(b_lu_value, "b_lu")
    return b * math.sqrt(2.0 * math.log(4.0 / eps))


def fisher_classical(model: StatisticalModel, phi: float) -> float:
    """Classical Fisher information of one outcome, ``sum_x (d p / d phi)^2 / p``.

    Derivatives come from centred differences with step ``1e-6 * |Phi|``.
    Outcomes with ``p < 1e-15`` are dropped if their derivative is also below
    ``1e-9``; otherwise the information diverges and
    :class:`SingularSupportError` is raised.
    """
    if not model.is_discrete:
        raise DomainError("Fisher information needs a model with finite support")
    h = model.interval.width * 1e-6
    p = model.probabilities(phi)
    dp = (model.probabilities(phi + h) - model.probabilities(phi - h)) / (2.0 * h)
    total = 0.0
    for pi, dpi in zip(p, dp):
        if pi < _PMF_FLOOR:
            if abs(dpi) < _DERIV_FLOOR:
                continue
            raise SingularSupportError(
                f"outcome with probability {pi!r} has derivative {dpi!r} at phi = {phi!r}")
        total += dpi * dpi / pi
    return float(total)


def benchmark_report(model: StatisticalModel, phi: float, agg: DataAggregate,
                     epsilon: float) -> BenchmarkReport:
    b = b_lu(model, phi)
    return BenchmarkReport(
        b_lu=b,
        b_lu_estimate=b_lu_estimate(model, agg),
        lu=b / math.sqrt(agg.n),
        asymptotic_delta_bound=asymptotic_delta_bound(b, epsilon),
        fisher_classical=fisher_classical(model, phi),
    )
