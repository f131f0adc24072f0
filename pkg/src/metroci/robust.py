"""Confidence radius under a partially unknown systematic error.

The model family depends on a noise vector ``eta`` known only to lie in a
box ``E``. With ``eta_assumed`` the analyst's guess,

    delta_tilde = max over eta in E of  |phi_ls(eta_assumed) - phi_ls(eta)| + delta(eta)

bounds ``|phi_ls(eta_assumed) - phi|`` with probability ``1 - epsilon``. The
maximum is taken over a finite grid on ``E``, which under-approximates the
continuum maximum; results carry a flag saying so.
"""

from dataclasses import dataclass
import itertools
import math
from typing import Callable, Sequence

import numpy as np

from ._validation import check_count, check_epsilon
from .concentration import DataAggregate
from .estimator import confidence, ls_estimate
from .exceptions import AssumptionViolation, DomainError, MetrociError
from .model import ParameterInterval, StatisticalModel
from .ramsey import ramsey_model

__all__ = [
    "MAX_GRID_POINTS",
    "NoiseRegion",
    "RobustResult",
    "delta_tilde",
    "systematic_offset",
    "phase_offset_family",
]

MAX_GRID_POINTS = 10_000_000

NoisyModelFamily = Callable[[np.ndarray], StatisticalModel]


@dataclass(frozen=True)
class NoiseRegion:
    """Box of noise parameters, one ``(lo, hi, points)`` triple per flattened axis."""

    axes: tuple

    def __post_init__(self):
        axes = []
        total = 1
        for i, axis in enumerate(self.axes):
            try:
                lo, hi, points = axis
            except (TypeError, ValueError):
                raise DomainError(f"noise axis {i} must be (lo, hi, points), got {axis!r}") from None
            lo, hi = float(lo), float(hi)
            points = check_count(points, 1, f"points on noise axis {i}")
            if not (math.isfinite(lo) and math.isfinite(hi)) or lo > hi:
                raise DomainError(f"noise axis {i} needs finite lo <= hi, got [{lo}, {hi}]")
            if points == 1 and lo != hi:
                raise DomainError(f"noise axis {i}: a single grid point needs lo == hi")
            axes.append((lo, hi, points))
            total *= points
        if not axes:
            raise DomainError("noise region needs at least one axis")
        if total > MAX_GRID_POINTS:
            raise DomainError(f"noise grid has {total} points, limit is {MAX_GRID_POINTS}")
        object.__setattr__(self, "axes", tuple(axes))

    @classmethod
    def from_config(cls, spec: Sequence) -> "NoiseRegion":
        return cls(tuple(tuple(axis) for axis in spec))

    @classmethod
    def point(cls, eta: Sequence[float]) -> "NoiseRegion":
        return cls(tuple((float(e), float(e), 1) for e in np.atleast_1d(eta)))

    @property
    def dimension(self) -> int:
        return len(self.axes)

    @property
    def size(self) -> int:
        return math.prod(points for _, _, points in self.axes)

    def grid(self) -> np.ndarray:
        """All grid points, shape ``(size, dimension)``, last axis varying fastest."""
        values = [np.linspace(lo, hi, points) for lo, hi, points in self.axes]
        return np.array(list(itertools.product(*values)), dtype=float).reshape(-1, self.dimension)


@dataclass(frozen=True)
class RobustResult:
    delta_tilde: float
    phi_ls: float
    eta_argmax: tuple
    systematic_term: float
    statistical_term: float
    grid_points: int
    grid_lower_bound: bool = True


def _build(family, eta):
    try:
        return family(eta)
    except MetrociError as exc:
        raise AssumptionViolation(f"noise parameters {tuple(eta)} give an invalid model: {exc}") from exc


def systematic_offset(family: NoisyModelFamily, agg: DataAggregate, eta_assumed, eta) -> float:
    """``|phi_ls(eta_assumed) - phi_ls(eta)|`` for the same data."""
    m_assumed = _build(family, np.atleast_1d(np.asarray(eta_assumed, dtype=float)))
    m = _build(family, np.atleast_1d(np.asarray(eta, dtype=float)))
    return abs(ls_estimate(m_assumed, agg) - ls_estimate(m, agg))


def delta_tilde(family: NoisyModelFamily, agg: DataAggregate, epsilon: float, eta_assumed,
                region: NoiseRegion) -> RobustResult:
    """Worst case over the grid on ``region`` of systematic shift plus statistical radius."""
    eps = check_epsilon(epsilon)
    eta_assumed = np.atleast_1d(np.asarray(eta_assumed, dtype=float))
    if eta_assumed.size != region.dimension:
        raise DomainError(f"eta_assumed has {eta_assumed.size} components, region has {region.dimension}")
    phi_assumed = ls_estimate(_build(family, eta_assumed), agg)
    best = (-math.inf, None, 0.0, 0.0)
    for eta in region.grid():
        model = _build(family, eta)
        res = confidence(model, agg, eps)
        shift = abs(phi_assumed - res.phi_ls)
        value = shift + res.delta
        if value > best[0]:
            best = (value, tuple(float(e) for e in eta), shift, res.delta)
    value, eta_max, shift, stat = best
    return RobustResult(value, phi_assumed, eta_max, shift, stat, region.size)


def phase_offset_family(variant: str, atoms: int, interval: ParameterInterval,
                        reference_phase: float) -> NoisyModelFamily:
    """Ramsey family whose reference phase is off by an unknown ``eta[0]``."""
    def family(eta):
        return ramsey_model(variant, atoms, interval, reference_phase + float(np.atleast_1d(eta)[0]))
    return family
