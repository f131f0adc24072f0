"""Ramsey interferometer models with N two-level atoms.

Two probe/readout combinations:

``separable_energy``
    product state, total-energy readout ``J3`` with outcomes ``-N, -N+2, ..., N``;
    ``f = N sin(phi - phi0)``.
``ghz_parity``
    GHZ state, parity readout with outcomes ``+-1``;
    ``f = cos N(phi - phi0 + pi/2)``.

Both are built directly as outcome distributions; the measurement apparatus
is not modelled.
"""

from dataclasses import dataclass
import math
from typing import Optional

import numpy as np

from ._validation import check_count
from .exceptions import AssumptionViolation, DomainError
from .model import OutcomeSpace, ParameterInterval, StatisticalModel

__all__ = [
    "VARIANTS",
    "PUBLISHED_INTERVAL",
    "PUBLISHED_PHI",
    "RamseyConfig",
    "SeparableEnergyModel",
    "GHZParityModel",
    "separable_model",
    "ghz_model",
    "ramsey_model",
    "published_reference_phase",
]

SEPARABLE = "separable_energy"
GHZ = "ghz_parity"
VARIANTS = (SEPARABLE, GHZ)

# interval, true phase and confidence used for the published scaling runs
PUBLISHED_INTERVAL = ParameterInterval(0.0, math.pi / 400)
PUBLISHED_PHI = math.pi / 4000


def published_reference_phase(variant: str, atoms: int) -> float:
    """Reference phase used for the published runs: ``-pi/8`` or ``pi/2 - pi/(10 N)``."""
    atoms = check_count(atoms, 1, "atoms")
    if variant == SEPARABLE:
        return -math.pi / 8
    if variant == GHZ:
        return math.pi / 2 - math.pi / (10 * atoms)
    raise DomainError(f"unknown Ramsey variant {variant!r}; expected one of {VARIANTS}")


@dataclass(frozen=True)
class RamseyConfig:
    atoms: int
    reference_phase: float
    variant: str

    def __post_init__(self):
        check_count(self.atoms, 1, "atoms")
        if self.variant not in VARIANTS:
            raise DomainError(f"unknown Ramsey variant {self.variant!r}; expected one of {VARIANTS}")
        if not math.isfinite(self.reference_phase):
            raise DomainError("reference phase must be finite")


def _max_abs_sin_cos3(x_lo, x_hi, what, strict=True):
    # |sin x / cos^3 x| has period pi and grows with |x| on (-pi/2, pi/2); so on a
    # pole-free interval the maximum sits at an endpoint.
    shift = math.pi * math.floor((x_lo + math.pi / 2) / math.pi)
    lo = x_lo - shift
    hi = lo + (x_hi - x_lo)
    if not (-math.pi / 2 < lo and hi < math.pi / 2):
        if not strict:
            return math.inf
        raise AssumptionViolation(
            f"{what}: derivative of f vanishes inside the parameter interval "
            f"(interval too wide or badly placed relative to the reference phase)")
    return max(abs(math.sin(x) / math.cos(x) ** 3) for x in (x_lo, x_hi))


class SeparableEnergyModel(StatisticalModel):
    """Product state with energy readout: ``(N + x)/2 ~ Binomial(N, (1 + sin(phi - phi0))/2)``."""

    name = SEPARABLE

    def __init__(self, atoms: int, reference_phase: float, interval: ParameterInterval,
                 strict: bool = True):
        atoms = check_count(atoms, 1, "atoms")
        super().__init__(interval, OutcomeSpace(-atoms, atoms, tuple(range(-atoms, atoms + 1, 2))))
        self.atoms = atoms
        self.reference_phase = float(reference_phase)
        self._k = np.arange(atoms + 1)
        self._binom = np.array([math.comb(atoms, k) for k in range(atoms + 1)], dtype=float)
        self._curvature = _max_abs_sin_cos3(interval.phi_min - self.reference_phase,
                                             interval.phi_max - self.reference_phase,
                                             SEPARABLE, strict) / atoms ** 2

    def f(self, phi):
        return self.atoms * math.sin(phi - self.reference_phase)

    def df(self, phi):
        return self.atoms * math.cos(phi - self.reference_phase)

    def d2f(self, phi):
        return -self.atoms * math.sin(phi - self.reference_phase)

    def variance(self, phi):
        return self.atoms * math.cos(phi - self.reference_phase) ** 2

    def probabilities(self, phi):
        q = (1.0 + math.sin(phi - self.reference_phase)) / 2.0
        k = self._k
        return self._binom * q ** k * (1.0 - q) ** (self.atoms - k)

    def analytic_curvature(self):
        return self._curvature


class GHZParityModel(StatisticalModel):
    """GHZ state with parity readout: ``P(x) = (1 + x cos N(phi - phi0 + pi/2)) / 2``, ``x = +-1``."""

    name = GHZ

    def __init__(self, atoms: int, reference_phase: float, interval: ParameterInterval,
                 strict: bool = True):
        atoms = check_count(atoms, 1, "atoms")
        super().__init__(interval, OutcomeSpace(-1.0, 1.0, (-1.0, 1.0)))
        self.atoms = atoms
        self.reference_phase = float(reference_phase)
        # in y = theta - pi/2, |cos theta / sin^3 theta| = |sin y / cos^3 y|
        y_lo = self._theta(interval.phi_min) - math.pi / 2
        y_hi = self._theta(interval.phi_max) - math.pi / 2
        self._curvature = _max_abs_sin_cos3(y_lo, y_hi, GHZ, strict) / atoms

    def _theta(self, phi):
        return self.atoms * (phi - self.reference_phase + math.pi / 2)

    def f(self, phi):
        return math.cos(self._theta(phi))

    def df(self, phi):
        return -self.atoms * math.sin(self._theta(phi))

    def d2f(self, phi):
        return -self.atoms ** 2 * math.cos(self._theta(phi))

    def variance(self, phi):
        return math.sin(self._theta(phi)) ** 2

    def probabilities(self, phi):
        c = math.cos(self._theta(phi))
        return np.array([(1.0 - c) / 2.0, (1.0 + c) / 2.0])

    def analytic_curvature(self):
        return self._curvature


def separable_model(config: RamseyConfig, interval: ParameterInterval) -> SeparableEnergyModel:
    if config.variant != SEPARABLE:
        raise DomainError(f"separable_model needs variant {SEPARABLE!r}, got {config.variant!r}")
    return SeparableEnergyModel(config.atoms, config.reference_phase, interval)


def ghz_model(config: RamseyConfig, interval: ParameterInterval) -> GHZParityModel:
    if config.variant != GHZ:
        raise DomainError(f"ghz_model needs variant {GHZ!r}, got {config.variant!r}")
    return GHZParityModel(config.atoms, config.reference_phase, interval)


def ramsey_model(variant: str, atoms: int, interval: Optional[ParameterInterval] = None,
                 reference_phase: Optional[float] = None, strict: bool = True) -> StatisticalModel:
    """Build either Ramsey model by name; defaults follow the published setup.

    With ``strict=False`` a configuration whose derivative vanishes on the
    interval is still built (curvature ``inf``) so it can be inspected with
    :func:`~metroci.model.validate_assumptions`.
    """
    if interval is None:
        interval = PUBLISHED_INTERVAL
    if reference_phase is None:
        reference_phase = published_reference_phase(variant, atoms)
    config = RamseyConfig(atoms, float(reference_phase), variant)
    cls = SeparableEnergyModel if variant == SEPARABLE else GHZParityModel
    return cls(config.atoms, config.reference_phase, interval, strict=strict)
