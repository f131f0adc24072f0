"""Least-squares phase estimation with finite-sample confidence radii."""

from .benchmark import (BenchmarkReport, asymptotic_delta_bound, b_lu, b_lu_estimate,
                        benchmark_report, fisher_classical)
from .concentration import DataAggregate, aggregate, empirical_bernstein_radius, hoeffding_radius
from .estimator import (ConfidenceResult, PhaseEstimator, confidence, delta1, delta2,
                        deviation_threshold, di_estimate, ls_estimate)
from .exceptions import (AssumptionViolation, BoundsViolationError, DomainError, EmptyDataError,
                         EnumerationBudgetError, MetrociError, OutOfRangeError, SingularSupportError)
from .experiment import (ExperimentConfig, SummaryRecord, TrialResult, exact_coverage,
                         loglog_slope, monte_carlo, run_trial, trial_stream)
from .model import (AssumptionReport, CallableModel, OutcomeSpace, ParameterInterval,
                    StatisticalModel, curvature_constant, invert_f, project_to_range,
                    validate_assumptions)
from .ramsey import (GHZParityModel, RamseyConfig, SeparableEnergyModel, ghz_model,
                     published_reference_phase, ramsey_model, separable_model)
from .robust import NoiseRegion, RobustResult, delta_tilde

__version__ = "0.1.0"
