"""Monte Carlo sweeps and exact-enumeration coverage oracles.

Every replication draws from its own Philox stream keyed by
``(master_seed, variant, N, n, replication)``, so results do not depend on
execution order or on how many worker processes are used.

Exact oracles enumerate outcome *count vectors* with multinomial weights
instead of outcome sequences; the estimator and both radii depend on the data
only through ``(n, S_n, V_n)``, which a count vector determines.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
import io
import csv
import itertools
import math
import os
from typing import Callable, Iterator, List, Optional, Sequence

import numpy as np

from ._validation import check_count, check_epsilon
from .benchmark import b_lu_estimate
from .concentration import DataAggregate, _summarise
from .estimator import ConfidenceResult, confidence, ls_estimate
from .exceptions import DomainError, EnumerationBudgetError
from .model import ParameterInterval, StatisticalModel
from .ramsey import PUBLISHED_PHI, VARIANTS, published_reference_phase, ramsey_model
from .robust import NoiseRegion, delta_tilde

__all__ = [
    "PUBLISHED_N_GRID",
    "ExperimentConfig",
    "TrialResult",
    "SummaryRecord",
    "CSV_FIELDS",
    "trial_stream",
    "run_trial",
    "monte_carlo",
    "records_to_csv",
    "count_vectors",
    "exact_expectation",
    "exact_coverage",
    "exact_coverage_sequences",
    "exact_robust_coverage",
    "loglog_slope",
]

# log-spaced N values for the published "N = 1 ~ 100" sweep
PUBLISHED_N_GRID = (1, 2, 3, 5, 7, 10, 15, 20, 30, 50, 70, 100)

ENUMERATION_BUDGET = 10_000_000
_CHUNK = 250
_VARIANT_KEYS = {name: i + 1 for i, name in enumerate(VARIANTS)}


@dataclass(frozen=True)
class ExperimentConfig:
    """A sweep over ``variants x N_values x n_values`` with a fixed true phase.

    ``reference_phase`` of ``None`` picks the published value per variant and N.
    """

    variants: tuple
    N_values: tuple
    n_values: tuple
    phi_true: float = PUBLISHED_PHI
    phi_min: float = 0.0
    phi_max: float = math.pi / 400
    epsilon: float = 0.1
    replications: int = 5000
    master_seed: int = 0
    reference_phase: Optional[float] = None

    def __post_init__(self):
        variants = tuple(self.variants)
        if not variants:
            raise DomainError("at least one variant is required")
        for v in variants:
            if v not in VARIANTS:
                raise DomainError(f"unknown variant {v!r}; expected one of {VARIANTS}")
        object.__setattr__(self, "variants", variants)
        object.__setattr__(self, "N_values", tuple(check_count(N, 1, "N") for N in self.N_values))
        object.__setattr__(self, "n_values", tuple(check_count(n, 1, "n") for n in self.n_values))
        if not self.N_values or not self.n_values:
            raise DomainError("N_values and n_values must be non-empty")
        check_count(self.replications, 1, "replications")
        check_epsilon(self.epsilon)
        seed = self.master_seed
        if isinstance(seed, bool) or not isinstance(seed, int) or not 0 <= seed < 2 ** 64:
            raise DomainError(f"master_seed must be an unsigned 64-bit integer, got {seed!r}")
        interval = self.interval  # validates phi_min < phi_max
        if self.phi_true not in interval:
            raise DomainError(f"phi_true {self.phi_true!r} lies outside [{self.phi_min}, {self.phi_max}]")
        for v in variants:
            for N in self.N_values:
                self.model(v, N)  # raises AssumptionViolation for an unusable (variant, N)

    @property
    def interval(self) -> ParameterInterval:
        return ParameterInterval(self.phi_min, self.phi_max)

    def model(self, variant: str, N: int) -> StatisticalModel:
        phase = self.reference_phase
        if phase is None:
            phase = published_reference_phase(variant, N)
        return ramsey_model(variant, N, self.interval, phase)

    def cells(self):
        """Sweep cells in canonical order (variant, N, n)."""
        return sorted(itertools.product(sorted(set(self.variants)), sorted(set(self.N_values)),
                                        sorted(set(self.n_values))))

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise DomainError(f"unknown config keys: {sorted(unknown)}")
        missing = {"variants", "N_values", "n_values"} - set(data)
        if missing:
            raise DomainError(f"missing config keys: {sorted(missing)}")
        return cls(**data)

    def to_dict(self) -> dict:
        d = asdict(self)
        for k in ("variants", "N_values", "n_values"):
            d[k] = list(d[k])
        return d


@dataclass(frozen=True)
class TrialResult:
    confidence: ConfidenceResult
    covered: bool
    abs_error: float
    b_lu_estimate: float
    aggregate: DataAggregate
    outcomes: Optional[np.ndarray] = field(default=None, compare=False)


def trial_stream(master_seed: int, variant: str, N: int, n: int, replication: int) -> np.random.Generator:
    """Independent Philox generator for one replication of one sweep cell."""
    key = _VARIANT_KEYS.get(variant)
    if key is None:
        raise DomainError(f"unknown variant {variant!r}")
    seq = np.random.SeedSequence([int(master_seed), key, int(N), int(n), int(replication)])
    return np.random.Generator(np.random.Philox(seq))


def run_trial(model: StatisticalModel, phi_true: float, n: int, epsilon: float,
              stream: np.random.Generator, keep_outcomes: bool = False) -> TrialResult:
    """One replication: draw ``n`` outcomes at ``phi_true`` and evaluate the estimator."""
    x = np.asarray(model.sample(phi_true, stream, n), dtype=float)
    agg = _summarise(x, model.outcomes.a, model.outcomes.b)
    res = confidence(model, agg, epsilon)
    err = abs(res.phi_ls - phi_true)
    blu = b_lu_estimate(model, agg, res.phi_ls) if n >= 2 else math.nan
    return TrialResult(res, err <= res.delta, err, blu, agg, x if keep_outcomes else None)


@dataclass(frozen=True)
class SummaryRecord:
    variant: str
    N: int
    n: int
    epsilon: float
    replications: int
    mean_delta: float
    mean_delta1: float
    mean_delta2: float
    mean_abs_error: float
    coverage: float
    mean_b_lu_estimate: float


CSV_FIELDS = tuple(f.name for f in fields(SummaryRecord))


def _run_chunk(config: ExperimentConfig, variant: str, N: int, n: int, start: int, stop: int):
    model = config.model(variant, N)
    out = np.empty((stop - start, 6))
    for row, rep in enumerate(range(start, stop)):
        tr = run_trial(model, config.phi_true, n, config.epsilon,
                       trial_stream(config.master_seed, variant, N, n, rep))
        c = tr.confidence
        out[row] = (c.delta, c.delta1, math.nan if c.delta2 is None else c.delta2,
                    tr.abs_error, float(tr.covered), tr.b_lu_estimate)
    return out


def _summarise_cell(config, variant, N, n, rows) -> SummaryRecord:
    # fsum is exactly rounded, hence independent of summation order
    def mean(col):
        return math.fsum(rows[:, col]) / rows.shape[0]
    return SummaryRecord(variant, N, n, config.epsilon, rows.shape[0], mean(0), mean(1),
                         mean(2), mean(3), mean(4), mean(5))


def monte_carlo(config: ExperimentConfig, threads: int = 1,
                progress: Optional[Callable[[str, int, int], None]] = None) -> List[SummaryRecord]:
    """Run every sweep cell and return one :class:`SummaryRecord` per cell, canonically ordered.

    ``threads`` is the number of worker processes (``0`` means one per CPU).
    Output is identical for any value.
    """
    if threads == 0:
        threads = os.cpu_count() or 1
    threads = check_count(threads, 1, "threads")
    R = config.replications
    tasks = [(cell, start, min(start + _CHUNK, R))
             for cell in config.cells() for start in range(0, R, _CHUNK)]
    if threads == 1:
        chunks = [_run_chunk(config, *cell, start, stop) for cell, start, stop in tasks]
    else:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            futures = [pool.submit(_run_chunk, config, *cell, start, stop) for cell, start, stop in tasks]
            chunks = [fut.result() for fut in futures]
    by_cell = {}
    for (cell, _, _), rows in zip(tasks, chunks):
        by_cell.setdefault(cell, []).append(rows)
    records = []
    for cell in config.cells():
        records.append(_summarise_cell(config, *cell, np.concatenate(by_cell[cell])))
        if progress is not None:
            progress(*cell)
    return records


def _fmt(value):
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    if isinstance(value, str):
        return value
    return format(float(value), ".17g")


def records_to_csv(records: Sequence[SummaryRecord]) -> str:
    """CSV text with a fixed header and 17-significant-digit floats."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_FIELDS)
    for rec in records:
        writer.writerow([_fmt(getattr(rec, name)) for name in CSV_FIELDS])
    return buf.getvalue()


def count_vectors(n: int, k: int) -> Iterator[tuple]:
    """All ``k``-tuples of non-negative integers summing to ``n`` (lexicographic)."""
    if k == 1:
        yield (n,)
        return
    for first in range(n, -1, -1):
        for rest in count_vectors(n - first, k - 1):
            yield (first,) + rest


def _multinomial(counts) -> int:
    total = 0
    coef = 1
    for c in counts:
        total += c
        coef *= math.comb(total, c)
    return coef


def _weighted_aggregates(model, phi, n, budget):
    if not model.is_discrete:
        raise DomainError("exact enumeration needs a model with finite support")
    n = check_count(n, 1)
    support = model.support
    k = support.size
    size = math.comb(n + k - 1, k - 1)
    if size > budget:
        raise EnumerationBudgetError(f"{size} count vectors exceed the budget of {budget}")
    p = model.probabilities(phi)
    a, b = model.outcomes.a, model.outcomes.b
    for counts in count_vectors(n, k):
        w = float(_multinomial(counts))
        for pi, c in zip(p, counts):
            if c:
                w *= float(pi) ** c
        if w == 0.0:
            continue
        yield w, DataAggregate.from_counts(support, counts, a, b)


def exact_expectation(model: StatisticalModel, phi: float, n: int,
                      statistic: Callable[[DataAggregate], float],
                      budget: int = ENUMERATION_BUDGET) -> float:
    """``E[statistic(aggregate)]`` over all samples of size ``n`` drawn at ``phi``."""
    return math.fsum(w * statistic(agg) for w, agg in _weighted_aggregates(model, phi, n, budget))


def exact_coverage(model: StatisticalModel, phi_true: float, n: int, epsilon: float,
                   budget: int = ENUMERATION_BUDGET) -> float:
    """Exact ``P[|phi_ls - phi_true| <= delta]`` by count-vector enumeration."""
    eps = check_epsilon(epsilon)

    def covered(agg):
        return float(confidence(model, agg, eps).covers(phi_true))

    return exact_expectation(model, phi_true, n, covered, budget)


def exact_coverage_sequences(model: StatisticalModel, phi_true: float, n: int, epsilon: float,
                             budget: int = 1 << 20) -> float:
    """Same probability as :func:`exact_coverage`, enumerating every outcome sequence.

    Exponential in ``n``; kept as an independent cross-check.
    """
    eps = check_epsilon(epsilon)
    support = model.support
    if support.size ** n > budget:
        raise EnumerationBudgetError(f"{support.size}**{n} sequences exceed the budget of {budget}")
    p = model.probabilities(phi_true)
    a, b = model.outcomes.a, model.outcomes.b
    terms = []
    for idx in itertools.product(range(support.size), repeat=n):
        w = math.prod(float(p[i]) for i in idx)
        if w == 0.0:
            continue
        agg = _summarise(support[list(idx)].astype(float), a, b)
        terms.append(w * float(confidence(model, agg, eps).covers(phi_true)))
    return math.fsum(terms)


def exact_robust_coverage(family, region: NoiseRegion, eta_true, eta_assumed, phi_true: float,
                          n: int, epsilon: float, budget: int = ENUMERATION_BUDGET) -> float:
    """Exact ``P[|phi_ls(eta_assumed) - phi_true| <= delta_tilde]`` with data drawn under ``eta_true``."""
    eps = check_epsilon(epsilon)
    true_model = family(np.atleast_1d(np.asarray(eta_true, dtype=float)))
    assumed_model = family(np.atleast_1d(np.asarray(eta_assumed, dtype=float)))

    def covered(agg):
        bound = delta_tilde(family, agg, eps, eta_assumed, region).delta_tilde
        return float(abs(ls_estimate(assumed_model, agg) - phi_true) <= bound)

    return exact_expectation(true_model, phi_true, n, covered, budget)


def loglog_slope(points) -> float:
    """Least-squares slope of ``log y`` against ``log x``."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 3:
        raise DomainError("need at least three (x, y) points")
    if np.any(pts <= 0) or not np.all(np.isfinite(pts)):
        raise DomainError("log-log slope needs finite positive coordinates")
    lx, ly = np.log(pts[:, 0]), np.log(pts[:, 1])
    dx = lx - lx.mean()
    sxx = float(np.dot(dx, dx))
    if sxx == 0:
        raise DomainError("x values must not all coincide")
    return float(np.dot(dx, ly - ly.mean())) / sxx
