import math

import numpy as np
import pytest

from conftest import affine_model
from metroci.estimator import confidence
from metroci.exceptions import AssumptionViolation, DomainError, EnumerationBudgetError
from metroci.experiment import (CSV_FIELDS, ExperimentConfig, count_vectors, exact_coverage,
                                exact_coverage_sequences, exact_expectation, loglog_slope, monte_carlo,
                                records_to_csv, run_trial, trial_stream)
from metroci.model import ParameterInterval
from metroci.ramsey import PUBLISHED_PHI, ramsey_model


def small_config(**kw):
    base = dict(variants=["ghz_parity", "separable_energy"], N_values=[1, 10], n_values=[1, 50],
                replications=300, master_seed=11)
    base.update(kw)
    return ExperimentConfig.from_dict(base)


def test_config_validation():
    with pytest.raises(DomainError):
        small_config(phi_true=1.0)
    with pytest.raises(DomainError):
        small_config(replications=0)
    with pytest.raises(DomainError):
        small_config(master_seed=-1)
    with pytest.raises(DomainError):
        ExperimentConfig.from_dict({"variants": ["ghz_parity"], "N_values": [1], "n_values": [1], "x": 1})
    with pytest.raises(AssumptionViolation):
        small_config(phi_max=1.0, phi_true=0.5)


def test_config_round_trip():
    cfg = small_config()
    assert ExperimentConfig.from_dict(cfg.to_dict()) == cfg
    assert cfg.cells()[0] == ("ghz_parity", 1, 1)


def test_trial_determinism():
    model = ramsey_model("ghz_parity", 100)
    a = run_trial(model, PUBLISHED_PHI, 300, 0.1, trial_stream(5, "ghz_parity", 100, 300, 0))
    b = run_trial(model, PUBLISHED_PHI, 300, 0.1, trial_stream(5, "ghz_parity", 100, 300, 0))
    c = run_trial(model, PUBLISHED_PHI, 300, 0.1, trial_stream(5, "ghz_parity", 100, 300, 1))
    assert a == b
    assert a != c


def test_trial_coverage_rate():
    model = ramsey_model("ghz_parity", 100)
    hits = 0
    for rep in range(400):
        tr = run_trial(model, PUBLISHED_PHI, 3000, 0.1, trial_stream(42, "ghz_parity", 100, 3000, rep))
        assert tr.covered == (tr.abs_error <= tr.confidence.delta)
        hits += tr.covered
    assert hits / 400 >= 0.9


def test_single_replication_record():
    cfg = small_config(variants=["ghz_parity"], N_values=[10], n_values=[50], replications=1)
    (rec,) = monte_carlo(cfg)
    tr = run_trial(cfg.model("ghz_parity", 10), cfg.phi_true, 50, cfg.epsilon,
                   trial_stream(cfg.master_seed, "ghz_parity", 10, 50, 0))
    assert rec.mean_delta == tr.confidence.delta
    assert rec.mean_delta1 == tr.confidence.delta1
    assert rec.mean_delta2 == tr.confidence.delta2
    assert rec.mean_abs_error == tr.abs_error
    assert rec.coverage == float(tr.covered)
    assert rec.mean_b_lu_estimate == tr.b_lu_estimate


def test_monte_carlo_records():
    cfg = small_config()
    records = monte_carlo(cfg)
    assert [(r.variant, r.N, r.n) for r in records] == cfg.cells()
    for r in records:
        assert 0 <= r.coverage <= 1
        assert r.mean_delta >= 0
        if r.n == 1:
            assert math.isnan(r.mean_delta2) and math.isnan(r.mean_b_lu_estimate)
        else:
            assert r.mean_delta <= max(r.mean_delta1, r.mean_delta2)
        assert r.coverage >= 0.9 - 4 * math.sqrt(0.09 / r.replications)


def test_parallel_identical():
    cfg = small_config(replications=600)
    assert records_to_csv(monte_carlo(cfg, threads=1)) == records_to_csv(monte_carlo(cfg, threads=2))


def test_csv_format():
    text = records_to_csv(monte_carlo(small_config(replications=3)))
    lines = text.split("\n")
    assert lines[0] == ",".join(CSV_FIELDS)
    assert lines[0] == ("variant,N,n,epsilon,replications,mean_delta,mean_delta1,mean_delta2,"
                        "mean_abs_error,coverage,mean_b_lu_estimate")
    assert len(lines) == 2 * 2 * 2 + 2 and lines[-1] == ""
    assert lines[1].startswith("ghz_parity,1,1,0.10000000000000001,3,")


def test_count_vectors():
    assert list(count_vectors(2, 2)) == [(2, 0), (1, 1), (0, 2)]
    assert len(list(count_vectors(5, 3))) == math.comb(7, 2)


@pytest.mark.parametrize("n", [1, 4, 8, 12])
@pytest.mark.parametrize("eps", [0.1, 0.5])
def test_count_and_sequence_enumeration_agree(n, eps):
    model = ramsey_model("ghz_parity", 5, ParameterInterval(0.0, math.pi / 20))
    for phi in model.interval.grid(3):
        a = exact_coverage(model, float(phi), n, eps)
        b = exact_coverage_sequences(model, float(phi), n, eps)
        assert abs(a - b) <= 1e-12


def test_sequence_enumeration_three_outcomes():
    model = ramsey_model("separable_energy", 2)
    assert abs(exact_coverage(model, PUBLISHED_PHI, 6, 0.2)
               - exact_coverage_sequences(model, PUBLISHED_PHI, 6, 0.2)) <= 1e-12


def test_coverage_one_when_interval_trivial():
    model = ramsey_model("ghz_parity", 1)
    agg_delta = exact_expectation(model, PUBLISHED_PHI, 3, lambda agg: confidence(model, agg, 0.1).delta)
    assert agg_delta > model.interval.width
    assert exact_coverage(model, PUBLISHED_PHI, 3, 0.1) == pytest.approx(1.0, abs=1e-15)


def test_coverage_deterministic_model():
    model = affine_model(lo=0.5, hi=1.0)
    assert exact_coverage(model, 1.0, 4, 0.1) in (0.0, 1.0)
    assert exact_expectation(model, 1.0, 4, lambda agg: 1.0) == 1.0


def test_coverage_ghz_single_atom():
    assert exact_coverage(ramsey_model("ghz_parity", 1), PUBLISHED_PHI, 10, 0.1) >= 0.9


def test_enumeration_budget():
    with pytest.raises(EnumerationBudgetError):
        exact_coverage(ramsey_model("separable_energy", 100), PUBLISHED_PHI, 50, 0.1)
    with pytest.raises(EnumerationBudgetError):
        exact_coverage_sequences(ramsey_model("ghz_parity", 1), PUBLISHED_PHI, 25, 0.1)


def test_loglog_slope():
    xs = [1.0, 10.0, 100.0, 1000.0]
    assert loglog_slope([(x, 3 / x) for x in xs]) == pytest.approx(-1.0)
    assert loglog_slope([(x, 3 / math.sqrt(x)) for x in xs]) == pytest.approx(-0.5)
    assert loglog_slope([(x, 2.0) for x in xs]) == pytest.approx(0.0, abs=1e-15)
    with pytest.raises(DomainError):
        loglog_slope([(1, 1), (2, 0)])
