import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from metroci.concentration import DataAggregate, aggregate, empirical_bernstein_radius, hoeffding_radius
from metroci.exceptions import BoundsViolationError, DomainError, EmptyDataError


# -- aggregate -----------------------------------------------------------------

def test_two_point_aggregate():
    agg = aggregate([0, 2], -1, 3)
    assert (agg.n, agg.sample_mean, agg.sample_variance) == (2, 1.0, 2.0)
    assert agg.v_max == 4.0


@pytest.mark.parametrize("c", [-1.0, 0.3, 1.0])
def test_constant_data(c):
    agg = aggregate([c, c, c], -1, 1)
    assert agg.sample_mean == c
    assert agg.sample_variance == 0.0


def test_ghz_parity_data():
    agg = aggregate([-1, 1, 1, 1], -1, 1)
    assert agg.sample_mean == 0.5
    assert agg.sample_variance == 1.0


def test_single_outcome_has_no_variance():
    agg = aggregate([0.25], 0, 1)
    assert agg.n == 1 and agg.sample_variance is None


def test_empty_data():
    with pytest.raises(EmptyDataError):
        aggregate([], 0, 1)


def test_bounds_violation_names_index():
    with pytest.raises(BoundsViolationError) as info:
        aggregate([0, 1, 2.5, 1], 0, 2)
    assert info.value.index == 2
    assert "#2" in str(info.value)


def test_inverted_bounds():
    with pytest.raises(DomainError):
        aggregate([0], 1, 0)


def test_column_vector_accepted():
    agg = aggregate(np.array([[1.0], [-1.0]]), -1, 1)
    assert agg.n == 2 and agg.sample_mean == 0.0


outcome_lists = st.lists(st.floats(-3, 5, allow_nan=False), min_size=2, max_size=60)


@given(outcome_lists, st.randoms())
def test_permutation_invariant(xs, rnd):
    ys = list(xs)
    rnd.shuffle(ys)
    a1, a2 = aggregate(xs, -3, 5), aggregate(ys, -3, 5)
    assert a1.n == a2.n
    assert a1.sample_mean == pytest.approx(a2.sample_mean, rel=1e-12, abs=1e-12)
    assert a1.sample_variance == pytest.approx(a2.sample_variance, rel=1e-9, abs=1e-12)


@given(outcome_lists)
def test_aggregate_invariants(xs):
    agg = aggregate(xs, -3, 5)
    n = agg.n
    assert -3 <= agg.sample_mean <= 5
    assert 0 <= agg.sample_variance <= n * 64 / (4 * (n - 1)) * (1 + 1e-12)
    m, v = oracles.mean_var(xs)
    assert agg.sample_mean == pytest.approx(float(m), abs=1e-12)
    assert agg.sample_variance == pytest.approx(float(v), rel=1e-9, abs=1e-12)


def test_variance_bound_attained_by_half_half_data():
    n = 6
    agg = aggregate([-1] * 3 + [1] * 3, -1, 1)
    assert agg.sample_variance == pytest.approx(n * 4 / (4 * (n - 1)))


@given(outcome_lists, outcome_lists)
def test_merge_matches_concatenation(xs, ys):
    merged = aggregate(xs, -3, 5).merge(aggregate(ys, -3, 5))
    direct = aggregate(xs + ys, -3, 5)
    assert merged.n == direct.n
    assert merged.sample_mean == pytest.approx(direct.sample_mean, abs=1e-12)
    assert merged.sample_variance == pytest.approx(direct.sample_variance, rel=1e-9, abs=1e-11)


def test_from_counts_matches_raw():
    agg = DataAggregate.from_counts([-2, 0, 2], [1, 3, 2], -2, 2)
    raw = aggregate([-2, 0, 0, 0, 2, 2], -2, 2)
    assert agg.n == raw.n
    assert agg.sample_mean == pytest.approx(raw.sample_mean, abs=1e-15)
    assert agg.sample_variance == pytest.approx(raw.sample_variance, rel=1e-14)


# -- radii ---------------------------------------------------------------------

def test_hoeffding_examples():
    assert hoeffding_radius(4, 0.0, 0.1) == 0.0
    assert hoeffding_radius(2, 1.0, 2 / math.e) == pytest.approx(1.0, rel=1e-15)
    # independent 50-digit evaluation: 4.4689538474188721427
    assert hoeffding_radius(3000, 1e4, 0.1) == pytest.approx(4.4689538474188721427, rel=1e-14)


@pytest.mark.parametrize("eps", [0.0, 1.0, -0.1, 1.5, float("nan")])
def test_hoeffding_bad_epsilon(eps):
    with pytest.raises(DomainError):
        hoeffding_radius(10, 1.0, eps)


def test_hoeffding_zero_trials():
    with pytest.raises(DomainError):
        hoeffding_radius(0, 1.0, 0.1)


def test_bernstein_examples():
    assert empirical_bernstein_radius(5, 0.0, 0.0, 0.1) == 0.0
    # ln(4/eps) = 2: sqrt(2*2*2/2) + 8*3/(3*1)*2 = 2 + 16
    assert empirical_bernstein_radius(2, 2.0, 3.0, 4 / math.e ** 2) == pytest.approx(18.0, rel=1e-14)
    # independent 50-digit evaluation: 0.056151050353514415563
    assert empirical_bernstein_radius(3000, 1.0, 2.0, 0.1) == pytest.approx(
        0.056151050353514415563, rel=1e-14)


def test_bernstein_epsilon_out_of_range():
    with pytest.raises(DomainError):
        empirical_bernstein_radius(2, 2.0, 3.0, 4 / math.e)


def test_bernstein_needs_two_trials():
    with pytest.raises(DomainError):
        empirical_bernstein_radius(1, 0.0, 1.0, 0.1)


@given(st.integers(1, 10_000), st.floats(1e-6, 1e4), st.floats(0.001, 0.99), st.floats(0.001, 0.99))
def test_hoeffding_monotone(n, vmax, e1, e2):
    lo, hi = sorted((e1, e2))
    assert hoeffding_radius(n, vmax, lo) >= hoeffding_radius(n, vmax, hi)
    assert hoeffding_radius(n, vmax, lo) >= hoeffding_radius(n + 1, vmax, lo)


@given(st.integers(2, 10_000), st.floats(0, 100), st.floats(0, 20), st.floats(0.001, 0.99),
       st.floats(0.001, 0.99))
def test_bernstein_monotone(n, vn, width, e1, e2):
    lo, hi = sorted((e1, e2))
    assert empirical_bernstein_radius(n, vn, width, lo) >= empirical_bernstein_radius(n, vn, width, hi)
    assert empirical_bernstein_radius(n, vn, width, lo) >= empirical_bernstein_radius(n + 1, vn, width, lo)


def _violation_rates(n, p, eps, S, V, weights=None):
    mean = 2 * p - 1
    # radii depend on the data only through V; evaluate once per distinct value
    keys, inv = np.unique(np.round(V, 12), return_inverse=True)
    eb = np.array([empirical_bernstein_radius(n, max(k, 0.0), 2.0, eps) for k in keys])[inv]
    h = hoeffding_radius(n, 1.0, eps)
    dev = np.abs(S - mean)
    w = np.full(S.shape, 1.0 / S.size) if weights is None else weights
    return float(np.sum(w * (dev > h))), float(np.sum(w * (dev > eb)))


@pytest.mark.parametrize("n,eps", [(10, 0.1), (100, 0.1), (100, 0.5)])
@pytest.mark.parametrize("p", [0.05, 0.3, 0.5, 0.9])
def test_empirical_violation_rate(n, eps, p):
    batches = 100_000
    rng = np.random.default_rng(hash((n, eps, p)) & 0xFFFFFFFF)
    k = rng.binomial(n, p, size=batches)  # number of +1 outcomes per batch
    S = (2 * k - n) / n
    V = (k * (1 - S) ** 2 + (n - k) * (-1 - S) ** 2) / (n - 1)
    rate_h, rate_eb = _violation_rates(n, p, eps, S, V)
    slack = 3 * math.sqrt(eps * (1 - eps) / batches)
    assert rate_h <= eps + slack
    assert rate_eb <= eps + slack


@pytest.mark.parametrize("n", [2, 5, 9, 15])
@pytest.mark.parametrize("p", [0.02, 0.3, 0.5, 0.85])
@pytest.mark.parametrize("eps", [0.1, 0.3, 0.5])
def test_exact_violation_probability(n, p, eps):
    strings = np.array(list(itertools.product((-1.0, 1.0), repeat=n)))
    S = strings.mean(axis=1)
    V = ((strings - S[:, None]) ** 2).sum(axis=1) / (n - 1)
    k = (strings > 0).sum(axis=1)
    w = p ** k * (1 - p) ** (n - k)
    assert math.isclose(w.sum(), 1.0, rel_tol=1e-12)
    rate_h, rate_eb = _violation_rates(n, p, eps, S, V, weights=w)
    assert rate_h <= eps
    assert rate_eb <= eps
