import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats as sps

from maxdist.stats import ecdf, evaluate, ks_distance, quantile

samples = st.lists(st.floats(-1e6, 1e6, allow_nan=False), min_size=1, max_size=80)


def _ks_scan(x, y):
    # independent O(n*m) scan over every jump point with plain counting
    best = 0.0
    for t in list(x) + list(y):
        fx = sum(v <= t for v in x) / len(x)
        fy = sum(v <= t for v in y) / len(y)
        best = max(best, abs(fx - fy))
    return best


def test_ecdf_examples():
    e = ecdf([3, 1, 2])
    assert list(e.values) == [1, 2, 3] and e.count == 3
    assert e(2) == pytest.approx(2 / 3)
    assert e(0.5) == 0.0 and e(3) == 1.0 and e(10) == 1.0


def test_ecdf_errors():
    with pytest.raises(ValueError):
        ecdf([])
    with pytest.raises(ValueError):
        ecdf([1.0, float("nan")])


def test_ecdf_is_immutable():
    e = ecdf([1.0, 2.0])
    with pytest.raises(ValueError):
        e.values[0] = 5.0


def test_evaluate_matches_naive_count():
    rng = np.random.default_rng(0)
    x = np.round(rng.normal(size=500), 2)  # rounding creates ties
    e = ecdf(x)
    t = np.concatenate((np.round(rng.normal(size=9000), 2), x[:1000]))
    got = evaluate(e, t)
    naive = np.array([np.count_nonzero(x <= s) for s in t]) / len(x)
    assert np.array_equal(got, naive)


@settings(max_examples=100, deadline=None)
@given(samples, st.lists(st.floats(-1e6, 1e6, allow_nan=False), min_size=5, max_size=30))
def test_evaluate_non_decreasing(x, grid):
    vals = evaluate(ecdf(x), np.sort(grid))
    assert np.all(np.diff(vals) >= 0)
    assert np.all((vals >= 0) & (vals <= 1))


def test_ks_examples():
    assert ks_distance(ecdf([1, 2, 3]), ecdf([3, 2, 1])) == 0.0
    assert ks_distance(ecdf([0]), ecdf([1])) == 1.0


@settings(max_examples=150, deadline=None)
@given(samples, samples)
def test_ks_matches_scan_and_is_symmetric(x, y):
    e1, e2 = ecdf(x), ecdf(y)
    d = ks_distance(e1, e2)
    assert d == ks_distance(e2, e1)
    assert d == pytest.approx(_ks_scan(x, y), abs=1e-15)
    assert 0.0 <= d <= 1.0


def test_ks_matches_scipy():
    rng = np.random.default_rng(3)
    for _ in range(20):
        x = rng.normal(size=int(rng.integers(1, 300)))
        y = rng.normal(0.2, size=int(rng.integers(1, 300)))
        assert ks_distance(ecdf(x), ecdf(y)) == pytest.approx(sps.ks_2samp(x, y).statistic, abs=1e-15)


def test_quantile_examples():
    e = ecdf([1, 2, 3, 4])
    assert quantile(e, 0.5) == 2
    assert quantile(e, 0.25) == 1
    assert quantile(e, 0.26) == 2
    assert quantile(e, 1 - 1e-12) == 4
    assert quantile(ecdf(np.arange(1, 5001)), 0.1) == 500


@pytest.mark.parametrize("p", [0.0, 1.0, -0.1, 1.5])
def test_quantile_range(p):
    with pytest.raises(ValueError):
        quantile(ecdf([1.0]), p)


@settings(max_examples=100, deadline=None)
@given(samples, st.floats(1e-6, 1 - 1e-6), st.floats(1e-6, 1 - 1e-6))
def test_quantile_monotone(x, p1, p2):
    e = ecdf(x)
    lo, hi = sorted((p1, p2))
    assert quantile(e, lo) <= quantile(e, hi)
    assert e(quantile(e, hi)) >= hi - 1e-9
