import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats as sps

from maxdist.errors import InvalidNAParameters, TruncationMismatchError
from maxdist.limit_dist import (
    LIMIT_PAIRS,
    NormAngleSample,
    limit_value,
    norm_angle_from_draws,
    s_cross,
    sample_limit,
    sample_norm_angle,
)
from maxdist.region import ellipse_region, quarter_ellipse_region
from maxdist.rng import SeedSpec
from maxdist.stats import ecdf, ks_distance

# mpmath: gamma(5/3) to 30 digits, the mean of Exp(1)**(2/3)
GAMMA_5_3 = 0.902745292950933611296187114261

ELLIPSE = ellipse_region(1.0, 0.5)


def test_injected_draws():
    na = sample_norm_angle(2.0, 1.0, 3, None, y=[1, 1, 1], u=[0, 0, 0])
    assert na.z1 == pytest.approx([2.0, 2 * 2 ** (2 / 3), 2 * 3 ** (2 / 3)], rel=1e-15)
    assert list(na.z2) == [0.0, 0.0, 0.0]
    assert na.m == 3


def test_injected_angles():
    na = norm_angle_from_draws(1.0, 2.0, [1.0], [0.5])
    assert na.z2[0] == pytest.approx(1.0, rel=1e-15)


@pytest.mark.parametrize("sigma,tau,m", [(0, 1, 3), (1, 0, 3), (-1, 1, 3), (1, 1, 0)])
def test_invalid_parameters(sigma, tau, m):
    with pytest.raises(InvalidNAParameters, match="invalid NA parameters"):
        sample_norm_angle(sigma, tau, m, np.random.default_rng(0))


def test_injected_length_mismatch():
    with pytest.raises(InvalidNAParameters):
        sample_norm_angle(1.0, 1.0, 3, None, y=[1, 1], u=[0, 0])


@settings(max_examples=100, deadline=None)
@given(st.floats(0.01, 100), st.floats(0.01, 100), st.integers(1, 40), st.integers(0, 2**32))
def test_norm_angle_invariants(sigma, tau, m, seed):
    na = sample_norm_angle(sigma, tau, m, np.random.default_rng(seed))
    assert np.all(np.diff(na.z1) > 0)
    assert np.all(na.z2 >= 0)
    assert np.all(na.z2 <= tau * np.sqrt(na.z1) * (1 + 1e-15))


def test_prefix_extension():
    short = sample_norm_angle(1.0, 1.0, 8, np.random.default_rng(5))
    long = sample_norm_angle(1.0, 1.0, 16, np.random.default_rng(5))
    assert np.array_equal(short.z1, long.z1[:8])
    assert np.array_equal(short.z2, long.z2[:8])


@pytest.fixture(scope="module")
def first_points():
    rng = np.random.default_rng(31)
    sigma, tau = 1.7, 1.0
    z1 = np.empty(100_000)
    z2 = np.empty(100_000)
    for k in range(len(z1)):
        na = sample_norm_angle(sigma, tau, 1, rng)
        z1[k], z2[k] = na.z1[0], na.z2[0]
    return sigma, tau, z1, z2


def test_first_norm_mean(first_points):
    sigma, _, z1, _ = first_points
    x = z1 / sigma
    se = x.std(ddof=1) / math.sqrt(len(x))
    assert abs(x.mean() - GAMMA_5_3) <= 3 * se


def test_angle_conditional_uniformity(first_points):
    _, tau, z1, z2 = first_points
    assert sps.kstest(z2 / (tau * np.sqrt(z1)), "uniform").statistic < 0.01


def test_s_cross_examples():
    a = NormAngleSample(np.array([1.0]), np.array([0.2]))
    b = NormAngleSample(np.array([2.0]), np.array([0.1]))
    v, idx = s_cross(a, b, 1.0, "opposite")
    assert v == pytest.approx(3.0025, abs=1e-15) and idx == (0, 0)
    v, _ = s_cross(a, b, 1.0, "same")
    assert v == pytest.approx(3.0225, abs=1e-15)


def test_s_cross_bruteforce_and_ties():
    rng = np.random.default_rng(2)
    for _ in range(50):
        i = sample_norm_angle(1.3, 0.8, 6, rng)
        j = sample_norm_angle(1.3, 0.8, 6, rng)
        for mode, sgn in (("opposite", -1), ("same", 1)):
            vals = {}
            for k in range(6):
                for l in range(6):
                    e = i.z2[k] + sgn * j.z2[l]
                    vals[(k, l)] = i.z1[k] + j.z1[l] + 0.25 * 1.5 * e * e
            v, idx = s_cross(i, j, 1.5, mode)
            best = min(vals.values())
            assert v == best
            assert idx == min(key for key, val in vals.items() if val == best)
    flat = NormAngleSample(np.array([1.0, 1.0]), np.array([0.0, 0.0]))
    assert s_cross(flat, flat, 1.0)[1] == (0, 0)


def test_s_cross_diagonal_bound():
    na = sample_norm_angle(1.0, 1.0, 5, np.random.default_rng(1))
    v, _ = s_cross(na, na, 1.0, "opposite")
    assert v <= 2 * na.z1[0]


def test_s_cross_mismatch():
    a = sample_norm_angle(1.0, 1.0, 3, np.random.default_rng(0))
    b = sample_norm_angle(1.0, 1.0, 4, np.random.default_rng(0))
    with pytest.raises(TruncationMismatchError, match="truncation mismatch"):
        s_cross(a, b, 1.0)


@settings(max_examples=50, deadline=None)
@given(st.floats(0.1, 10.0), st.integers(0, 2**32))
def test_s_cross_scale_property(lam, seed):
    rng = np.random.default_rng(seed)
    i = sample_norm_angle(1.0, 1.0, 4, rng)
    j = sample_norm_angle(1.0, 1.0, 4, rng)
    si = NormAngleSample(i.z1, i.z2 / math.sqrt(lam))
    sj = NormAngleSample(j.z1, j.z2 / math.sqrt(lam))
    for mode in ("opposite", "same"):
        v0, idx0 = s_cross(i, j, 1.0, mode)
        v1, idx1 = s_cross(si, sj, lam, mode)
        assert v1 == pytest.approx(v0, rel=1e-12)


def test_limit_pairs_modes():
    assert dict(LIMIT_PAIRS) == {(1, 2): "same", (1, 3): "opposite", (2, 4): "opposite", (3, 4): "same"}


def test_limit_value_m1_closed_form():
    rng = np.random.default_rng(4)
    y, u = rng.exponential(size=4), rng.random(4)
    samples = [norm_angle_from_draws(2.0, 0.8, [y[i]], [u[i]]) for i in range(4)]
    z1 = [s.z1[0] for s in samples]
    z2 = [s.z2[0] for s in samples]
    expect = min(z1[0] + z1[1] + 0.25 * (z2[0] + z2[1]) ** 2,
                 z1[0] + z1[2] + 0.25 * (z2[0] - z2[2]) ** 2,
                 z1[1] + z1[3] + 0.25 * (z2[1] - z2[3]) ** 2,
                 z1[2] + z1[3] + 0.25 * (z2[2] + z2[3]) ** 2)
    lv = limit_value(samples, 1.0)
    assert lv.value == expect and lv.value >= 0


def test_sample_limit_deterministic_and_coupled():
    for r in range(300):
        spec = SeedSpec(99, r)
        v8 = sample_limit(ELLIPSE, 8, spec)
        assert sample_limit(ELLIPSE, 8, spec) == v8
        assert sample_limit(ELLIPSE, 16, spec).value <= v8.value
        assert sample_limit(ELLIPSE, 1, spec).value >= v8.value


def test_sample_limit_accepts_generator():
    v = sample_limit(quarter_ellipse_region(1.0, (0.5, 0.25, 0.5, 0.25)), 4, np.random.default_rng(0))
    assert v.value >= 0 and v.quadrants in dict(LIMIT_PAIRS)


def test_quadrant_relabel_invariance():
    reps = 5000
    base = np.array([sample_limit(ELLIPSE, 8, SeedSpec(10, r)).value for r in range(reps)])
    relabeled = []
    c = ELLIPSE.quadrant_constants(1)
    for r in range(reps):
        spec = SeedSpec(20, r)
        samples = [sample_norm_angle(c.sigma, c.tau, 8, spec.substream(i).generator()) for i in (1, 2, 3, 4)]
        # exchange quadrants 1<->4 and 2<->3
        relabeled.append(limit_value([samples[3], samples[2], samples[1], samples[0]], 1.0).value)
    assert ks_distance(ecdf(base), ecdf(relabeled)) < 0.02
