"""Acceptance criteria 1-9, one PASS/FAIL line each (run with ``-s`` or read the summary)."""
import math
import time

import numpy as np
import pytest
from scipy import stats as sps

from maxdist.cli import main
from maxdist.experiment import ExperimentConfig, limit_draws, run_experiment
from maxdist.geometry import diameter_bruteforce, diameter_calipers
from maxdist.limit_dist import sample_norm_angle
from maxdist.region import cap_angle, cap_area, custom_region, ellipse_region, quarter_ellipse_region
from maxdist.rng import SeedSpec
from maxdist.sampling import FIXED, quadrant_split_diagnostic, sample_cloud, sample_points
from maxdist.stats import ecdf, ks_distance

FIG_REGION = {"kind": "ellipse", "a": 1.0, "b": 0.5}
FIG_SEED = 12345
# mpmath: gamma(5/3)
GAMMA_5_3 = 0.902745292950933611296187114261

pytestmark = pytest.mark.slow


@pytest.fixture(scope="module")
def figure_run():
    cfg = ExperimentConfig(FIG_REGION, n=1000, reps=5000, m=8, regime=FIXED,
                           master_seed=FIG_SEED, threads=1)
    t0 = time.perf_counter()
    res = run_experiment(cfg)
    return res, time.perf_counter() - t0


def test_criterion_1_figure_ks(figure_run, report):
    res, wall = figure_run
    ok = res.ks <= 0.05 and wall < 120.0 and not res.dropped
    report(1, ok, f"KS(scaled deficiency, limit m=8) = {res.ks:.4f} <= 0.05; "
                  f"single-thread wall time {wall:.1f}s < 120s")
    assert ok


def test_criterion_2_poissonization(figure_run, report):
    fixed, _ = figure_run
    cfg = ExperimentConfig(FIG_REGION, n=1000, reps=5000, m=8, regime="poissonized",
                           master_seed=FIG_SEED, threads=1)
    pois = run_experiment(cfg)
    ks = ks_distance(fixed.ecdf_empirical, pois.ecdf_empirical)
    ok = ks <= 0.04
    report(2, ok, f"KS(fixed-n, poissonized) = {ks:.4f} <= 0.04 "
                  f"({pois.ecdf_empirical.count} kept, {len(pois.dropped)} dropped)")
    assert ok


def _ratio_errors(fn, scale, power):
    out = {}
    for b in (0.25, 0.5, 0.75):
        r = ellipse_region(1.0, b)
        c = r.quadrant_constants(1)
        out[b] = [abs(fn(r, 1, h) / (getattr(c, scale) * h**power) - 1) for h in (1e-2, 1e-3, 1e-4)]
    return out


def _check_ratio(errs):
    return all(e[0] > e[1] > e[2] and e[2] <= 0.02 for e in errs.values())


def test_criterion_3_cap_area(report):
    errs = _ratio_errors(cap_area, "c", 1.5)
    ok = _check_ratio(errs)
    worst = max(e[2] for e in errs.values())
    report(3, ok, f"cap area ratio error strictly decreasing in h; max at h=1e-4 is {worst:.2e} <= 0.02")
    assert ok


def test_criterion_4_cap_angle(report):
    errs = _ratio_errors(cap_angle, "tau", 0.5)
    ok = _check_ratio(errs)
    worst = max(e[2] for e in errs.values())
    report(4, ok, f"cap angle ratio error strictly decreasing in h; max at h=1e-4 is {worst:.2e} <= 0.02")
    assert ok


def _wobbly_region():
    def upper(x, k=1.0):
        x = np.asarray(x, dtype=float)
        return k * 0.4 * np.sqrt(np.maximum(1 - x * x, 0.0)) * (1 + 0.2 * x * x)
    g = [upper, lambda x: upper(x, 0.8), lambda x: -upper(x, 0.9), lambda x: -upper(x, 1.1)]
    return custom_region(1.0, g, [0.8, 0.64, 0.72, 0.88])


def test_criterion_5_geometry_oracle(report):
    rng = np.random.default_rng(5)
    regions = [ellipse_region(1.0, 0.5), ellipse_region(3.0, 0.2),
               quarter_ellipse_region(1.0, (0.5, 0.25, 0.75, 0.4)), _wobbly_region()]
    trials, hits = 1000, 0
    for t in range(trials):
        n = int(rng.integers(2, 257))
        xy = sample_points(regions[t % len(regions)], n, rng)
        d1, _ = diameter_bruteforce(xy)
        d2, _ = diameter_calipers(xy)
        hits += abs(d2 * d2 - d1 * d1) <= 1e-12 * d1 * d1
    ok = hits == trials
    report(5, ok, f"calipers vs brute force squared diameter within 1e-12 rel in {hits}/{trials} clouds")
    assert ok


def test_criterion_6_norm_angle_laws(report):
    rng = np.random.default_rng(6)
    sigma, tau = 2.026925767547618, 0.816496580927726
    draws = 100_000
    z1 = np.empty(draws)
    z2 = np.empty(draws)
    for k in range(draws):
        na = sample_norm_angle(sigma, tau, 1, rng)
        z1[k], z2[k] = na.z1[0], na.z2[0]
    x = z1 / sigma
    se = x.std(ddof=1) / math.sqrt(draws)
    dev = abs(x.mean() - GAMMA_5_3) / se
    ks = sps.kstest(z2 / (tau * np.sqrt(z1)), "uniform").statistic
    ok = dev <= 3.0 and ks <= 0.01
    report(6, ok, f"mean Z11/sigma = {x.mean():.5f} ({dev:.2f} SE from Gamma(5/3)); "
                  f"uniformity KS = {ks:.4f} <= 0.01")
    assert ok


def test_criterion_7_truncation(report):
    base = dict(region=FIG_REGION, reps=5000, master_seed=2026, threads=1)
    u8 = limit_draws(ExperimentConfig(m=8, couple=False, **base))
    u16 = limit_draws(ExperimentConfig(m=16, couple=False, **base))
    ks = ks_distance(ecdf(u8), ecdf(u16))
    c8 = limit_draws(ExperimentConfig(m=8, **base))
    c16 = limit_draws(ExperimentConfig(m=16, **base))
    frac = float(np.mean(c16 <= c8))
    ok = ks <= 0.03 and frac == 1.0
    report(7, ok, f"KS(m=8, m=16, independent streams) = {ks:.4f} <= 0.03; "
                  f"coupled m=16 <= m=8 in {100 * frac:.1f}% of draws")
    assert ok


def test_criterion_8_quadrant_split(report):
    region = ellipse_region(1.0, 0.5)
    reps = 5000
    hits = sum(quadrant_split_diagnostic(sample_cloud(region, 1000, FIXED, SeedSpec(88, r))).coincide
               for r in range(reps))
    freq = hits / reps
    ok = freq >= 0.99
    report(8, ok, f"diameter equals max cross-quadrant distance in {freq:.4f} of reps >= 0.99")
    assert ok


def test_criterion_9_determinism(tmp_path, capsys, report):
    files = ("samples.csv", "ecdf.csv", "summary.json")
    blobs = []
    for k, threads in enumerate(("1", "3", "1")):
        out = tmp_path / f"run{k}"
        code = main(["simulate", "--a", "1", "--b", "0.5", "--n", "1000", "--reps", "300",
                     "--seed", "777", "--threads", threads, "--out", str(out)])
        assert code == 0
        blobs.append(tuple((out / f).read_bytes() for f in files))
    capsys.readouterr()
    ok = blobs[0] == blobs[1] == blobs[2]
    with capsys.disabled():
        report(9, ok, "simulate outputs byte-identical across reruns and --threads 1/3")
    assert ok
