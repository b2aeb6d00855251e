"""Monte Carlo comparison of the finite-n scaled deficiency with its truncated limit."""
from __future__ import annotations

import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import StatisticUndefinedError
from .limit_dist import DEFAULT_M, sample_limit
from .region import RegionSpec, region_from_config
from .rng import MASK64, SeedSpec, splitmix64
from .sampling import FIXED, POISSON, REGIMES, sample_cloud, scaled_deficiency
from .stats import EmpiricalCDF, ecdf, evaluate, ks_distance, quantile

GRID_POINTS = 512
GRID_LEVEL = 0.999

# substream tags under each replication's SeedSpec; limit draws use 1..4
_CLOUD_TAG = {FIXED: 0, POISSON: 5}
_UNCOUPLED_LIMIT = 0x4C494D4954  # mixed with m for independent streams per truncation


def limit_master_seed(master_seed: int, m: int, coupled: bool) -> int:
    """Master seed for limit draws; uncoupled runs at different ``m`` use unrelated streams."""
    if coupled:
        return master_seed
    return splitmix64((master_seed ^ (_UNCOUPLED_LIMIT + m)) & MASK64)


@dataclass
class ExperimentConfig:
    region: dict
    n: int = 1000
    reps: int = 5000
    m: int = DEFAULT_M
    regime: str = FIXED
    master_seed: int = 0
    out: str | None = None
    couple: bool = True
    threads: int | None = field(default=1, compare=False)

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"n must be >= 2, got {self.n}")
        if self.reps < 1:
            raise ValueError(f"reps must be >= 1, got {self.reps}")
        if self.m < 1:
            raise ValueError(f"m must be >= 1, got {self.m}")
        if self.regime not in REGIMES:
            raise ValueError(f"regime must be one of {REGIMES}, got {self.regime!r}")
        if not 0 <= self.master_seed <= MASK64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    def build_region(self) -> RegionSpec:
        return region_from_config(self.region)

    def echo(self) -> dict:
        """Effective configuration without execution-only settings."""
        d = asdict(self)
        d.pop("threads")
        d.pop("out")
        return d


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    empirical: np.ndarray
    limit: np.ndarray
    dropped: list
    ecdf_empirical: EmpiricalCDF | None
    ecdf_limit: EmpiricalCDF
    grid: np.ndarray
    F_empirical: np.ndarray
    F_limit: np.ndarray
    ks: float
    wall_time: float = 0.0

    def quantiles(self, levels=(0.1, 0.5, 0.9)) -> dict:
        out = {}
        for name, e in (("empirical", self.ecdf_empirical), ("limit", self.ecdf_limit)):
            out[name] = {f"{p:g}": (quantile(e, p) if e is not None else None) for p in levels}
        return out


def _replicate(region: RegionSpec, cfg: ExperimentConfig, r: int,
               with_cloud: bool = True) -> tuple[float, float]:
    spec = SeedSpec(cfg.master_seed, r)
    emp = math.nan
    if with_cloud:
        cloud = sample_cloud(region, cfg.n, cfg.regime, spec.substream(_CLOUD_TAG[cfg.regime]))
        try:
            emp = scaled_deficiency(cloud, region.a)
        except StatisticUndefinedError:
            emp = math.nan
    lim = sample_limit(region, cfg.m, SeedSpec(limit_master_seed(cfg.master_seed, cfg.m, cfg.couple), r))
    return emp, lim.value


def _run_chunk(args):
    cfg, start, stop, with_cloud = args
    region = cfg.build_region()
    return start, [_replicate(region, cfg, r, with_cloud) for r in range(start, stop)]


def _collect(cfg: ExperimentConfig, with_cloud: bool):
    workers = cfg.threads or os.cpu_count() or 1
    emp = np.full(cfg.reps, np.nan)
    lim = np.full(cfg.reps, np.nan)
    if workers <= 1 or cfg.reps < 2:
        chunks = [_run_chunk((cfg, 0, cfg.reps, with_cloud))]
    else:
        size = max(1, math.ceil(cfg.reps / (4 * workers)))
        jobs = [(cfg, s, min(s + size, cfg.reps), with_cloud) for s in range(0, cfg.reps, size)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_run_chunk, jobs))
    # results are keyed by replication index, so completion order is irrelevant
    for start, rows in chunks:
        for k, (e, v) in enumerate(rows):
            emp[start + k] = e
            lim[start + k] = v
    return emp, lim


def limit_draws(config: ExperimentConfig) -> np.ndarray:
    """Only the truncated-limit column of :func:`run_experiment`."""
    return _collect(config, with_cloud=False)[1]


def evaluation_grid(*samples) -> np.ndarray:
    pooled = np.concatenate([s[~np.isnan(s)] for s in samples])
    top = quantile(ecdf(pooled), GRID_LEVEL)
    return np.linspace(0.0, top, GRID_POINTS)


def run_experiment(config: ExperimentConfig, with_cloud: bool = True) -> ExperimentResult:
    """Run ``reps`` replications of cloud statistic and truncated-limit draw.

    Replication ``r`` uses streams derived from ``(master_seed, r)`` only, so
    the result is identical for any number of workers. Replications whose
    Poisson cloud has fewer than two points are recorded in ``dropped`` and
    excluded from the empirical CDF.
    """
    t0 = time.perf_counter()
    emp, lim = _collect(config, with_cloud)
    dropped = [int(i) for i in np.flatnonzero(np.isnan(emp))] if with_cloud else []
    kept = emp[~np.isnan(emp)]
    e_lim = ecdf(lim)
    e_emp = ecdf(kept) if kept.size else None
    grid = evaluation_grid(emp, lim) if kept.size else evaluation_grid(lim)
    F_lim = evaluate(e_lim, grid)
    F_emp = evaluate(e_emp, grid) if e_emp is not None else np.full_like(grid, np.nan)
    ks = ks_distance(e_emp, e_lim) if e_emp is not None else math.nan
    return ExperimentResult(config, emp, lim, dropped, e_emp, e_lim, grid, F_emp, F_lim, ks,
                            wall_time=time.perf_counter() - t0)
