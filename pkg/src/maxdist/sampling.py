"""Point clouds in a region, the scaled diameter deficiency and the quadrant diagnostic."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import geometry
from .errors import SamplerStalledError, StatisticUndefinedError
from .region import QUADRANTS, RegionSpec
from .rng import SeedSpec, as_generator

FIXED = "fixed-n"
POISSON = "poissonized"
REGIMES = (FIXED, POISSON)

MAX_MISSES = 10**6

# Cross-quadrant pairs that can carry the diameter for large n.
CROSS_PAIRS = ((1, 2), (1, 3), (2, 4), (3, 4))


@dataclass
class Cloud:
    points: np.ndarray
    regime: str
    nominal_n: int

    def __len__(self):
        return len(self.points)


def _ellipse_points(rng, count, a, b):
    u = rng.random((count, 2))
    r = np.sqrt(u[:, 0])
    theta = 2.0 * math.pi * u[:, 1]
    return np.column_stack((a * r * np.cos(theta), b * r * np.sin(theta)))


def _quarter_ellipse_points(rng, count, a, minor):
    weights = np.asarray(minor, dtype=float)
    cum = np.cumsum(weights / weights.sum())
    u = rng.random((count, 3))
    quad = np.minimum(np.searchsorted(cum, u[:, 0], side="right"), 3)
    r = np.sqrt(u[:, 1])
    theta = 0.5 * math.pi * (quad + u[:, 2])
    b = weights[quad]
    return np.column_stack((a * r * np.cos(theta), b * r * np.sin(theta)))


def _bounding_box(region: RegionSpec):
    s = np.linspace(0.0, region.a, 2049)
    top = max(float(np.max(region.boundary(1, s))), float(np.max(region.boundary(2, -s))))
    bottom = min(float(np.min(region.boundary(4, s))), float(np.min(region.boundary(3, -s))))
    pad = 0.05 * max(top - bottom, 1e-12 * region.a)
    return top + pad, bottom - pad


def _rejection_points(rng, count, region: RegionSpec):
    top, bottom = _bounding_box(region)
    out = np.empty((count, 2))
    filled = 0
    misses = 0
    while filled < count:
        batch = max(64, 2 * (count - filled))
        u = rng.random((batch, 2))
        cand = np.column_stack((region.a * (2.0 * u[:, 0] - 1.0), bottom + (top - bottom) * u[:, 1]))
        ok = region.contains(cand)
        if not ok.any():
            misses += batch
            if misses > MAX_MISSES:
                raise SamplerStalledError(
                    "sampler stalled (region area anomaly): no point accepted in "
                    f"{misses} consecutive proposals")
            continue
        misses = 0
        acc = cand[ok][: count - filled]
        out[filled:filled + len(acc)] = acc
        filled += len(acc)
    return out


def sample_points(region: RegionSpec, count: int, rng) -> np.ndarray:
    """``count`` i.i.d. uniform points in ``region`` as an ``(count, 2)`` array.

    Ellipses use the exact polar transform of a uniform disk point,
    quarter-ellipse regions pick a quadrant proportional to its area first,
    custom regions fall back to rejection from the bounding box.
    """
    rng = as_generator(rng)
    if count == 0:
        return np.empty((0, 2))
    if region.minor is not None:
        if len(set(region.minor)) == 1:
            return _ellipse_points(rng, count, region.a, region.minor[0])
        return _quarter_ellipse_points(rng, count, region.a, region.minor)
    return _rejection_points(rng, count, region)


def sample_point(region: RegionSpec, rng) -> geometry.Point:
    x, y = sample_points(region, 1, rng)[0]
    return geometry.Point(float(x), float(y))


def sample_cloud(region: RegionSpec, n: int, regime: str = FIXED, seed=None) -> Cloud:
    """Fixed-size cloud of ``n`` points or a Poisson process with intensity ``n``.

    ``seed`` may be a :class:`SeedSpec`, an integer or a Generator.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if regime not in REGIMES:
        raise ValueError(f"unknown regime {regime!r}; expected one of {REGIMES}")
    rng = as_generator(seed if seed is not None else SeedSpec(0))
    count = int(rng.poisson(n)) if regime == POISSON else n
    return Cloud(sample_points(region, count, rng), regime, n)


def scaled_deficiency(cloud: Cloud, a: float) -> float:
    """``n**(2/3) * (2a - diameter)`` with the nominal ``n`` of the cloud."""
    if len(cloud.points) < 2:
        raise StatisticUndefinedError(
            f"statistic undefined: cloud has {len(cloud.points)} point(s)")
    diam, _ = geometry.diameter_calipers(cloud.points)
    return cloud.nominal_n ** (2.0 / 3.0) * (2.0 * a - diam)


@dataclass
class QuadrantSplitReport:
    diameter: float
    cross_maxima: dict
    skipped: list
    coincide: bool
    attaining_pair: tuple | None


def quadrant_split_diagnostic(cloud: Cloud, a: float | None = None) -> QuadrantSplitReport:
    """Compare the diameter with the largest of the four cross-quadrant maxima.

    Pairs involving an empty quadrant are skipped and listed in ``skipped``.
    ``a`` is accepted for interface symmetry with :func:`scaled_deficiency`.
    """
    xy = geometry.as_array(cloud.points)
    diam, _ = geometry.diameter_calipers(xy)
    quad = geometry.quadrants(xy)
    groups = {i: xy[quad == i] for i in QUADRANTS}
    maxima = {}
    skipped = []
    for i, j in CROSS_PAIRS:
        if len(groups[i]) == 0 or len(groups[j]) == 0:
            skipped.append((i, j))
            continue
        maxima[(i, j)], _ = geometry.cross_max(groups[i], groups[j])
    if maxima:
        pair = max(maxima, key=lambda k: (maxima[k], tuple(-v for v in k)))
        coincide = maxima[pair] == diam
    else:
        pair, coincide = None, False
    return QuadrantSplitReport(diam, maxima, skipped, coincide, pair)
