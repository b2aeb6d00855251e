"""Empirical distribution functions and the two-sample Kolmogorov-Smirnov distance."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class EmpiricalCDF:
    values: np.ndarray

    @property
    def count(self) -> int:
        return len(self.values)

    def __call__(self, t):
        return evaluate(self, t)


def ecdf(samples) -> EmpiricalCDF:
    v = np.sort(np.asarray(samples, dtype=float).ravel())
    if v.size == 0:
        raise ValueError("empirical CDF of an empty sample set")
    if np.isnan(v).any():
        raise ValueError("samples contain NaN; drop undefined replications first")
    v.setflags(write=False)
    return EmpiricalCDF(v)


def evaluate(e: EmpiricalCDF, t):
    """Fraction of samples ``<= t`` (right-continuous); ``t`` may be an array."""
    res = np.searchsorted(e.values, t, side="right") / e.count
    return float(res) if np.ndim(res) == 0 else res


def ks_distance(e1: EmpiricalCDF, e2: EmpiricalCDF) -> float:
    """``sup_t |F1(t) - F2(t)|``, attained at one of the pooled jump points."""
    pooled = np.concatenate((e1.values, e2.values))
    f1 = np.searchsorted(e1.values, pooled, side="right") / e1.count
    f2 = np.searchsorted(e2.values, pooled, side="right") / e2.count
    return float(np.max(np.abs(f1 - f2)))


def quantile(e: EmpiricalCDF, p: float) -> float:
    """Order statistic number ``ceil(p * count)`` (1-based)."""
    if not (0.0 < p < 1.0):
        raise ValueError(f"quantile level must lie in (0, 1), got {p!r}")
    # round first so that e.g. 0.1 * 5000 selects the 500th value, not the 501st
    k = max(1, math.ceil(round(p * e.count, 9)))
    return float(e.values[k - 1])
