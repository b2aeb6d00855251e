"""Truncated samples from the norm-angle limit law of the scaled diameter deficiency.

For each quadrant the points nearest the pole are represented by scaled norm
deficiencies ``z1_k = sigma * S_k**(2/3)`` (``S_k`` partial sums of unit
exponentials) and scaled pole angles ``z2_k = U_k * tau * sqrt(z1_k)``. The
limit of ``n**(2/3) * (2a - diam)`` is the smallest cross-quadrant
combination ``z1 + z1' + (a/4) * (z2 -+ z2')**2``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidNAParameters, TruncationMismatchError
from .region import QUADRANTS, RegionSpec
from .rng import SeedSpec, as_generator

DEFAULT_M = 8

# (quadrant pair, angle combination): "same" pairs share a side of the axis.
LIMIT_PAIRS = (((1, 2), "same"), ((1, 3), "opposite"), ((2, 4), "opposite"), ((3, 4), "same"))


@dataclass(frozen=True)
class NormAngleSample:
    z1: np.ndarray
    z2: np.ndarray

    @property
    def m(self) -> int:
        return len(self.z1)


@dataclass(frozen=True)
class LimitSample:
    value: float
    quadrants: tuple
    indices: tuple


def norm_angle_from_draws(sigma: float, tau: float, y, u) -> NormAngleSample:
    """Deterministic construction from given exponential and uniform draws."""
    y = np.asarray(y, dtype=float)
    u = np.asarray(u, dtype=float)
    if y.shape != u.shape or y.ndim != 1 or len(y) == 0:
        raise InvalidNAParameters("invalid NA parameters: y and u must be equal-length 1-d")
    z1 = sigma * np.cumsum(y) ** (2.0 / 3.0)
    z2 = u * tau * np.sqrt(z1)
    return NormAngleSample(z1, z2)


def sample_norm_angle(sigma: float, tau: float, m: int, rng, y=None, u=None) -> NormAngleSample:
    """Draw ``(z1_k, z2_k)`` for ``k = 1..m``.

    Draws are interleaved per ``k`` (exponential, then uniform), so a longer
    truncation on the same stream extends a shorter one. ``y`` and ``u``
    override the random draws.
    """
    if not (sigma > 0.0 and tau > 0.0) or m < 1:
        raise InvalidNAParameters(
            f"invalid NA parameters: sigma={sigma!r}, tau={tau!r}, m={m!r}")
    if y is None or u is None:
        v = as_generator(rng).random(2 * m)
        if y is None:
            y = -np.log1p(-v[0::2])
        if u is None:
            u = v[1::2]
    if len(y) != m or len(u) != m:
        raise InvalidNAParameters("invalid NA parameters: injected draws must have length m")
    return norm_angle_from_draws(sigma, tau, y, u)


def s_cross(na_i: NormAngleSample, na_j: NormAngleSample, a: float,
            mode: str = "opposite") -> tuple[float, tuple[int, int]]:
    """Minimum over all index pairs of ``z1_k + z1'_l + (a/4)(z2_k -+ z2'_l)**2``.

    ``mode="opposite"`` takes the angle difference, ``"same"`` the sum.
    Returns the value and the 0-based attaining ``(k, l)``, lexicographically
    smallest on ties.
    """
    if na_i.m != na_j.m:
        raise TruncationMismatchError(f"truncation mismatch: m={na_i.m} vs m={na_j.m}")
    if mode == "opposite":
        e = na_i.z2[:, None] - na_j.z2[None, :]
    elif mode == "same":
        e = na_i.z2[:, None] + na_j.z2[None, :]
    else:
        raise ValueError(f"unknown mode {mode!r}")
    v = na_i.z1[:, None] + na_j.z1[None, :] + 0.25 * a * e * e
    k = int(np.argmin(v))
    kk, ll = divmod(k, na_j.m)
    return float(v[kk, ll]), (kk, ll)


def limit_value(samples, a: float) -> LimitSample:
    """Four-way minimum for per-quadrant samples ``samples[0..3]`` (quadrants 1..4)."""
    best = None
    for (i, j), mode in LIMIT_PAIRS:
        val, idx = s_cross(samples[i - 1], samples[j - 1], a, mode)
        if best is None or val < best.value:
            best = LimitSample(val, (i, j), idx)
    return best


def sample_limit(region: RegionSpec, m: int = DEFAULT_M, rng=None) -> LimitSample:
    """One draw of the limit law truncated at ``m`` points per quadrant.

    With a :class:`SeedSpec`, quadrant ``i`` reads its own substream ``i``, so
    draws at different ``m`` from the same seed are coupled (the larger
    truncation minimises over a superset). A Generator is consumed quadrant
    by quadrant instead.
    """
    consts = [region.quadrant_constants(i) for i in QUADRANTS]
    if isinstance(rng, SeedSpec):
        streams = [rng.substream(i).generator() for i in QUADRANTS]
    else:
        g = as_generator(rng if rng is not None else SeedSpec(0))
        streams = [g] * 4
    samples = [sample_norm_angle(c.sigma, c.tau, m, s) for c, s in zip(consts, streams)]
    return limit_value(samples, region.a)
