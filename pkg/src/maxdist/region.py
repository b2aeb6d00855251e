"""Regions with a unique major axis and their pole constants.

A region is described near its poles ``(+-a, 0)`` by four boundary functions
``g_1..g_4`` (quadrants numbered anti-clockwise from the upper right),
per-quadrant shape constants ``q_i`` measured against the reference profile
``f_a(x) = sqrt(a**2 - x**2) / 2``, and the density ``p_i`` at the pole.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Sequence

import numpy as np
from scipy import integrate

from .errors import CapUndefinedError, RegionError, ShapeConstantError

QUADRANTS = (1, 2, 3, 4)

# quadrant -> (sign of x on its domain, sign of y)
_SIGNS = {1: (1.0, 1.0), 2: (-1.0, 1.0), 3: (-1.0, -1.0), 4: (1.0, -1.0)}


class QuadrantConstants(NamedTuple):
    c: float
    sigma: float
    tau: float


def constants(q: float, p: float, a: float) -> QuadrantConstants:
    """Cap-area coefficient ``c``, norm scale ``sigma`` and angle scale ``tau``.

    ``c = 2 q sqrt(2a) / (3 sqrt(4 - q^2))``, ``sigma = (p c)^(-2/3)`` and
    ``tau = 3 c / (2a)``.
    """
    if not (0.0 < q < 2.0):
        raise ShapeConstantError(
            f"shape constant out of range: q out of (0,2) (circle-like pole excluded), q={q!r}")
    if not (p > 0.0 and math.isfinite(p)):
        raise RegionError(f"invalid region parameter: density p={p!r} must be > 0", "A7")
    if not (a > 0.0 and math.isfinite(a)):
        raise RegionError(f"invalid region parameter: half axis a={a!r} must be > 0", "A1")
    c = 2.0 * q * math.sqrt(2.0 * a) / (3.0 * math.sqrt(4.0 - q * q))
    sigma = (p * c) ** (-2.0 / 3.0)
    tau = 1.5 * c / a
    return QuadrantConstants(c, sigma, tau)


class _QuarterEllipse:
    """``y = sign * (b/a) * sqrt(a^2 - x^2)``; picklable, accepts arrays."""

    def __init__(self, a: float, b: float, sign: float):
        self.a, self.b, self.sign = a, b, sign

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        r = self.sign * (self.b / self.a) * np.sqrt(np.maximum(self.a * self.a - x * x, 0.0))
        return float(r) if r.ndim == 0 else r

    def __repr__(self):
        return f"_QuarterEllipse(a={self.a}, b={self.b}, sign={self.sign:+.0f})"


@dataclass(frozen=True)
class RegionSpec:
    """Immutable description of a region satisfying (or checked against) A1-A7.

    ``boundaries[i-1]`` is ``g_i`` evaluated on its native domain (``[nu, a]``
    for quadrants 1 and 4, ``[-a, -nu]`` for 2 and 3) and carries its sign.
    Custom regions must supply boundaries valid on the whole half axis
    (``nu = 0``) to be sampled; ``nu`` only brackets the cap root search.
    """

    a: float
    q: tuple
    p: tuple
    boundaries: tuple
    kind: str = "custom"
    nu: float = 0.0
    minor: tuple | None = None
    relaxed_density: bool = False
    _area: float | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if not (self.a > 0.0 and math.isfinite(self.a)):
            raise RegionError(f"invalid region parameter: a={self.a!r}", "A1")
        for name in ("q", "p", "boundaries"):
            if len(getattr(self, name)) != 4:
                raise RegionError(f"{name} needs one entry per quadrant")
        object.__setattr__(self, "q", tuple(float(v) for v in self.q))
        object.__setattr__(self, "p", tuple(float(v) for v in self.p))
        if not (0.0 <= self.nu < self.a):
            raise RegionError(f"nu={self.nu!r} must lie in [0, a)", "A4")

    def boundary(self, quadrant: int, x):
        return self.boundaries[quadrant - 1](x)

    def profile(self, quadrant: int, s):
        """Boundary height of ``quadrant`` at distance ``s`` along the axis from the centre.

        Folds quadrant ``i`` onto quadrant 1, so ``s`` runs from ``nu`` to ``a``.
        """
        sx, sy = _SIGNS[quadrant]
        return sy * self.boundaries[quadrant - 1](sx * np.asarray(s, dtype=float))

    def quadrant_constants(self, quadrant: int) -> QuadrantConstants:
        return constants(self.q[quadrant - 1], self.p[quadrant - 1], self.a)

    @property
    def area(self) -> float:
        if self._area is not None:
            return self._area
        if self.minor is not None:
            return 0.25 * math.pi * self.a * sum(self.minor)
        total = 0.0
        for i in QUADRANTS:
            val, _ = integrate.quad(lambda s, i=i: float(self.profile(i, s)), 0.0, self.a,
                                    epsabs=1e-13, epsrel=1e-12, limit=200)
            total += val
        return total

    def quadrant_areas(self) -> tuple:
        if self.minor is not None:
            return tuple(0.25 * math.pi * self.a * b for b in self.minor)
        out = []
        for i in QUADRANTS:
            val, _ = integrate.quad(lambda s, i=i: float(self.profile(i, s)), 0.0, self.a,
                                    epsabs=1e-13, epsrel=1e-12, limit=200)
            out.append(val)
        return tuple(out)

    def contains(self, xy, tol: float = 0.0) -> np.ndarray:
        """Boundary-inclusive membership for an ``(n, 2)`` array."""
        xy = np.atleast_2d(np.asarray(xy, dtype=float))
        x, y = xy[:, 0], xy[:, 1]
        inside = np.abs(x) <= self.a + tol
        xc = np.clip(x, -self.a, self.a)
        right = xc >= 0.0
        xr = np.where(right, xc, 0.0)
        xl = np.where(right, 0.0, xc)
        upper = np.where(right, self.boundary(1, xr), self.boundary(2, xl))
        lower = np.where(right, self.boundary(4, xr), self.boundary(3, xl))
        return inside & (y <= upper + tol) & (y >= lower - tol)

    def to_config(self) -> dict:
        if self.kind == "ellipse":
            return {"kind": "ellipse", "a": self.a, "b": self.minor[0]}
        if self.kind == "quarter-ellipse":
            return {"kind": "quarter-ellipse", "a": self.a, "b": list(self.minor)}
        raise RegionError("custom regions have no JSON representation")


def ellipse_region(a: float, b: float) -> RegionSpec:
    """Uniform distribution in the ellipse with half axes ``a > b > 0``."""
    if not (a > 0.0 and math.isfinite(a)):
        raise RegionError(f"invalid region parameter: a={a!r}", "A1")
    if not b > 0.0:
        raise RegionError(f"degenerate ellipse: b={b!r} must be > 0", "A3")
    if b >= a:
        raise RegionError(f"no unique major axis (A2 violated): b={b!r} >= a={a!r}", "A2")
    q = 2.0 * b / a
    p = 1.0 / (math.pi * a * b)
    return RegionSpec(
        a=float(a), q=(q,) * 4, p=(p,) * 4,
        boundaries=tuple(_QuarterEllipse(a, b, _SIGNS[i][1]) for i in QUADRANTS),
        kind="ellipse", minor=(float(b),) * 4,
    )


def quarter_ellipse_region(a: float, b: Sequence[float]) -> RegionSpec:
    """Four quarter ellipses sharing the major half axis ``a``, uniform density."""
    b = tuple(float(v) for v in b)
    if len(b) != 4:
        raise RegionError("quarter-ellipse region needs four semi-minor axes")
    if not (a > 0.0 and math.isfinite(a)):
        raise RegionError(f"invalid region parameter: a={a!r}", "A1")
    for i, bi in enumerate(b, start=1):
        if not bi > 0.0:
            raise RegionError(f"degenerate quadrant {i}: b={bi!r} must be > 0", "A3")
        if bi >= a:
            raise RegionError(
                f"no unique major axis (A2 violated): b_{i}={bi!r} >= a={a!r}", "A2")
    area = 0.25 * math.pi * a * sum(b)
    p = 1.0 / area
    return RegionSpec(
        a=float(a), q=tuple(2.0 * bi / a for bi in b), p=(p,) * 4,
        boundaries=tuple(_QuarterEllipse(a, bi, _SIGNS[i][1]) for i, bi in zip(QUADRANTS, b)),
        kind="ellipse" if len(set(b)) == 1 else "quarter-ellipse", minor=b,
    )


def custom_region(a: float, boundaries: Sequence[Callable], q: Sequence[float],
                  p: Sequence[float] | None = None, nu: float = 0.0,
                  relaxed_density: bool = False) -> RegionSpec:
    """Region from user boundary evaluators.

    Without ``p`` the density is uniform and the pole densities are one over
    the area. Boundary callables must accept numpy arrays.
    """
    spec = RegionSpec(a=float(a), q=tuple(q), p=(1.0,) * 4, boundaries=tuple(boundaries),
                      kind="custom", nu=nu, relaxed_density=relaxed_density)
    if p is None:
        area = spec.area
        if not area > 0.0:
            raise RegionError("region has zero area", "A3")
        p = (1.0 / area,) * 4
        return RegionSpec(a=spec.a, q=spec.q, p=p, boundaries=spec.boundaries, kind="custom",
                          nu=nu, relaxed_density=relaxed_density, _area=area)
    return RegionSpec(a=spec.a, q=spec.q, p=tuple(p), boundaries=spec.boundaries,
                      kind="custom", nu=nu, relaxed_density=relaxed_density)


def region_from_config(cfg: dict) -> RegionSpec:
    """Build a preset from ``{"kind": "ellipse", "a", "b"}`` or the quarter-ellipse form."""
    kind = cfg["kind"]
    if kind == "ellipse":
        return ellipse_region(float(cfg["a"]), float(cfg["b"]))
    if kind == "quarter-ellipse":
        return quarter_ellipse_region(float(cfg["a"]), [float(v) for v in cfg["b"]])
    raise ValueError(f"unknown region kind {kind!r}")


def _check_depth(region: RegionSpec, quadrant: int, h: float):
    if quadrant not in QUADRANTS:
        raise ValueError(f"quadrant must be one of 1..4, got {quadrant!r}")
    if not (0.0 < h < region.a):
        raise CapUndefinedError(f"cap undefined: h={h!r} outside (0, a)")


def _intersection(region: RegionSpec, quadrant: int, h: float) -> tuple[float, float]:
    """Abscissa and height where the boundary meets the circle of radius ``a - h``."""
    a = region.a
    rad = a - h
    if region.minor is not None:
        b = region.minor[quadrant - 1]
        if rad <= b:
            raise CapUndefinedError(
                f"A6 violated for this h: circle of radius a-h={rad!r} misses quadrant "
                f"{quadrant} boundary (needs h < a - b = {a - b!r})")
        x = a * math.sqrt((rad * rad - b * b) / (a * a - b * b))
        # rad^2 - x^2 simplified to avoid cancellation
        y = b * math.sqrt(h * (2.0 * a - h) / (a * a - b * b))
        return x, y

    def phi(s):
        g = float(region.profile(quadrant, s))
        return g * g + s * s - rad * rad

    lo, hi = region.nu, min(rad, a)
    if phi(lo) >= 0.0 or phi(hi) <= 0.0:
        raise CapUndefinedError(
            f"A6 violated for this h: no intersection with the circle in ({lo}, {a})")
    while hi - lo > 1e-13:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if phi(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    x = 0.5 * (lo + hi)
    return x, float(region.profile(quadrant, x))


def cap_angle(region: RegionSpec, quadrant: int, h: float) -> float:
    """Angle, seen from the origin and measured from the pole, spanned by the cap."""
    _check_depth(region, quadrant, h)
    x, y = _intersection(region, quadrant, h)
    return math.atan2(y, x)


def cap_area(region: RegionSpec, quadrant: int, h: float) -> float:
    """Area of the part of quadrant ``quadrant`` outside the disk of radius ``a - h``."""
    _check_depth(region, quadrant, h)
    a = region.a
    rad = a - h
    xbar, _ = _intersection(region, quadrant, h)
    opts = dict(epsabs=1e-15, epsrel=1e-12, limit=200)
    upper, _ = integrate.quad(lambda s: float(region.profile(quadrant, s)), xbar, a, **opts)
    disk, _ = integrate.quad(lambda s: math.sqrt(max(rad * rad - s * s, 0.0)), xbar, rad, **opts)
    return upper - disk


@dataclass
class Check:
    assumption: str
    name: str
    passed: bool
    detail: str = ""
    advisory: bool = False


@dataclass
class ValidationReport:
    checks: list

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks if not c.advisory)

    def failures(self) -> list:
        return [c for c in self.checks if not c.passed and not c.advisory]

    def lines(self) -> list[str]:
        out = []
        for c in self.checks:
            status = "PASS" if c.passed else ("WARN" if c.advisory else "FAIL")
            tag = " (advisory)" if c.advisory else ""
            out.append(f"{status} {c.assumption}: {c.name}{tag} {c.detail}".rstrip())
        return out


def validate(region: RegionSpec) -> ValidationReport:
    """Check the numerically checkable parts of A1-A7; never raises."""
    a = region.a
    checks: list[Check] = []
    with np.errstate(all="ignore"):
        ends = [abs(float(region.profile(i, a))) for i in QUADRANTS]
        tol = 1e-9 * a
        checks.append(Check("A1", "boundary vanishes at the poles", max(ends) < tol,
                            f"max |g_i(+-a)| = {max(ends):.3g}"))

        s = np.linspace(region.nu, a, 513)[:-1]
        heights = {i: np.asarray(region.profile(i, s), dtype=float) for i in QUADRANTS}
        norms = max(float(np.max(np.hypot(s, heights[i]))) for i in QUADRANTS)
        checks.append(Check("A2", "no unique major axis" if norms >= a else "unique major axis",
                            norms < a, f"max boundary norm off the poles = {norms:.12g}"))

        near = a - 1e-6 * a
        pos = [float(region.profile(i, near)) for i in QUADRANTS]
        checks.append(Check("A3", "positive area near each pole in every quadrant",
                            min(pos) > 0.0, f"min height at a-1e-6 = {min(pos):.3g}"))

        raw = [np.asarray(region.boundary(i, _SIGNS[i][0] * s), dtype=float) for i in QUADRANTS]
        sign_ok = (bool(np.all(raw[0] >= 0)) and bool(np.all(raw[1] >= 0))
                   and bool(np.all(raw[2] <= 0)) and bool(np.all(raw[3] <= 0)))
        checks.append(Check("A4", "sign conventions g1,g2 >= 0 and g3,g4 <= 0", sign_ok))

        in_range = [0.0 < q < 2.0 for q in region.q]
        checks.append(Check("A5", "shape constants in (0, 2)", all(in_range),
                            "q = " + ", ".join(f"{q:.6g}" for q in region.q)))

        fa = math.sqrt(a * a - near * near) / 2.0
        ratios = [p / fa for p in pos]
        close = [abs(r - q) <= 0.05 * q for r, q in zip(ratios, region.q)]
        checks.append(Check("A5", "g_i / f_a near the pole matches q_i within 5%", all(close),
                            "ratios = " + ", ".join(f"{r:.6g}" for r in ratios), advisory=True))

        if region.minor is not None:
            h_test = 0.5 * (a - max(region.minor))
        else:
            h_test = 1e-4 * a
        a6_ok, detail = True, f"h = {h_test:.3g}"
        for i in QUADRANTS:
            try:
                _check_depth(region, i, h_test)
                _intersection(region, i, h_test)
            except (CapUndefinedError, ValueError) as exc:
                a6_ok, detail = False, str(exc)
                break
        if a6_ok and region.minor is None:
            rad = a - h_test
            for i in QUADRANTS:
                sgn = np.sign(heights[i] ** 2 + s * s - rad * rad)
                if np.count_nonzero(np.diff(sgn[sgn != 0])) > 1:
                    a6_ok, detail = False, f"quadrant {i}: several intersections"
                    break
        checks.append(Check("A6", "single intersection of each boundary with the circle",
                            a6_ok, detail))

        dens_ok = all(p > 0.0 for p in region.p)
        sym = region.p[0] == region.p[3] and region.p[1] == region.p[2]
        checks.append(Check("A7", "positive pole densities", dens_ok,
                            "p = " + ", ".join(f"{p:.6g}" for p in region.p)))
        checks.append(Check("A7", "p1 = p4 and p2 = p3", sym or region.relaxed_density,
                            "relaxed" if region.relaxed_density and not sym else ""))
    return ValidationReport(checks)
