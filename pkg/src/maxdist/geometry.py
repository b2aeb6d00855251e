"""Planar primitives: diameters, convex hulls and polar/quadrant folding.

Point sets are accepted as anything convertible to an ``(n, 2)`` float array
(a list of :class:`Point`, a list of tuples, or an ndarray). All distance
comparisons are made on squared distances computed as ``dx*dx + dy*dy`` so
that the brute-force and hull-based routes produce bit-identical values.
"""
from __future__ import annotations

import math
from typing import NamedTuple, Sequence

import numpy as np

from .errors import DegenerateCloudError, UndefinedAngleError

TWO_PI = 2.0 * math.pi

# Below this size the octagon prefilter costs more than it saves.
_PREFILTER_MIN = 48


class Point(NamedTuple):
    x: float
    y: float


class PolarPoint(NamedTuple):
    r: float
    phi: float


class FoldedAngle(NamedTuple):
    """Quadrant index (1..4) and the polar angle measured from the nearest pole."""

    quadrant: int
    w: float


def as_array(points) -> np.ndarray:
    xy = np.asarray(points, dtype=float)
    if xy.size == 0:
        return xy.reshape(0, 2)
    if xy.ndim != 2 or xy.shape[1] != 2:
        raise ValueError(f"expected an (n, 2) array of points, got shape {xy.shape}")
    if not np.all(np.isfinite(xy)):
        raise ValueError("point coordinates must be finite")
    return xy


def to_polar(p) -> PolarPoint:
    x, y = float(p[0]), float(p[1])
    phi = math.atan2(y, x)
    if phi < 0.0:
        phi += TWO_PI
        if phi >= TWO_PI:  # atan2 returned -0.0 or a tiny negative
            phi = 0.0
    return PolarPoint(math.hypot(x, y), phi)


def from_polar(pp: PolarPoint) -> Point:
    return Point(pp.r * math.cos(pp.phi), pp.r * math.sin(pp.phi))


def quadrant_of(x: float, y: float) -> int:
    # Axis points are assigned deterministically; they have probability zero.
    if y >= 0.0:
        return 1 if x >= 0.0 else 2
    return 4 if x >= 0.0 else 3


def quadrants(xy: np.ndarray) -> np.ndarray:
    """Vectorised :func:`quadrant_of` for an ``(n, 2)`` array."""
    x, y = xy[:, 0], xy[:, 1]
    upper = y >= 0.0
    right = x >= 0.0
    return np.where(upper, np.where(right, 1, 2), np.where(right, 4, 3))


def fold_to_pole(p) -> FoldedAngle:
    """Return the quadrant of ``p`` and its angle measured from the nearest pole.

    The angle is ``phi`` in Q1, ``pi - phi`` in Q2, ``phi - pi`` in Q3 and
    ``2*pi - phi`` in Q4, with ``phi`` the polar angle in ``[0, 2*pi)``.
    """
    x, y = float(p[0]), float(p[1])
    if x == 0.0 and y == 0.0:
        raise UndefinedAngleError("undefined angle: the origin has no polar angle")
    quadrant = quadrant_of(x, y)
    phi = to_polar((x, y)).phi
    if quadrant == 1:
        w = phi
    elif quadrant == 2:
        w = math.pi - phi
    elif quadrant == 3:
        w = phi - math.pi
    else:
        # Q4 includes the positive x axis only through the tie rule above
        # (y < 0), so phi is strictly positive here.
        w = TWO_PI - phi
    return FoldedAngle(quadrant, w)


def unfold(fa: FoldedAngle, r: float) -> Point:
    """Inverse of :func:`fold_to_pole` for a point of norm ``r``."""
    phi = {
        1: fa.w,
        2: math.pi - fa.w,
        3: math.pi + fa.w,
        4: TWO_PI - fa.w,
    }[fa.quadrant]
    return from_polar(PolarPoint(r, phi))


def _sq(ax, ay, bx, by):
    dx = ax - bx
    dy = ay - by
    return dx * dx + dy * dy


def diameter_bruteforce(points) -> tuple[float, tuple[int, int]]:
    """Largest pairwise distance by full enumeration.

    Ties are resolved in favour of the lexicographically smallest index pair.
    """
    xy = as_array(points)
    n = len(xy)
    if n < 2:
        raise DegenerateCloudError(f"degenerate cloud: need at least 2 points, got {n}")
    dx = xy[:, 0][:, None] - xy[:, 0][None, :]
    dy = xy[:, 1][:, None] - xy[:, 1][None, :]
    d2 = dx * dx + dy * dy
    iu, ju = np.triu_indices(n, k=1)
    flat = d2[iu, ju]
    k = int(np.argmax(flat))  # first maximum in row-major order
    return math.sqrt(float(flat[k])), (int(iu[k]), int(ju[k]))


def _cross(ox, oy, ax, ay, bx, by):
    return (ax - ox) * (by - oy) - (ay - oy) * (bx - ox)


def _unique_sorted(xy: np.ndarray, idx: np.ndarray) -> list[int]:
    """Indices sorted by (x, y); among duplicates only the smallest index is kept."""
    sub = xy[idx]
    order = idx[np.lexsort((idx, sub[:, 1], sub[:, 0]))]
    keep = [int(order[0])]
    for j in order[1:]:
        last = keep[-1]
        if xy[j, 0] != xy[last, 0] or xy[j, 1] != xy[last, 1]:
            keep.append(int(j))
    return keep


def _prefilter(xy: np.ndarray) -> np.ndarray:
    """Indices of points not strictly inside the octagon of extreme points.

    Points strictly inside a polygon spanned by hull vertices cannot be hull
    vertices themselves; a margin keeps borderline points in.
    """
    n = len(xy)
    if n < _PREFILTER_MIN:
        return np.arange(n)
    x, y = xy[:, 0], xy[:, 1]
    s, d = x + y, x - y
    # CCW order of the directions 0, 45, ..., 315 degrees.
    ext = [
        int(np.argmax(x)), int(np.argmax(s)), int(np.argmax(y)), int(np.argmin(d)),
        int(np.argmin(x)), int(np.argmin(s)), int(np.argmin(y)), int(np.argmax(d)),
    ]
    poly = []
    for e in ext:
        if not poly or poly[-1] != e:
            poly.append(e)
    if len(poly) > 1 and poly[0] == poly[-1]:
        poly.pop()
    if len(set(poly)) < 3:
        return np.arange(n)
    scale = float(np.max(np.abs(xy)))
    margin = 1e-12 * scale * scale
    inside = np.ones(n, dtype=bool)
    for k in range(len(poly)):
        ax, ay = xy[poly[k]]
        bx, by = xy[poly[(k + 1) % len(poly)]]
        cr = (bx - ax) * (y - ay) - (by - ay) * (x - ax)
        inside &= cr > margin
    return np.flatnonzero(~inside)


def _hull_indices(xy: np.ndarray) -> list[int]:
    """Monotone chain; CCW from the lexicographically smallest vertex."""
    pts = _unique_sorted(xy, _prefilter(xy))
    if len(pts) <= 2:
        return pts
    X = xy[:, 0].tolist()
    Y = xy[:, 1].tolist()

    def build(seq):
        chain: list[int] = []
        for p in seq:
            while len(chain) >= 2:
                o, a = chain[-2], chain[-1]
                if _cross(X[o], Y[o], X[a], Y[a], X[p], Y[p]) <= 0.0:
                    chain.pop()
                else:
                    break
            chain.append(p)
        return chain

    lower = build(pts)
    upper = build(reversed(pts))
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 2:
        # All points collinear and the chains collapsed; keep the extremes.
        return [pts[0], pts[-1]]
    return hull


def convex_hull(points) -> list[Point]:
    """Convex hull vertices in counter-clockwise order without collinear vertices.

    Starts from the lexicographically smallest vertex. Collinear input yields
    its two extreme points, a single (possibly repeated) point yields itself.
    """
    xy = as_array(points)
    if len(xy) == 0:
        raise DegenerateCloudError("convex hull of an empty point set")
    return [Point(float(xy[i, 0]), float(xy[i, 1])) for i in _hull_indices(xy)]


def diameter_calipers(points) -> tuple[float, tuple[int, int]]:
    """Largest pairwise distance via convex hull and rotating calipers.

    Returns the same value and index pair as :func:`diameter_bruteforce`.
    """
    xy = as_array(points)
    n = len(xy)
    if n < 2:
        raise DegenerateCloudError(f"degenerate cloud: need at least 2 points, got {n}")
    hull = _hull_indices(xy)
    m = len(hull)
    if m == 1:
        # every point coincides; all distances are zero
        return 0.0, (0, 1)
    X = xy[:, 0].tolist()
    Y = xy[:, 1].tolist()
    best = -1.0

    def consider(u, v):
        nonlocal best
        best = max(best, _sq(X[u], Y[u], X[v], Y[v]))

    if m == 2:
        consider(hull[0], hull[1])
        return _settle_ties(xy, hull, best)

    def area(i, j, k):
        a, b, c = hull[i], hull[j], hull[k % m]
        return _cross(X[a], Y[a], X[b], Y[b], X[c], Y[c])

    j = 1
    for i in range(m):
        i1 = (i + 1) % m
        steps = 0
        while steps < m and area(i, i1, j + 1) > area(i, i1, j):
            j += 1
            steps += 1
        # Farthest vertex from edge (i, i1) and its successor, which covers
        # parallel edges and rounding-level ties.
        for jj in (j, j + 1):
            v = hull[jj % m]
            consider(hull[i], v)
            consider(hull[i1], v)
    return _settle_ties(xy, hull, best)


def _settle_ties(xy: np.ndarray, hull: list[int], best: float):
    """Smallest index pair attaining the maximum, matching full enumeration.

    A point off the hull can reach the hull maximum only through rounding.
    Such a point is still within rounding of its farthest hull vertex, so
    only points whose hull-vertex reach is close to ``best`` are enumerated.
    """
    hx = xy[hull, 0]
    hy = xy[hull, 1]
    dx = xy[:, 0][:, None] - hx[None, :]
    dy = xy[:, 1][:, None] - hy[None, :]
    reach = np.max(dx * dx + dy * dy, axis=1)
    cand = np.flatnonzero(reach >= best * (1.0 - 1e-12))
    sub = xy[cand]
    ex = sub[:, 0][:, None] - sub[:, 0][None, :]
    ey = sub[:, 1][:, None] - sub[:, 1][None, :]
    d2 = ex * ex + ey * ey
    iu, ju = np.triu_indices(len(cand), k=1)
    flat = d2[iu, ju]
    k = int(np.argmax(flat))  # cand is ascending, so this is the smallest pair
    return math.sqrt(float(flat[k])), (int(cand[iu[k]]), int(cand[ju[k]]))


def cross_max(a_points, b_points) -> tuple[float, tuple[int, int]]:
    """Largest distance between a point of ``a_points`` and one of ``b_points``.

    Only hull vertices of each set can attain it, so both sets are reduced to
    their hulls before the pairwise scan. Returns the squared-distance-exact
    value and the attaining indices into the respective inputs.
    """
    A = as_array(a_points)
    B = as_array(b_points)
    if len(A) == 0 or len(B) == 0:
        raise DegenerateCloudError("cross maximum needs two non-empty sets")
    ha = np.asarray(_hull_indices(A))
    hb = np.asarray(_hull_indices(B))
    dx = A[ha, 0][:, None] - B[hb, 0][None, :]
    dy = A[ha, 1][:, None] - B[hb, 1][None, :]
    d2 = dx * dx + dy * dy
    k = int(np.argmax(d2))
    ka, kb = divmod(k, len(hb))
    return math.sqrt(float(d2[ka, kb])), (int(ha[ka]), int(hb[kb]))


def pole_distance_expansion(r1: float, w1: float, r2: float, w2: float, a: float,
                            mode: str = "opposite") -> float:
    """Leading-order distance between two near-pole points.

    ``r1 + r2 - (a/4) * e**2`` where ``e = w1 - w2`` for points near opposite
    poles on opposite sides of the axis (quadrants 1/3, 2/4) and ``e = w1 + w2``
    for points on the same side (quadrants 1/2, 3/4).
    """
    if mode == "opposite":
        e = w1 - w2
    elif mode in ("same", "same-side-sum"):
        e = w1 + w2
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return r1 + r2 - 0.25 * a * e * e


def exact_pole_distance(r1: float, w1: float, r2: float, w2: float,
                        mode: str = "opposite") -> float:
    """Exact distance for the configuration of :func:`pole_distance_expansion`.

    By the law of cosines the two points subtend an angle ``pi - e``.
    """
    e = w1 - w2 if mode == "opposite" else w1 + w2
    return math.sqrt(r1 * r1 + r2 * r2 + 2.0 * r1 * r2 * math.cos(e))


def hull_contains(hull: Sequence, p, tol: float = 0.0) -> bool:
    """True if ``p`` is inside or on the CCW polygon ``hull`` (signed-area test)."""
    px, py = float(p[0]), float(p[1])
    m = len(hull)
    if m == 1:
        return math.hypot(px - hull[0][0], py - hull[0][1]) <= math.sqrt(max(tol, 0.0))
    for k in range(m):
        ax, ay = hull[k]
        bx, by = hull[(k + 1) % m]
        if _cross(ax, ay, bx, by, px, py) < -tol:
            return False
        if m == 2:
            break
    if m == 2:
        # segment: also require the projection to fall between the endpoints
        ax, ay = hull[0]
        bx, by = hull[1]
        if abs(_cross(ax, ay, bx, by, px, py)) > tol:
            return False
        t = (px - ax) * (bx - ax) + (py - ay) * (by - ay)
        return -tol <= t <= _sq(ax, ay, bx, by) + tol
    return True
