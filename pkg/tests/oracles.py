"""Independent brute-force oracles used by the test-suite.

Nothing here imports the geometry kernel; membership goes through
matplotlib's Path, distances through KD-tree queries on densely sampled
boundaries.
"""

from __future__ import annotations

import math

import numpy as np
from matplotlib.path import Path
from scipy.spatial import cKDTree


def shoelace(vertices):
    pts = np.asarray(vertices, dtype=float)
    x, y = pts[:, 0], pts[:, 1]
    xn, yn = np.roll(x, -1), np.roll(y, -1)
    cross = x * yn - xn * y
    area = 0.5 * cross.sum()
    cx = ((x + xn) * cross).sum() / (6 * area)
    cy = ((y + yn) * cross).sum() / (6 * area)
    return area, (cx, cy)


def random_convex(rng: np.random.Generator, center, r_lo=0.3, r_hi=1.5, n_lo=3, n_hi=8):
    """CCW convex polygon from sorted random angles on a random-radius circle."""
    n = int(rng.integers(n_lo, n_hi + 1))
    while True:
        ang = np.sort(rng.uniform(0, 2 * math.pi, n))
        if np.all(np.diff(np.r_[ang, ang[0] + 2 * math.pi]) < math.pi - 1e-3):
            break
    r = rng.uniform(r_lo, r_hi)
    return [(center[0] + r * math.cos(a), center[1] + r * math.sin(a)) for a in ang]


def sample_boundary(vertices, n: int) -> np.ndarray:
    pts = np.asarray(vertices, dtype=float)
    seg = np.roll(pts, -1, axis=0) - pts
    lengths = np.hypot(seg[:, 0], seg[:, 1])
    cum = np.r_[0.0, np.cumsum(lengths)]
    s = np.linspace(0.0, cum[-1], n, endpoint=False)
    idx = np.searchsorted(cum, s, side="right") - 1
    t = (s - cum[idx]) / lengths[idx]
    return pts[idx] + t[:, None] * seg[idx]


def dense_boundary_distance(p, q, n: int = 10_000) -> float:
    a = sample_boundary(p, n)
    b = sample_boundary(q, n)
    d, _ = cKDTree(b).query(a)
    return float(d.min())


def distance_to_edges(points: np.ndarray, vertices) -> np.ndarray:
    pts = np.asarray(vertices, dtype=float)
    a = pts[None, :, :]
    b = np.roll(pts, -1, axis=0)[None, :, :]
    p = points[:, None, :]
    ab = b - a
    t = np.clip(((p - a) * ab).sum(-1) / (ab * ab).sum(-1), 0, 1)
    c = a + t[..., None] * ab
    return np.hypot(*(p - c).transpose(2, 0, 1)).min(axis=1)


def inside_polygon(points: np.ndarray, vertices) -> np.ndarray:
    return Path(np.asarray(vertices)).contains_points(points, radius=0.0)


def _bbox(vertices):
    pts = np.asarray(vertices, dtype=float)
    return pts.min(axis=0), pts.max(axis=0)


def mc_polygons_overlap(p, q, rng: np.random.Generator, n: int = 10_000, band: float = 1e-6, escalate: int = 0):
    """Monte Carlo overlap verdict.

    Points are drawn inside the intersection of the two bounding boxes (the
    only place an overlap can live); a point within ``band`` of either
    boundary never counts. With ``escalate > 0`` a miss is retried with that
    many extra batches. Extra samples can only uncover genuine interior
    overlap, so escalation never hides a false positive of the code under test.
    """
    lo_p, hi_p = _bbox(p)
    lo_q, hi_q = _bbox(q)
    lo = np.maximum(lo_p, lo_q)
    hi = np.minimum(hi_p, hi_q)
    if np.any(lo > hi + band):
        return False
    hi = np.maximum(hi, lo)
    for _ in range(1 + escalate):
        pts = lo + rng.random((n, 2)) * (hi - lo)
        near = (distance_to_edges(pts, p) < band) | (distance_to_edges(pts, q) < band)
        if (inside_polygon(pts, p) & inside_polygon(pts, q) & ~near).any():
            return True
    return False


def in_sector(points: np.ndarray, apex, axis_heading, half_angle, radius) -> np.ndarray:
    rel = points - np.asarray(apex, dtype=float)
    d = np.hypot(rel[:, 0], rel[:, 1])
    ux, uy = math.cos(axis_heading), math.sin(axis_heading)
    with np.errstate(invalid="ignore", divide="ignore"):
        cosang = (rel[:, 0] * ux + rel[:, 1] * uy) / d
    ok_angle = np.where(d == 0, True, cosang >= math.cos(half_angle))
    return (d <= radius) & ok_angle


def sector_boundary_distance(points: np.ndarray, apex, axis_heading, half_angle, radius) -> np.ndarray:
    rel = points - np.asarray(apex, dtype=float)
    d = np.hypot(rel[:, 0], rel[:, 1])
    out = np.abs(d - radius)
    for sign in (-1, 1):
        ang = axis_heading + sign * half_angle
        end = (apex[0] + radius * math.cos(ang), apex[1] + radius * math.sin(ang))
        out = np.minimum(out, distance_to_edges(points, [apex, end]))
    return out


def mc_polygon_sector_overlap(poly, apex, axis_heading, half_angle, radius, rng, n=10_000, band=1e-6, escalate=0):
    """Monte Carlo polygon/sector overlap; same sampling and escalation rules as above."""
    lo_p, hi_p = _bbox(poly)
    lo_s = np.asarray(apex) - radius
    hi_s = np.asarray(apex) + radius
    lo = np.maximum(lo_p, lo_s)
    hi = np.minimum(hi_p, hi_s)
    if np.any(lo > hi + band):
        return False
    hi = np.maximum(hi, lo)
    for _ in range(1 + escalate):
        pts = lo + rng.random((n, 2)) * (hi - lo)
        near = (distance_to_edges(pts, poly) < band) | (
            sector_boundary_distance(pts, apex, axis_heading, half_angle, radius) < band
        )
        if (inside_polygon(pts, poly) & in_sector(pts, apex, axis_heading, half_angle, radius) & ~near).any():
            return True
    return False
