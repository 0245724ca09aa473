"""Planar geometry kernel: rectangular footprints, convex polygon tests, sectors.

All functions are pure. Polygons are small (vehicle rectangles), so every
test below is brute force over edges and vertices.

The arithmetic in :func:`polygons_intersect` and :func:`min_boundary_distance`
is written in a fixed operation order; the batched rectangle routines in
:mod:`lanefree.optimizer` repeat exactly the same expressions so that both
paths produce bit-identical results.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Tuple

Point = Tuple[float, float]


class GeometryError(ValueError):
    """Raised for degenerate or otherwise invalid geometric input."""


def _signed_area(pts: Sequence[Point]) -> float:
    n = len(pts)
    acc = 0.0
    for i in range(n):
        x0, y0 = pts[i]
        x1, y1 = pts[(i + 1) % n]
        acc += x0 * y1 - x1 * y0
    return 0.5 * acc


@dataclass(frozen=True)
class Polygon:
    """Convex polygon with counter-clockwise vertices (metres)."""

    vertices: Tuple[Point, ...]

    def __post_init__(self):
        pts = tuple((float(x), float(y)) for x, y in self.vertices)
        object.__setattr__(self, "vertices", pts)
        n = len(pts)
        if n < 3:
            raise GeometryError(f"polygon needs at least 3 vertices, got {n}")
        if not _signed_area(pts) > 0.0:
            raise GeometryError("polygon must have positive area with CCW orientation")
        for i in range(n):
            ax, ay = pts[i]
            bx, by = pts[(i + 1) % n]
            cx, cy = pts[(i + 2) % n]
            if (bx - ax) * (cy - by) - (by - ay) * (cx - bx) < 0.0:
                raise GeometryError("polygon is not convex")

    @property
    def area(self) -> float:
        return _signed_area(self.vertices)

    @property
    def centroid(self) -> Point:
        pts = self.vertices
        n = len(pts)
        cx = cy = 0.0
        for i in range(n):
            x0, y0 = pts[i]
            x1, y1 = pts[(i + 1) % n]
            cross = x0 * y1 - x1 * y0
            cx += (x0 + x1) * cross
            cy += (y0 + y1) * cross
        a6 = 6.0 * self.area
        return cx / a6, cy / a6

    def contains(self, p: Point) -> bool:
        """Closed point membership."""
        px, py = p
        pts = self.vertices
        n = len(pts)
        for i in range(n):
            ax, ay = pts[i]
            bx, by = pts[(i + 1) % n]
            if (bx - ax) * (py - ay) - (by - ay) * (px - ax) < 0.0:
                return False
        return True


@dataclass(frozen=True)
class SectorRegion:
    """Closed circular sector ``{d <= radius, |bearing - axis| <= half_angle}``."""

    apex: Point
    axis_heading: float
    half_angle: float
    radius: float

    def __post_init__(self):
        if not 0.0 < self.half_angle <= math.pi:
            raise GeometryError(f"half_angle must lie in (0, pi], got {self.half_angle}")
        if not self.radius > 0.0:
            raise GeometryError(f"radius must be positive, got {self.radius}")

    def contains(self, p: Point) -> bool:
        dx = p[0] - self.apex[0]
        dy = p[1] - self.apex[1]
        d = math.hypot(dx, dy)
        if d > self.radius:
            return False
        if d == 0.0:
            return True
        return abs(wrap_angle(math.atan2(dy, dx) - self.axis_heading)) <= self.half_angle


def wrap_angle(a: float) -> float:
    """Map an angle to (-pi, pi]."""
    w = math.remainder(a, 2.0 * math.pi)
    if w == -math.pi:
        return math.pi
    return w


def rect_corners(cx: float, cy: float, heading: float, length: float, width: float) -> Tuple[Point, ...]:
    """Corners of an oriented rectangle, CCW starting front-left."""
    c = math.cos(heading)
    s = math.sin(heading)
    hl = 0.5 * length
    hw = 0.5 * width
    return (
        (cx + c * hl - s * hw, cy + s * hl + c * hw),
        (cx - c * hl - s * hw, cy - s * hl + c * hw),
        (cx - c * hl + s * hw, cy - s * hl - c * hw),
        (cx + c * hl + s * hw, cy + s * hl - c * hw),
    )


def rect_footprint(center: Point, heading: float, length: float, width: float) -> Polygon:
    """Oriented rectangle centred on ``center`` with its long axis along ``heading``."""
    if not (length > 0.0 and width > 0.0):
        raise GeometryError(f"rectangle dimensions must be positive, got {length} x {width}")
    return Polygon(rect_corners(center[0], center[1], heading, length, width))


def _separated(a: Sequence[Point], b: Sequence[Point]) -> bool:
    # edge normals of ``a`` as candidate separating axes
    n = len(a)
    for i in range(n):
        x0, y0 = a[i]
        x1, y1 = a[(i + 1) % n]
        nx = -(y1 - y0)
        ny = x1 - x0
        pa = [x * nx + y * ny for x, y in a]
        pb = [x * nx + y * ny for x, y in b]
        if max(pa) < min(pb) or max(pb) < min(pa):
            return True
    return False


def polygons_intersect(p: Polygon, q: Polygon) -> bool:
    """Separating-axis test on closed regions; touching boundaries count as overlap."""
    return not (_separated(p.vertices, q.vertices) or _separated(q.vertices, p.vertices))


def point_segment_distance(px: float, py: float, ax: float, ay: float, bx: float, by: float) -> float:
    dx = bx - ax
    dy = by - ay
    t = ((px - ax) * dx + (py - ay) * dy) / (dx * dx + dy * dy)
    t = min(max(t, 0.0), 1.0)
    ex = px - (ax + t * dx)
    ey = py - (ay + t * dy)
    return math.sqrt(ex * ex + ey * ey)


def _vertex_edge_min(a: Sequence[Point], b: Sequence[Point]) -> float:
    best = math.inf
    m = len(b)
    for px, py in a:
        for j in range(m):
            ax, ay = b[j]
            bx, by = b[(j + 1) % m]
            d = point_segment_distance(px, py, ax, ay, bx, by)
            if d < best:
                best = d
    return best


def min_boundary_distance(p: Polygon, q: Polygon) -> float:
    """Smallest distance between the two boundaries; 0 when the regions overlap.

    For disjoint convex polygons the closest boundary points always include a
    vertex of one polygon, so vertex-to-edge distances in both directions
    cover every segment pair.
    """
    if polygons_intersect(p, q):
        return 0.0
    return min(_vertex_edge_min(p.vertices, q.vertices), _vertex_edge_min(q.vertices, p.vertices))


def _segments_intersect(p1: Point, p2: Point, q1: Point, q2: Point) -> bool:
    def orient(a, b, c):
        return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])

    def on_segment(a, b, c):
        return min(a[0], b[0]) <= c[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= c[1] <= max(a[1], b[1])

    d1 = orient(q1, q2, p1)
    d2 = orient(q1, q2, p2)
    d3 = orient(p1, p2, q1)
    d4 = orient(p1, p2, q2)
    if ((d1 > 0 and d2 < 0) or (d1 < 0 and d2 > 0)) and ((d3 > 0 and d4 < 0) or (d3 < 0 and d4 > 0)):
        return True
    if d1 == 0 and on_segment(q1, q2, p1):
        return True
    if d2 == 0 and on_segment(q1, q2, p2):
        return True
    if d3 == 0 and on_segment(p1, p2, q1):
        return True
    if d4 == 0 and on_segment(p1, p2, q2):
        return True
    return False


def _segment_meets_arc(a: Point, b: Point, z: SectorRegion) -> bool:
    ox, oy = z.apex
    fx, fy = a[0] - ox, a[1] - oy
    dx, dy = b[0] - a[0], b[1] - a[1]
    qa = dx * dx + dy * dy
    qb = 2.0 * (fx * dx + fy * dy)
    qc = fx * fx + fy * fy - z.radius * z.radius
    disc = qb * qb - 4.0 * qa * qc
    if disc < 0.0:
        return False
    root = math.sqrt(disc)
    for t in ((-qb - root) / (2.0 * qa), (-qb + root) / (2.0 * qa)):
        if 0.0 <= t <= 1.0:
            bearing = math.atan2(fy + t * dy, fx + t * dx)
            if abs(wrap_angle(bearing - z.axis_heading)) <= z.half_angle:
                return True
    return False


def polygon_intersects_sector(p: Polygon, z: SectorRegion) -> bool:
    """Exact overlap test between a convex polygon and a closed circular sector.

    Either a polygon vertex lies in the sector, the apex lies in the polygon,
    or some polygon edge crosses one of the two bounding rays or the arc.
    """
    verts = p.vertices
    if any(z.contains(v) for v in verts):
        return True
    if p.contains(z.apex):
        return True
    ox, oy = z.apex
    rays = []
    for sign in (-1.0, 1.0):
        ang = z.axis_heading + sign * z.half_angle
        rays.append(((ox, oy), (ox + z.radius * math.cos(ang), oy + z.radius * math.sin(ang))))
    n = len(verts)
    for i in range(n):
        a = verts[i]
        b = verts[(i + 1) % n]
        for r0, r1 in rays:
            if _segments_intersect(a, b, r0, r1):
                return True
        if _segment_meets_arc(a, b, z):
            return True
    return False
