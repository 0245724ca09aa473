"""Zone-based perception: frontal / left / right neighbour sets and road edges."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import FrozenSet, Iterable, List, NamedTuple, Tuple

from .geometry import Polygon, SectorRegion, polygon_intersects_sector
from .vehicle import VehicleState


@dataclass(frozen=True)
class ZoneConfig:
    d_F: float = 7.0
    d_S: float = 12.0
    frontal_half_angle: float = math.radians(10.0)

    def __post_init__(self):
        if not 0 < self.d_F < self.d_S:
            raise ValueError(f"zone ranges must satisfy 0 < d_F < d_S, got d_F={self.d_F}, d_S={self.d_S}")
        if not 0 < self.frontal_half_angle <= math.pi:
            raise ValueError("frontal_half_angle must lie in (0, pi]")


@dataclass(frozen=True)
class RoadGeometry:
    """Straight one-way corridor along +x, lateral extent ``y_right <= y <= y_left``."""

    y_right: float = 0.0
    y_left: float = 10.0
    length: float = 200.0

    def __post_init__(self):
        if not self.y_left > self.y_right:
            raise ValueError("road must have positive width")

    @property
    def width(self) -> float:
        return self.y_left - self.y_right

    @property
    def center(self) -> float:
        return 0.5 * (self.y_left + self.y_right)


@dataclass(frozen=True)
class NeighborObservation:
    id: int
    state: VehicleState
    footprint: Polygon
    d_i: float
    bearing: float
    delta_x: float


@dataclass(frozen=True)
class ZoneSets:
    front: FrozenSet[int] = field(default_factory=frozenset)
    left: FrozenSet[int] = field(default_factory=frozenset)
    right: FrozenSet[int] = field(default_factory=frozenset)

    @property
    def sides(self) -> FrozenSet[int]:
        return self.left | self.right


class Edges(NamedTuple):
    y_Le: float
    y_Re: float
    d_Le: float
    d_Re: float

    @property
    def violated(self) -> bool:
        return self.d_Le <= 0.0 or self.d_Re <= 0.0


def zone_regions(ego: VehicleState, cfg: ZoneConfig) -> Tuple[SectorRegion, SectorRegion, SectorRegion]:
    apex = (ego.x, ego.y)
    half = 0.5 * math.pi
    front = SectorRegion(apex, ego.phi, cfg.frontal_half_angle, cfg.d_F)
    left = SectorRegion(apex, ego.phi + half, half, cfg.d_S)
    right = SectorRegion(apex, ego.phi - half, half, cfg.d_S)
    return front, left, right


def classify(
    ego: VehicleState,
    neighbors: Iterable[Tuple[int, VehicleState, Polygon]],
    cfg: ZoneConfig,
) -> Tuple[ZoneSets, List[NeighborObservation]]:
    """Assign neighbours to zones by footprint overlap with the ego-relative regions.

    Observations are returned for every neighbour that lands in at least one
    zone, ordered by id. A neighbour straddling the heading ray is a member of
    both side sets.
    """
    z_front, z_left, z_right = zone_regions(ego, cfg)
    c = math.cos(ego.phi)
    s = math.sin(ego.phi)
    front, left, right = set(), set(), set()
    obs = []
    for nid, st, poly in sorted(neighbors, key=lambda t: t[0]):
        dx = st.x - ego.x
        dy = st.y - ego.y
        d = math.hypot(dx, dy)
        # cheap reject: nothing of the footprint can reach the side range
        reach = max(math.hypot(px - st.x, py - st.y) for px, py in poly.vertices)
        if d - reach > cfg.d_S:
            continue
        in_f = polygon_intersects_sector(poly, z_front)
        in_l = polygon_intersects_sector(poly, z_left)
        in_r = polygon_intersects_sector(poly, z_right)
        if not (in_f or in_l or in_r):
            continue
        if in_f:
            front.add(nid)
        if in_l:
            left.add(nid)
        if in_r:
            right.add(nid)
        bearing = math.atan2(-s * dx + c * dy, c * dx + s * dy)
        obs.append(NeighborObservation(nid, st, poly, d, bearing, st.x - ego.x))
    return ZoneSets(frozenset(front), frozenset(left), frozenset(right)), obs


def detect_edges(ego: VehicleState, road: RoadGeometry, margin: float) -> Edges:
    """Margin-adjusted road edges and the ego's signed lateral distances to them.

    Distances at or below zero signal that the ego has left the adjusted corridor.
    """
    y_Le = road.y_left - margin
    y_Re = road.y_right + margin
    return Edges(y_Le, y_Re, y_Le - ego.y, ego.y - y_Re)
