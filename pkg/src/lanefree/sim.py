"""Closed-loop scenario engine on a straight one-way corridor.

Each control step runs perception, reference planning, PD feedback and the
sampled predictive optimizer for the ego, then advances the ego and all
neighbours by one sampling interval. Neighbours ignore the ego.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .feedback import FeedbackController, Gains
from .geometry import Polygon, min_boundary_distance, polygons_intersect, rect_footprint
from .optimizer import (
    CostWeights,
    PredictedNeighbor,
    SamplingConfig,
    Selection,
    predict_neighbors,
    select_control,
)
from .perception import Edges, RoadGeometry, ZoneConfig, classify, detect_edges
from .planner import PlannerConfig, reference_lane, reference_velocity
from .rng import SplitMix64
from .vehicle import ControlInput, VehicleParams, VehicleState, clamp_input, step

MAX_SPAWN_REJECTIONS = 10_000


class SpawnError(RuntimeError):
    """The corridor is too crowded to place every neighbour without overlap."""


@dataclass(frozen=True)
class ScenarioConfig:
    seed: int = 0
    road_width: float = 10.0
    road_length: float = 200.0
    n_neighbors: int = 10
    neighbor_speed_nominal: float = 8.33
    neighbor_speed_jitter: float = 0.5
    neighbor_lateral_jitter: float = 0.5
    neighbor_heading_jitter: float = 0.02
    neighbor_accel_jitter: float = 1.0
    spawn_ahead: float = 40.0
    spawn_clearance: float = 0.5
    duration: float = 10.0
    lat_accel_tolerance: float = 0.5
    ego_start: Optional[VehicleState] = None
    vehicle: VehicleParams = field(default_factory=VehicleParams)
    zones: ZoneConfig = field(default_factory=ZoneConfig)
    planner: PlannerConfig = field(default_factory=PlannerConfig)
    gains: Gains = field(default_factory=Gains)
    weights: CostWeights = field(default_factory=CostWeights)
    sampling: SamplingConfig = field(default_factory=SamplingConfig)

    def __post_init__(self):
        if not self.road_width > 0:
            raise ValueError("road_width must be positive")
        if not self.road_length > 0:
            raise ValueError("road_length must be positive")
        if self.n_neighbors < 0:
            raise ValueError("n_neighbors must be non-negative")
        if not self.duration > 0:
            raise ValueError("duration must be positive")
        if self.neighbor_speed_jitter < 0 or self.neighbor_lateral_jitter < 0 or self.neighbor_heading_jitter < 0:
            raise ValueError("neighbor jitter magnitudes must be non-negative")

    @property
    def road(self) -> RoadGeometry:
        return RoadGeometry(0.0, self.road_width, self.road_length)

    @property
    def start(self) -> VehicleState:
        if self.ego_start is not None:
            return self.ego_start
        return VehicleState(self.vehicle.body_length + 1.0, 0.5 * self.road_width, 0.0, 0.0)

    @property
    def n_steps(self) -> int:
        return int(round(self.duration / self.sampling.dt))


@dataclass(frozen=True)
class StepRecord:
    """One control step. Pose fields are at ``t``; ``collision`` and
    ``clearance`` are audited after the step's command has been applied."""

    step: int
    t: float
    x: float
    y: float
    phi: float
    v: float
    v_ref: float
    y_ref: float
    delta_fb: float
    a_fb: float
    delta: float
    a: float
    cost: float
    feasible: bool
    n_front: int
    n_left: int
    n_right: int
    collision: bool
    clearance: float
    lat_accel: float


RECORD_FIELDS = tuple(f.name for f in fields(StepRecord))


@dataclass
class SimLog:
    config: ScenarioConfig
    records: List[StepRecord]
    summary: Dict[str, object]


@dataclass(frozen=True)
class OptimizerCall:
    """Everything the optimizer saw on one step, for offline re-evaluation."""

    step: int
    state: VehicleState
    predictions: Tuple[PredictedNeighbor, ...]
    edges: Edges
    fb: Tuple[float, float]
    prev: Tuple[float, float]
    selection: Selection


@dataclass
class Neighbor:
    id: int
    state: VehicleState
    rng: SplitMix64

    def footprint(self, p: VehicleParams) -> Polygon:
        return rect_footprint((self.state.x, self.state.y), self.state.phi, p.body_length, p.body_width)


def _heading_limit(v: float, cfg: ScenarioConfig) -> float:
    if v <= cfg.neighbor_lateral_jitter:
        return 0.5 * math.pi
    return math.asin(cfg.neighbor_lateral_jitter / v)


def _lateral_extent(phi: float, p: VehicleParams) -> float:
    return 0.5 * (p.body_length * abs(math.sin(phi)) + p.body_width * abs(math.cos(phi)))


def spawn(cfg: ScenarioConfig, rng: Optional[SplitMix64] = None) -> List[Neighbor]:
    """Rejection-sample non-overlapping neighbours ahead of the ego across the full width."""
    if rng is None:
        rng = SplitMix64(cfg.seed)
    p = cfg.vehicle
    ego = cfg.start
    ego_poly = rect_footprint((ego.x, ego.y), ego.phi, p.body_length, p.body_width)
    placed: List[Tuple[VehicleState, Polygon]] = []
    out = []
    # centres no further back than the ego's, so nothing starts on its tail
    x_lo = ego.x
    x_hi = ego.x + cfg.spawn_ahead
    nominal = cfg.neighbor_speed_nominal
    for i in range(cfg.n_neighbors):
        for _ in range(MAX_SPAWN_REJECTIONS):
            v = max(0.0, rng.uniform(nominal - cfg.neighbor_speed_jitter, nominal + cfg.neighbor_speed_jitter))
            lim = min(_heading_limit(v, cfg), 0.25 * math.pi)
            phi = rng.uniform(-lim, lim) if lim > 0 else 0.0
            ext = _lateral_extent(phi, p)
            x = rng.uniform(x_lo, x_hi)
            y = rng.uniform(ext, cfg.road_width - ext)
            poly = rect_footprint((x, y), phi, p.body_length, p.body_width)
            if min_boundary_distance(poly, ego_poly) <= cfg.spawn_clearance:
                continue
            if any(min_boundary_distance(poly, q) <= cfg.spawn_clearance for _, q in placed):
                continue
            st = VehicleState(x, y, phi, v)
            placed.append((st, poly))
            out.append(Neighbor(i, st, rng.spawn(i)))
            break
        else:
            raise SpawnError(f"could not place neighbour {i} after {MAX_SPAWN_REJECTIONS} attempts")
    return out


def neighbor_step(n: VehicleState, cfg: ScenarioConfig, rng: SplitMix64) -> VehicleState:
    """Jittered constant-heading motion kept inside the corridor."""
    dt = cfg.sampling.dt
    p = cfg.vehicle
    nominal = cfg.neighbor_speed_nominal
    jit = cfg.neighbor_speed_jitter
    v = n.v + rng.uniform(-1.0, 1.0) * cfg.neighbor_accel_jitter * dt
    v = max(0.0, min(max(v, nominal - jit), nominal + jit))
    lim = _heading_limit(v, cfg)
    phi = n.phi + rng.uniform(-1.0, 1.0) * cfg.neighbor_heading_jitter
    phi = min(max(phi, -lim), lim)
    x = n.x + v * math.cos(phi) * dt
    y = n.y + v * math.sin(phi) * dt
    ext = _lateral_extent(phi, p)
    if y < ext:
        y, phi = ext, abs(phi)
    elif y > cfg.road_width - ext:
        y, phi = cfg.road_width - ext, -abs(phi)
    return VehicleState(x, y, phi, v)


def _finite_or_none(x: float):
    return x if math.isfinite(x) else None


def summarize(records: Sequence[StepRecord], cfg: ScenarioConfig) -> Dict[str, object]:
    collisions = [r for r in records if r.collision]
    lat_flag = cfg.vehicle.a_max_lat + cfg.lat_accel_tolerance
    return {
        "steps": len(records),
        "collision_steps": len(collisions),
        "collision_free": not collisions,
        "first_collision_t": collisions[0].t if collisions else None,
        "min_clearance": _finite_or_none(min((r.clearance for r in records), default=math.inf)),
        "v_min": min(r.v for r in records),
        "v_max": max(r.v for r in records),
        "a_min": min(r.a for r in records),
        "a_max": max(r.a for r in records),
        "fallback_steps": sum(1 for r in records if not r.feasible),
        "lat_accel_max": max(r.lat_accel for r in records),
        "lat_accel_flagged_steps": sum(1 for r in records if r.lat_accel > lat_flag),
    }


def run(
    cfg: ScenarioConfig,
    on_step: Optional[Callable[[OptimizerCall], None]] = None,
    neighbors: Optional[List[Neighbor]] = None,
) -> SimLog:
    """Simulate ``cfg.duration`` seconds. Collisions are logged, never halting.

    ``neighbors`` overrides random spawning (scripted scenarios).
    """
    p = cfg.vehicle
    dt = cfg.sampling.dt
    road = cfg.road
    if neighbors is None:
        neighbors = spawn(cfg)
    ego = cfg.start
    controller = FeedbackController(cfg.gains)
    prev = (0.0, 0.0)
    records = []
    for k in range(cfg.n_steps):
        t = k * dt
        scene = [(n.id, n.state, n.footprint(p)) for n in neighbors]
        zones, obs = classify(ego, scene, cfg.zones)
        edges = detect_edges(ego, road, cfg.planner.d_o)
        v_ref = reference_velocity(zones, obs, prev[0], cfg.planner, p)
        y_ref = reference_lane(zones, obs, edges, cfg.planner)
        fb = controller(ego, v_ref, y_ref, dt)
        side_obs = [o for o in obs if o.id in zones.sides]
        predictions = predict_neighbors(side_obs, cfg.sampling, p.body_length, p.body_width)
        sel = select_control(ego, side_obs, edges, fb, prev, cfg.weights, cfg.sampling, p, predictions)
        u = clamp_input(ControlInput(sel.delta, sel.a), p)
        if on_step is not None:
            on_step(OptimizerCall(k, ego, tuple(predictions), edges, fb, prev, sel))

        nxt = step(ego, u, dt, p)
        for n in neighbors:
            n.state = neighbor_step(n.state, cfg, n.rng)
        ego_poly = rect_footprint((nxt.x, nxt.y), nxt.phi, p.body_length, p.body_width)
        hit = False
        clearance = math.inf
        for n in neighbors:
            q = n.footprint(p)
            if polygons_intersect(ego_poly, q):
                hit = True
            clearance = min(clearance, min_boundary_distance(ego_poly, q))

        records.append(
            StepRecord(
                step=k,
                t=round(t, 10),
                x=ego.x,
                y=ego.y,
                phi=ego.phi,
                v=ego.v,
                v_ref=v_ref,
                y_ref=y_ref,
                delta_fb=fb[0],
                a_fb=fb[1],
                delta=u.delta,
                a=u.a,
                cost=sel.cost,
                feasible=sel.feasible,
                n_front=len(zones.front),
                n_left=len(zones.left),
                n_right=len(zones.right),
                collision=hit,
                clearance=clearance,
                lat_accel=abs(ego.v * ego.v * math.tan(u.delta) / p.L),
            )
        )
        prev = (u.delta, u.a)
        ego = nxt
    return SimLog(cfg, records, summarize(records, cfg))
