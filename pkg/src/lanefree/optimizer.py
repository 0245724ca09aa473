"""Sampled-trajectory predictive layer.

Neighbours are extrapolated at constant velocity and heading, every pair on a
uniform (steering, acceleration) grid is rolled out through the bicycle model
and scored with a five-term stage cost, and the cheapest finite trajectory
wins. If every candidate collides the clamped feedback command is used.

Two evaluation paths exist. :func:`score_trajectory` scores one candidate
with the scalar geometry kernel. :func:`evaluate_grid` scores the whole grid
at once with numpy; it mirrors the scalar arithmetic operation for operation
(including the order of every sum), so both paths agree to the last bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .geometry import (
    Polygon,
    min_boundary_distance,
    polygons_intersect,
    rect_corners,
    rect_footprint,
)
from .perception import Edges, NeighborObservation
from .vehicle import ControlInput, VehicleParams, VehicleState, clamp_input, rollout

TERMS = ("rd", "col", "clr", "fb", "jrk")


@dataclass(frozen=True)
class CostWeights:
    w_rd: float = 0.5
    w_clr: float = 1.0
    w_fb1: float = 10.0
    w_fb2: float = 1.0
    w_jrk1: float = 5.0
    w_jrk2: float = 0.5
    eps_cost: float = 0.1

    def __post_init__(self):
        for name in ("w_rd", "w_clr", "w_fb1", "w_fb2", "w_jrk1", "w_jrk2"):
            if not getattr(self, name) >= 0:
                raise ValueError(f"{name} must be non-negative")
        if not self.eps_cost > 0:
            raise ValueError("eps_cost must be positive")


@dataclass(frozen=True)
class SamplingConfig:
    """Control grid and horizon. ``H`` is in seconds; the step count is ``round(H / dt)``."""

    dt: float = 0.1
    H: float = 1.0
    n_delta: int = 9
    n_acc: int = 7

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        if self.n_delta < 2 or self.n_acc < 2:
            raise ValueError("grid needs at least 2 samples per axis")
        if self.horizon_steps < 1:
            raise ValueError("horizon must cover at least one step")

    @property
    def horizon_steps(self) -> int:
        return int(round(self.H / self.dt))


@dataclass(frozen=True)
class PredictedNeighbor:
    id: int
    states: Tuple[VehicleState, ...]
    footprints: Tuple[Polygon, ...]


@dataclass(frozen=True)
class ScoredTrajectory:
    delta_k: float
    a_k: float
    states: Tuple[VehicleState, ...]
    cost: float
    terms: Dict[str, float] = field(default_factory=dict)

    @property
    def feasible(self) -> bool:
        return math.isfinite(self.cost)


@dataclass(frozen=True)
class Selection:
    delta: float
    a: float
    cost: float
    feasible: bool
    index: int
    terms: Dict[str, float]

    @property
    def fallback(self) -> bool:
        return not self.feasible


def predict_neighbors(
    obs: Sequence[NeighborObservation],
    cfg: SamplingConfig,
    length: float,
    width: float,
) -> List[PredictedNeighbor]:
    """Constant-velocity, constant-heading extrapolation of each observation over the horizon."""
    out = []
    for o in obs:
        st = o.state
        vx = st.v * math.cos(st.phi) * cfg.dt
        vy = st.v * math.sin(st.phi) * cfg.dt
        x, y = st.x, st.y
        states = [st]
        polys = [rect_footprint((x, y), st.phi, length, width)]
        for _ in range(cfg.horizon_steps):
            x = x + vx
            y = y + vy
            states.append(VehicleState(x, y, st.phi, st.v))
            polys.append(rect_footprint((x, y), st.phi, length, width))
        out.append(PredictedNeighbor(o.id, tuple(states), tuple(polys)))
    return out


def grid_axis(lo: float, hi: float, n: int) -> List[float]:
    span = hi - lo
    return [hi if i == n - 1 else lo + span * i / (n - 1) for i in range(n)]


def sample_control_grid(p: VehicleParams, cfg: SamplingConfig) -> List[Tuple[float, float]]:
    """Steering-major Cartesian grid, both axes ascending with endpoints included."""
    deltas = grid_axis(p.delta_min, p.delta_max, cfg.n_delta)
    accs = grid_axis(p.a_min, p.a_max, cfg.n_acc)
    return [(d, a) for d in deltas for a in accs]


def _inv_sq(w: float, den: float) -> float:
    sq = den * den
    return w / sq if den > 0.0 and sq > 0.0 else math.inf


def road_edge_cost(y_h: float, y_Le: float, y_Re: float, w: CostWeights) -> float:
    """Inverse-square edge penalty; a non-positive denominator is an edge breach (+inf)."""
    return _inv_sq(w.w_rd, y_h - y_Re + w.eps_cost) + _inv_sq(w.w_rd, y_Le - y_h + w.eps_cost)


def collision_cost(ego_poly_h: Polygon, neighbor_polys_h: Sequence[Polygon]) -> float:
    for q in neighbor_polys_h:
        if polygons_intersect(ego_poly_h, q):
            return math.inf
    return 0.0


def clearance_cost(ego_poly_h: Polygon, neighbor_polys_h: Sequence[Polygon], w: CostWeights) -> float:
    total = 0.0
    for q in neighbor_polys_h:
        total = total + _inv_sq(w.w_clr, min_boundary_distance(ego_poly_h, q) + w.eps_cost)
    return total


def feedback_cost(delta_k: float, a_k: float, fb: Tuple[float, float], w: CostWeights) -> float:
    dd = delta_k - fb[0]
    da = a_k - fb[1]
    return w.w_fb1 * (dd * dd) + w.w_fb2 * (da * da)


def jerk_cost(delta_k: float, a_k: float, prev: Tuple[float, float], w: CostWeights) -> float:
    dd = delta_k - prev[0]
    da = a_k - prev[1]
    return w.w_jrk1 * (dd * dd) + w.w_jrk2 * (da * da)


def actuation_costs(
    delta_k: float, a_k: float, fb: Tuple[float, float], prev: Tuple[float, float], w: CostWeights
) -> float:
    """Per-step deviation-from-feedback plus control-change penalty (identical at every step)."""
    return feedback_cost(delta_k, a_k, fb, w) + jerk_cost(delta_k, a_k, prev, w)


def score_trajectory(
    s0: VehicleState,
    delta_k: float,
    a_k: float,
    predictions: Sequence[PredictedNeighbor],
    edges: Edges,
    fb: Tuple[float, float],
    prev: Tuple[float, float],
    w: CostWeights,
    cfg: SamplingConfig,
    p: VehicleParams,
) -> ScoredTrajectory:
    """Scalar reference scorer: stage costs summed over steps 1..H."""
    states = rollout(s0, ControlInput(delta_k, a_k), cfg.horizon_steps, cfg.dt, p)
    act = actuation_costs(delta_k, a_k, fb, prev, w)
    j_fb = feedback_cost(delta_k, a_k, fb, w)
    j_jrk = jerk_cost(delta_k, a_k, prev, w)
    total = 0.0
    terms = dict.fromkeys(TERMS, 0.0)
    for h in range(1, cfg.horizon_steps + 1):
        s = states[h]
        ego = rect_footprint((s.x, s.y), s.phi, p.body_length, p.body_width)
        others = [pn.footprints[h] for pn in predictions]
        rd = road_edge_cost(s.y, edges.y_Le, edges.y_Re, w)
        col = collision_cost(ego, others)
        clr = clearance_cost(ego, others, w)
        total = total + (rd + col + clr + act)
        terms["rd"] += rd
        terms["col"] += col
        terms["clr"] += clr
        terms["fb"] += j_fb
        terms["jrk"] += j_jrk
    return ScoredTrajectory(delta_k, a_k, tuple(states), total, terms)


# -- batched path ---------------------------------------------------------


def _batch_separated(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Separation on the edge normals of ``a``; trailing shape (..., n, 2)."""
    ax = a[..., 0]
    ay = a[..., 1]
    nx = -(np.roll(ay, -1, axis=-1) - ay)
    ny = np.roll(ax, -1, axis=-1) - ax
    pa = ax[..., None, :] * nx[..., :, None] + ay[..., None, :] * ny[..., :, None]
    pb = b[..., None, :, 0] * nx[..., :, None] + b[..., None, :, 1] * ny[..., :, None]
    sep = (pa.max(axis=-1) < pb.min(axis=-1)) | (pb.max(axis=-1) < pa.min(axis=-1))
    return sep.any(axis=-1)


def _batch_vertex_edge_min(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    px = a[..., :, None, 0]
    py = a[..., :, None, 1]
    sx = b[..., None, :, 0]
    sy = b[..., None, :, 1]
    dx = np.roll(b[..., 0], -1, axis=-1)[..., None, :] - sx
    dy = np.roll(b[..., 1], -1, axis=-1)[..., None, :] - sy
    t = ((px - sx) * dx + (py - sy) * dy) / (dx * dx + dy * dy)
    t = np.minimum(np.maximum(t, 0.0), 1.0)
    ex = px - (sx + t * dx)
    ey = py - (sy + t * dy)
    return np.sqrt(ex * ex + ey * ey).min(axis=(-2, -1))


def batch_intersect_and_distance(a: np.ndarray, b: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Broadcast SAT overlap flags and boundary distances for polygon stacks (..., n, 2)."""
    a, b = np.broadcast_arrays(a, b)
    hit = ~(_batch_separated(a, b) | _batch_separated(b, a))
    dist = np.minimum(_batch_vertex_edge_min(a, b), _batch_vertex_edge_min(b, a))
    return hit, np.where(hit, 0.0, dist)


def _batch_inv_sq(w: float, den: np.ndarray) -> np.ndarray:
    sq = den * den
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where((den > 0.0) & (sq > 0.0), w / sq, np.inf)


@dataclass
class GridEvaluation:
    pairs: List[Tuple[float, float]]
    costs: np.ndarray
    terms: Dict[str, np.ndarray]
    states: List[List[VehicleState]]


def evaluate_grid(
    s0: VehicleState,
    predictions: Sequence[PredictedNeighbor],
    edges: Edges,
    fb: Tuple[float, float],
    prev: Tuple[float, float],
    w: CostWeights,
    cfg: SamplingConfig,
    p: VehicleParams,
    pairs: Optional[List[Tuple[float, float]]] = None,
) -> GridEvaluation:
    if pairs is None:
        pairs = sample_control_grid(p, cfg)
    H = cfg.horizon_steps
    K = len(pairs)
    states = [rollout(s0, ControlInput(d, a), H, cfg.dt, p) for d, a in pairs]
    ego = np.array(
        [[rect_corners(s.x, s.y, s.phi, p.body_length, p.body_width) for s in traj[1:]] for traj in states]
    )  # (K, H, 4, 2)
    ys = np.array([[s.y for s in traj[1:]] for traj in states])  # (K, H)

    rd = _batch_inv_sq(w.w_rd, ys - edges.y_Re + w.eps_cost) + _batch_inv_sq(w.w_rd, edges.y_Le - ys + w.eps_cost)
    col = np.zeros((K, H))
    clr = np.zeros((K, H))
    for pn in predictions:
        others = np.array([pn.footprints[h].vertices for h in range(1, H + 1)])  # (H, 4, 2)
        hit, dist = batch_intersect_and_distance(ego, others[None])
        col = np.where(hit, np.inf, col)
        clr = clr + _batch_inv_sq(w.w_clr, dist + w.eps_cost)

    j_fb = np.array([feedback_cost(d, a, fb, w) for d, a in pairs])
    j_jrk = np.array([jerk_cost(d, a, prev, w) for d, a in pairs])
    act = np.array([actuation_costs(d, a, fb, prev, w) for d, a in pairs])
    stage = rd + col + clr + act[:, None]
    total = np.zeros(K)
    for h in range(H):
        total = total + stage[:, h]

    terms = {
        "rd": _seq_sum(rd),
        "col": _seq_sum(col),
        "clr": _seq_sum(clr),
        "fb": _seq_sum(np.repeat(j_fb[:, None], H, axis=1)),
        "jrk": _seq_sum(np.repeat(j_jrk[:, None], H, axis=1)),
    }
    return GridEvaluation(pairs, total, terms, states)


def _seq_sum(m: np.ndarray) -> np.ndarray:
    acc = np.zeros(m.shape[0])
    for h in range(m.shape[1]):
        acc = acc + m[:, h]
    return acc


def argmin_with_tiebreak(costs: Sequence[float], pairs: Sequence[Tuple[float, float]], fb: Tuple[float, float]) -> int:
    """Index of the minimum finite cost, or -1 if none is finite.

    Equal costs are resolved by the squared distance to the feedback command,
    then by grid order.
    """
    best = -1
    best_key = None
    for k, c in enumerate(costs):
        c = float(c)
        if not math.isfinite(c):
            continue
        dd = pairs[k][0] - fb[0]
        da = pairs[k][1] - fb[1]
        key = (c, dd * dd + da * da, k)
        if best_key is None or key < best_key:
            best, best_key = k, key
    return best


def select_control(
    s0: VehicleState,
    obs: Sequence[NeighborObservation],
    edges: Edges,
    fb: Tuple[float, float],
    prev: Tuple[float, float],
    w: CostWeights,
    cfg: SamplingConfig,
    p: VehicleParams,
    predictions: Optional[Sequence[PredictedNeighbor]] = None,
) -> Selection:
    """Pick the cheapest sampled command; fall back to the clamped feedback command.

    ``obs`` should hold the side-zone neighbours (left or right set) at the
    current time; they are frozen for the whole horizon.
    """
    if predictions is None:
        predictions = predict_neighbors(obs, cfg, p.body_length, p.body_width)
    ev = evaluate_grid(s0, predictions, edges, fb, prev, w, cfg, p)
    k = argmin_with_tiebreak(ev.costs, ev.pairs, fb)
    if k < 0:
        u = clamp_input(ControlInput(*fb), p)
        return Selection(u.delta, u.a, math.inf, False, -1, {t: math.inf for t in TERMS})
    d, a = ev.pairs[k]
    return Selection(d, a, float(ev.costs[k]), True, k, {t: float(ev.terms[t][k]) for t in TERMS})
