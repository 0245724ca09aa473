"""Reference velocity and virtual reference lane from zone observations."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, Iterable, Sequence

from .perception import Edges, NeighborObservation, ZoneSets
from .vehicle import VehicleParams

DIST_FLOOR = 1e-6


@dataclass(frozen=True)
class PlannerConfig:
    """Reference-planning tuning. None of these values come from the simulation table."""

    v_N: float = 8.33
    d_safe: float = 2.0
    d_o: float = 1.25
    eps_smin: float = -0.5
    eps_curv: float = 1e-3

    def __post_init__(self):
        if not self.v_N > 0:
            raise ValueError("v_N must be positive")
        if not self.d_safe >= 0:
            raise ValueError("d_safe must be non-negative")
        if not self.d_o > 0:
            raise ValueError("d_o must be positive")
        if not self.eps_smin < 0:
            raise ValueError("eps_smin must be negative")
        if not self.eps_curv > 0:
            raise ValueError("eps_curv must be positive")


@dataclass(frozen=True)
class Reference:
    v_ref: float
    y_ref: float


def smooth_min(values: Sequence[float], eps: float) -> float:
    """Log-sum-exp soft minimum ``eps * log(sum(exp(x / eps)))`` for ``eps < 0``.

    Evaluated around the exact minimum, so every exponent is non-positive and
    the result is bracketed by ``[min + eps*ln(N), min]``.
    """
    if not eps < 0:
        raise ValueError(f"smooth_min needs eps < 0, got {eps}")
    xs = list(values)
    if not xs:
        raise ValueError("smooth_min of an empty sequence")
    k = min(range(len(xs)), key=xs.__getitem__)
    m = xs[k]
    rest = math.fsum(math.exp((x - m) / eps) for i, x in enumerate(xs) if i != k)
    return m + eps * math.log1p(rest)


def weighted_headway(front_obs: Iterable[NeighborObservation]) -> float:
    """Inverse-distance weighted mean of the longitudinal gaps."""
    num = 0.0
    den = 0.0
    for o in front_obs:
        w = 1.0 / max(o.d_i, DIST_FLOOR)
        num += w * o.delta_x
        den += w
    if den == 0.0:
        raise ValueError("weighted_headway needs at least one frontal observation")
    return num / den


def braking_velocity(dx_avg: float, cfg: PlannerConfig, p: VehicleParams) -> float:
    return math.sqrt(2.0 * abs(p.a_min) * max(0.0, dx_avg - cfg.d_safe))


def curvature_velocity(delta: float, cfg: PlannerConfig, p: VehicleParams) -> float:
    return math.sqrt(p.a_max_lat * p.L / math.tan(abs(delta) + cfg.eps_curv))


def reference_velocity(
    zones: ZoneSets,
    obs: Sequence[NeighborObservation],
    prev_delta: float,
    cfg: PlannerConfig,
    p: VehicleParams,
) -> float:
    """Soft minimum of cruise, curvature and (when something is ahead) braking speeds.

    ``prev_delta`` is the steering command applied on the previous step.
    """
    candidates = [cfg.v_N, curvature_velocity(prev_delta, cfg, p)]
    if zones.front:
        front = [o for o in obs if o.id in zones.front]
        candidates.append(braking_velocity(weighted_headway(front), cfg, p))
    return max(0.0, smooth_min(candidates, cfg.eps_smin))


def reference_lane(
    zones: ZoneSets,
    obs: Sequence[NeighborObservation],
    edges: Edges,
    cfg: PlannerConfig,
) -> float:
    """Midpoint of the left and right inverse-distance weighted boundaries."""
    by_id: Dict[int, NeighborObservation] = {o.id: o for o in obs}

    w_e = 1.0 / max(edges.d_Le, DIST_FLOOR)
    num, den = w_e * edges.y_Le, w_e
    for i in sorted(zones.left):
        w = 1.0 / max(by_id[i].d_i, DIST_FLOOR)
        num += w * (by_id[i].state.y - cfg.d_o)
        den += w
    y_left = num / den

    w_e = 1.0 / max(edges.d_Re, DIST_FLOOR)
    num, den = w_e * edges.y_Re, w_e
    for i in sorted(zones.right):
        w = 1.0 / max(by_id[i].d_i, DIST_FLOOR)
        num += w * (by_id[i].state.y + cfg.d_o)
        den += w
    y_right = num / den

    return 0.5 * (y_left + y_right)
