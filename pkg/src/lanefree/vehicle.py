"""Kinematic bicycle model with forward-Euler discretisation and actuator bounds."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List

from .geometry import wrap_angle


@dataclass(frozen=True)
class VehicleState:
    x: float
    y: float
    phi: float
    v: float


@dataclass(frozen=True)
class ControlInput:
    delta: float
    a: float


@dataclass(frozen=True)
class VehicleParams:
    """Vehicle geometry and actuator limits. Defaults reproduce the simulation table."""

    L: float = 2.5
    delta_min: float = -math.pi / 12
    delta_max: float = math.pi / 12
    a_min: float = -3.0
    a_max: float = 3.0
    a_max_lat: float = 1.0
    body_length: float = 4.2
    body_width: float = 1.8

    def __post_init__(self):
        if not self.L > 0:
            raise ValueError(f"wheelbase L must be positive, got {self.L}")
        if not self.delta_min < 0 < self.delta_max:
            raise ValueError("steering bounds must satisfy delta_min < 0 < delta_max")
        if not self.a_min < 0 < self.a_max:
            raise ValueError("acceleration bounds must satisfy a_min < 0 < a_max")
        if not self.a_max_lat > 0:
            raise ValueError("a_max_lat must be positive")
        if not (self.body_length > 0 and self.body_width > 0):
            raise ValueError("body dimensions must be positive")


def clamp_input(u: ControlInput, p: VehicleParams) -> ControlInput:
    return ControlInput(
        min(max(u.delta, p.delta_min), p.delta_max),
        min(max(u.a, p.a_min), p.a_max),
    )


def step(s: VehicleState, u: ControlInput, dt: float, p: VehicleParams) -> VehicleState:
    """Advance one Euler step. Speed is clipped at zero, heading wrapped to (-pi, pi]."""
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt}")
    return VehicleState(
        s.x + s.v * math.cos(s.phi) * dt,
        s.y + s.v * math.sin(s.phi) * dt,
        wrap_angle(s.phi + s.v / p.L * math.tan(u.delta) * dt),
        max(0.0, s.v + u.a * dt),
    )


def rollout(s0: VehicleState, u: ControlInput, steps: int, dt: float, p: VehicleParams) -> List[VehicleState]:
    """Hold ``u`` constant for ``steps`` steps; returns ``steps + 1`` states including ``s0``."""
    states = [s0]
    s = s0
    for _ in range(steps):
        s = step(s, u, dt, p)
        states.append(s)
    return states
