"""PD longitudinal/lateral feedback and the linearised gain-stability check."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Tuple

from .vehicle import VehicleParams, VehicleState

PHI_LIMIT = 0.5 * math.pi - 0.01


@dataclass(frozen=True)
class Gains:
    Kv_P: float = 1.0
    Kv_D: float = 0.1
    Kdy_P: float = 0.2
    Kdy_D: float = 0.05
    Kphi_P: float = 1.0
    Kphi_D: float = 0.1
    d_LA: float = 5.0

    def __post_init__(self):
        if not self.d_LA > 0:
            raise ValueError("lookahead distance d_LA must be positive")


@dataclass
class ControllerState:
    """Previous-step errors for backward-difference derivatives."""

    prev_e_v: float = 0.0
    prev_e_dy: float = 0.0
    prev_e_phi: float = 0.0
    long_initialized: bool = False
    lat_initialized: bool = False


def longitudinal_command(v: float, v_ref: float, st: ControllerState, g: Gains, dt: float) -> float:
    if not dt > 0:
        raise ValueError("dt must be positive")
    e_v = v_ref - v
    de = (e_v - st.prev_e_v) / dt if st.long_initialized else 0.0
    st.prev_e_v = e_v
    st.long_initialized = True
    return g.Kv_P * e_v + g.Kv_D * de


def lateral_errors(s: VehicleState, y_ref: float, g: Gains) -> Tuple[float, float]:
    """Lookahead lateral error and heading error ``(e_dy, e_phi)``."""
    phi = min(max(s.phi, -PHI_LIMIT), PHI_LIMIT)
    phi_ref = math.atan((y_ref - s.y) / (g.d_LA * math.cos(phi)))
    e_dy = y_ref - (s.y + g.d_LA * math.sin(s.phi))
    return e_dy, phi_ref - s.phi


def lateral_command(s: VehicleState, y_ref: float, st: ControllerState, g: Gains, dt: float) -> float:
    if not dt > 0:
        raise ValueError("dt must be positive")
    e_dy, e_phi = lateral_errors(s, y_ref, g)
    if st.lat_initialized:
        de_dy = (e_dy - st.prev_e_dy) / dt
        de_phi = (e_phi - st.prev_e_phi) / dt
    else:
        de_dy = de_phi = 0.0
    st.prev_e_dy = e_dy
    st.prev_e_phi = e_phi
    st.lat_initialized = True
    return g.Kdy_P * e_dy + g.Kdy_D * de_dy + g.Kphi_P * e_phi + g.Kphi_D * de_phi


class FeedbackController:
    """Stateful wrapper pairing a gain set with its derivative memory.

    One instance per vehicle; not safe to share across threads.
    """

    def __init__(self, gains: Gains):
        self.gains = gains
        self.state = ControllerState()

    def reset(self):
        self.state = ControllerState()

    def __call__(self, s: VehicleState, v_ref: float, y_ref: float, dt: float) -> Tuple[float, float]:
        """Return the raw (unclamped) ``(delta_fb, a_fb)``."""
        a_fb = longitudinal_command(s.v, v_ref, self.state, self.gains, dt)
        delta_fb = lateral_command(s, y_ref, self.state, self.gains, dt)
        return delta_fb, a_fb


@dataclass(frozen=True)
class GainReport:
    v_star: float
    k1: float
    k2: float
    eig_real: Tuple[float, float]
    lateral_stable: bool
    longitudinal_stable: bool

    @property
    def stable(self) -> bool:
        return self.lateral_stable and self.longitudinal_stable


def lateral_coefficients(g: Gains, v_star: float, L: float) -> Tuple[float, float]:
    """Feedback coefficients ``(k1, k2)`` of the linearised lateral loop."""
    den = 1.0 + v_star / L * (g.Kdy_D * g.d_LA + g.Kphi_D)
    k1 = -(g.Kdy_P + g.Kphi_P / g.d_LA) / den
    k2 = -(g.Kdy_P * g.d_LA + g.Kphi_P + g.Kdy_D * v_star + g.Kphi_D * v_star / g.d_LA) / den
    return k1, k2


def validate_gains(g: Gains, v_star: float, p: VehicleParams) -> GainReport:
    """Local stability of the closed loop linearised about straight driving at ``v_star``.

    The lateral system matrix is ``[[0, v*], [v* k1 / L, v* k2 / L]]``; its
    eigenvalues come from the closed-form 2x2 characteristic polynomial.
    """
    if not v_star > 0:
        raise ValueError(f"v_star must be positive, got {v_star}")
    k1, k2 = lateral_coefficients(g, v_star, p.L)
    # det(sI - A) = s^2 - tr s + det
    tr = v_star * k2 / p.L
    det = -v_star * (v_star * k1 / p.L)
    root = cmath.sqrt(tr * tr - 4.0 * det)
    lam1 = 0.5 * (tr + root)
    lam2 = 0.5 * (tr - root)
    re = (lam1.real, lam2.real)
    return GainReport(
        v_star=v_star,
        k1=k1,
        k2=k2,
        eig_real=re,
        lateral_stable=re[0] < 0 and re[1] < 0,
        longitudinal_stable=g.Kv_P > 0 and g.Kv_D > -1,
    )
