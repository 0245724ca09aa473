"""Static SVG figures from a simulation log.

Four figures per run: ego trajectory with time markers, longitudinal
velocity, longitudinal acceleration and heading angle. Output is
byte-reproducible for a given matplotlib version (fixed hash salt, no
timestamp, text kept as SVG text).
"""

from __future__ import annotations

import math
import os
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

STYLE = {
    "figure.figsize": (6.4, 3.2),
    "font.family": "DejaVu Sans",
    "font.size": 9,
    "axes.labelsize": 9,
    "axes.titlesize": 10,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "grid.linewidth": 0.6,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "lines.linewidth": 1.4,
    "legend.fontsize": 8,
    "legend.frameon": False,
    "svg.fonttype": "none",
    "svg.hashsalt": "lanefree",
    "path.simplify": False,
}
METADATA = {"Date": None, "Creator": "lanefree"}

FIGURES = ("trajectory", "velocity", "acceleration", "heading")
TITLES = {
    "trajectory": "Trajectory of the ego-vehicle",
    "velocity": "Longitudinal velocity profile",
    "acceleration": "Longitudinal acceleration profile",
    "heading": "Heading angle profile",
}


def _col(records: Sequence[Mapping[str, Any]], key: str) -> List[float]:
    return [float(r[key]) for r in records]


def _markers(t: Sequence[float], every: float) -> List[int]:
    idx = []
    nxt = 0.0
    for i, ti in enumerate(t):
        if ti >= nxt - 1e-9:
            idx.append(i)
            nxt += every
    return idx


def _trajectory(ax, records, road: Optional[Tuple[float, float]], marker_every: float):
    x = _col(records, "x")
    y = _col(records, "y")
    t = _col(records, "t")
    if road is not None:
        for edge in road:
            ax.axhline(edge, color="0.3", linestyle="--", linewidth=0.9)
    ax.plot(x, y, color="tab:blue", label="ego")
    for i in _markers(t, marker_every):
        ax.plot([x[i]], [y[i]], "o", color="tab:red", markersize=3.5)
        ax.annotate(f"{t[i]:g} s", (x[i], y[i]), textcoords="offset points", xytext=(0, 6), ha="center", fontsize=7)
    ax.set_xlabel("x [m]")
    ax.set_ylabel("y [m]")


def _velocity(ax, records):
    t = _col(records, "t")
    ax.plot(t, _col(records, "v"), color="tab:blue", label="v")
    ax.plot(t, _col(records, "v_ref"), color="tab:orange", linestyle="--", label="v_ref")
    ax.set_xlabel("t [s]")
    ax.set_ylabel("v [m/s]")
    ax.legend(loc="lower right")


def _acceleration(ax, records):
    t = _col(records, "t")
    ax.step(t, _col(records, "a"), where="post", color="tab:blue")
    ax.set_xlabel("t [s]")
    ax.set_ylabel("a [m/s²]")


def _heading(ax, records):
    t = _col(records, "t")
    ax.plot(t, [math.degrees(p) for p in _col(records, "phi")], color="tab:blue")
    ax.set_xlabel("t [s]")
    ax.set_ylabel("φ [deg]")


def render(
    records: Sequence[Mapping[str, Any]],
    out_dir,
    road: Optional[Tuple[float, float]] = None,
    marker_every: float = 2.0,
    prefix: str = "",
) -> Dict[str, str]:
    """Write the four SVGs into ``out_dir``; returns ``{name: path}``."""
    if not records:
        raise ValueError("cannot plot an empty log")
    os.makedirs(out_dir, exist_ok=True)
    paths = {}
    with plt.rc_context(STYLE):
        for name in FIGURES:
            fig, ax = plt.subplots()
            if name == "trajectory":
                _trajectory(ax, records, road, marker_every)
            elif name == "velocity":
                _velocity(ax, records)
            elif name == "acceleration":
                _acceleration(ax, records)
            else:
                _heading(ax, records)
            ax.set_title(TITLES[name])
            fig.tight_layout()
            path = os.path.join(out_dir, f"{prefix}{name}.svg")
            tmp = path + ".tmp"
            fig.savefig(tmp, format="svg", metadata=METADATA)
            plt.close(fig)
            os.replace(tmp, path)
            paths[name] = path
    return paths
