"""Feedback-predictive ego control for lane-less traffic, with a corridor simulator."""

from .feedback import FeedbackController, Gains, validate_gains
from .geometry import Polygon, SectorRegion, min_boundary_distance, polygon_intersects_sector, polygons_intersect, rect_footprint
from .optimizer import CostWeights, SamplingConfig, select_control
from .perception import RoadGeometry, ZoneConfig, classify, detect_edges
from .planner import PlannerConfig, reference_lane, reference_velocity, smooth_min
from .sim import ScenarioConfig, SimLog, run
from .vehicle import ControlInput, VehicleParams, VehicleState

__version__ = "0.1.0"
