"""Pass feasibility scoring from player positions and body orientations."""

from .feasibility import (
    DEFAULT_PARAMS,
    FeasibilityBreakdown,
    FeasibilityError,
    ModelParams,
    PlayerState,
    Scenario,
    ScenarioEvaluation,
    evaluate_scenario,
    normalize_mode,
)
from .geometry import FieldSpec, GeometryError, Point2

__all__ = [
    "DEFAULT_PARAMS",
    "FeasibilityBreakdown",
    "FeasibilityError",
    "FieldSpec",
    "GeometryError",
    "ModelParams",
    "PlayerState",
    "Point2",
    "Scenario",
    "ScenarioEvaluation",
    "evaluate_scenario",
    "normalize_mode",
]
