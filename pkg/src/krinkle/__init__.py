"""Construction, validation and rendering of (m, k, n)-Modulo Krinkle tilings."""

from .assembly import (
    CoverageWarning,
    PlacedTile,
    Tiling,
    Wedge,
    advance_front,
    build_tiling,
    build_wedge,
    rows_for_radius,
    tiles_in_window,
    wedge_start_position,
)
from .geometry import EPS, LatticePoint, RealPoint, RigidMotion, apply_motion, project, trace_path, unit_vector
from .prototile import ConstructionError, Prototile, build_prototile, interior_direction_check, prototile_area
from .sequences import (
    DirectionSequence,
    ParameterError,
    Params,
    alignment_index,
    lower_sequence,
    modular_progression,
    satisfies_condition_c,
    shifted_progression,
    upper_sequence,
)
from .validator import ValidationReport, validate

__version__ = "0.1.0"

__all__ = [
    "CoverageWarning", "PlacedTile", "Tiling", "Wedge", "advance_front", "build_tiling", "build_wedge",
    "rows_for_radius", "tiles_in_window", "wedge_start_position",
    "EPS", "LatticePoint", "RealPoint", "RigidMotion", "apply_motion", "project", "trace_path", "unit_vector",
    "ConstructionError", "Prototile", "build_prototile", "interior_direction_check", "prototile_area",
    "DirectionSequence", "ParameterError", "Params", "alignment_index", "lower_sequence", "modular_progression",
    "satisfies_condition_c", "shifted_progression", "upper_sequence",
    "ValidationReport", "validate",
]
