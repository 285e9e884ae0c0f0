"""
Thurston's asymmetric metric on the Teichmüller space of the once-punctured torus.
"""

__version__ = "0.1.0"

from .cache import DistanceCache
from .exceptions import (
    GeometryError,
    MarkovViolation,
    NotInOut,
    NotSimpleCurve,
    ThurstonError,
)
from .farey import Marking, PivotSequence, Slope, marking_geodesic, pivots
from .hooks import LoggingHook, SearchHook
from .metric import DistResult, max_stretch_curve, thurston_dist
from .norm import flat_segment, thurston_norm, unit_sphere
from .search import SearchBudget
from .stretch_envelope import EnvelopeQuad, Sign, envelope, stretch_point
from .torus_model import FnCoords, TangentVector, TorusPoint, fn_coords, from_fn, length_of

__all__ = [
    "DistanceCache",
    "GeometryError",
    "MarkovViolation",
    "NotInOut",
    "NotSimpleCurve",
    "ThurstonError",
    "Marking",
    "PivotSequence",
    "Slope",
    "marking_geodesic",
    "pivots",
    "LoggingHook",
    "SearchHook",
    "DistResult",
    "max_stretch_curve",
    "thurston_dist",
    "flat_segment",
    "thurston_norm",
    "unit_sphere",
    "SearchBudget",
    "EnvelopeQuad",
    "Sign",
    "envelope",
    "stretch_point",
    "FnCoords",
    "TangentVector",
    "TorusPoint",
    "fn_coords",
    "from_fn",
    "length_of",
]
