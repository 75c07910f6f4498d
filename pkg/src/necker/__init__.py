"""Exact geodesic dynamics on the Necker cube surface."""

from .flow import Direction, GeodesicState, OutcomeKind, SingularHit, TraceOutcome, trace, trace_direction
from .surface import FAVORITE_SQUARE, NeckerIsometry, SquareId

__all__ = [
    "Direction",
    "FAVORITE_SQUARE",
    "GeodesicState",
    "NeckerIsometry",
    "OutcomeKind",
    "SingularHit",
    "SquareId",
    "TraceOutcome",
    "trace",
    "trace_direction",
]

__version__ = "0.1.0"
