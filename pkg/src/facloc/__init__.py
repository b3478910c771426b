"""Strategyproof facility location with predictions.

Mechanisms (MinMaxP, Minimum Bounding Box, coordinatewise medians and the
coordinatewise median with predictions), exact optimal-facility oracles and
an adversarial harness for checking their approximation guarantees.
"""

from .geometry import BoundingBox, EmptyInstanceError, FacilityError, Point, bounding_box, clamp_to_box, distance
from .mechanisms import (
    IncompatibleError,
    Instance,
    MechanismKind,
    MechanismSpec,
    cmp,
    coordinatewise_median,
    evaluate,
    generalized_coordinatewise_median,
    minimum_bounding_box,
    minmaxp_1d,
)
from .metrics import (
    DEGENERATE,
    EvaluationRecord,
    approximation_ratio,
    bound_cmp_consistency,
    bound_cmp_error,
    bound_cmp_robustness,
    bound_egalitarian_error,
    egalitarian_cost,
    prediction_error,
    utilitarian_cost,
)
from .oracles import Circle, Objective, geometric_median, median_1d, optimal_facility, smallest_enclosing_circle

__all__ = [name for name in dir() if not name.startswith("_")]
