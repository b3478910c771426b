"""Social costs, approximation ratios, prediction error and the known bounds."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import FacilityError, Point, as_array, distance
from .mechanisms import Instance, MechanismKind, MechanismSpec, check_confidence, evaluate
from .oracles import DEFAULT_TOL, Objective, optimal_facility

# Ratio / eta value reported when the optimal cost is zero but the quantity is not.
DEGENERATE = math.inf

SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class EvaluationRecord:
    mechanism_output: Point
    optimal_point: Point
    optimal_cost: float
    mechanism_cost: float
    ratio: float
    prediction_error: float
    objective: Objective

    @property
    def degenerate(self) -> bool:
        return self.optimal_cost == 0.0


def _distances(facility: Point, points) -> np.ndarray:
    arr = as_array(points)
    return np.hypot(arr[:, 0] - facility.x, arr[:, 1] - facility.y)


def egalitarian_cost(facility: Point, points) -> float:
    return float(_distances(facility, points).max())


def utilitarian_cost(facility: Point, points) -> float:
    return float(_distances(facility, points).mean())


def social_cost(facility: Point, points, objective: Objective | str) -> float:
    if Objective.parse(objective) is Objective.EGALITARIAN:
        return egalitarian_cost(facility, points)
    return utilitarian_cost(facility, points)


def _safe_ratio(num: float, opt: float) -> float:
    if opt > 0:
        return num / opt
    return 0.0 if num == 0 else DEGENERATE


def prediction_error(instance: Instance, objective: Objective | str,
                     oracle_tol: float = DEFAULT_TOL) -> float:
    o, opt = optimal_facility(instance.array(), objective, oracle_tol)
    return _safe_ratio(distance(instance.prediction, o), opt)


def approximation_ratio(spec: MechanismSpec, instance: Instance,
                        objective: Objective | str,
                        oracle_tol: float = DEFAULT_TOL) -> EvaluationRecord:
    objective = Objective.parse(objective)
    arr = instance.array()
    f = evaluate(spec, instance)
    o, opt = optimal_facility(arr, objective, oracle_tol)
    cost = social_cost(f, arr, objective)
    if opt > 0:
        ratio = cost / opt
    else:
        ratio = 1.0 if cost == 0 else DEGENERATE
    eta = _safe_ratio(distance(instance.prediction, o), opt)
    return EvaluationRecord(f, o, opt, cost, ratio, eta, objective)


# -- bounds ----------------------------------------------------------------

def _check_eta(eta: float) -> None:
    if not eta >= 0:
        raise FacilityError(f"prediction error must be nonnegative, got {eta}")


def bound_egalitarian_error(eta: float) -> float:
    """Guarantee of the bounding-box mechanism at prediction error eta."""
    _check_eta(eta)
    return min(1.0 + eta, 1.0 + SQRT2)


def bound_minmaxp_error(eta: float) -> float:
    _check_eta(eta)
    return min(1.0 + eta, 2.0)


def bound_cmp_consistency(c: float) -> float:
    check_confidence(c)
    return math.sqrt(2 * c * c + 2) / (1 + c)


def bound_cmp_robustness(c: float) -> float:
    check_confidence(c)
    return math.sqrt(2 * c * c + 2) / (1 - c)


def bound_cmp_error(c: float, eta: float) -> float:
    _check_eta(eta)
    return min(bound_cmp_consistency(c) + eta, bound_cmp_robustness(c))


def theoretical_bound(spec: MechanismSpec, objective: Objective | str,
                      eta: float) -> float | None:
    """Best proven ratio for this mechanism/objective pair, or None if none applies."""
    objective = Objective.parse(objective)
    kind = spec.kind
    if objective is Objective.EGALITARIAN:
        if kind is MechanismKind.MINMAXP_1D:
            return bound_minmaxp_error(eta)
        if kind is MechanismKind.MINIMUM_BOUNDING_BOX:
            return bound_egalitarian_error(eta)
        if kind is MechanismKind.COORDINATEWISE_MEDIAN:
            return 2.0
        return None
    if kind is MechanismKind.CMP:
        return bound_cmp_error(spec.confidence, eta)
    if kind is MechanismKind.COORDINATEWISE_MEDIAN:
        return SQRT2
    return None
