"""Strategyproof facility-location mechanisms with a predicted optimum.

Every mechanism is a thin wrapper around an array kernel that accepts a
leading batch axis: ``points`` of shape ``(..., n, 2)`` and ``prediction``
of shape ``(..., 2)``. The scalar API below and the strategyproofness
fuzzer both go through the same kernels.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np

from .geometry import EmptyInstanceError, FacilityError, Point, as_array

INTEGRALITY_TOL = 1e-9


class IncompatibleError(FacilityError):
    """A mechanism specification cannot be applied to a given instance."""


@dataclass(frozen=True)
class Instance:
    points: tuple[Point, ...]
    prediction: Point

    def __post_init__(self):
        pts = tuple(p if isinstance(p, Point) else Point(*p) for p in self.points)
        if not pts:
            raise EmptyInstanceError()
        pred = self.prediction if isinstance(self.prediction, Point) else Point(*self.prediction)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "prediction", pred)

    @property
    def n(self) -> int:
        return len(self.points)

    def array(self) -> np.ndarray:
        return as_array(self.points)

    def is_1d(self) -> bool:
        return self.prediction.y == 0.0 and all(p.y == 0.0 for p in self.points)

    @classmethod
    def from_arrays(cls, points, prediction) -> "Instance":
        arr = as_array(np.asarray(points, dtype=float))
        return cls(tuple(Point(x, y) for x, y in arr), Point(*np.asarray(prediction, dtype=float)))

    @classmethod
    def on_line(cls, values: Iterable[float], prediction: float) -> "Instance":
        return cls(tuple(Point(v, 0.0) for v in values), Point(prediction, 0.0))


class MechanismKind(enum.Enum):
    MINMAXP_1D = "minmaxp1d"
    MINIMUM_BOUNDING_BOX = "mbb"
    COORDINATEWISE_MEDIAN = "cm"
    CMP = "cmp"
    # Manipulable reference used only as a negative control for the fuzzer.
    MEAN_POINT = "mean"


@dataclass(frozen=True)
class MechanismSpec:
    kind: MechanismKind
    confidence: float = 0.0

    def __post_init__(self):
        kind = self.kind if isinstance(self.kind, MechanismKind) else MechanismKind(self.kind)
        object.__setattr__(self, "kind", kind)
        check_confidence(self.confidence)

    @property
    def label(self) -> str:
        return f"cmp(c={self.confidence:g})" if self.kind is MechanismKind.CMP else self.kind.value

    def phantom_count(self, n: int) -> int:
        if self.kind is MechanismKind.CMP:
            return phantom_count(self.confidence, n)
        return 0

    def compatible(self, n: int) -> bool:
        try:
            self.phantom_count(n)
        except IncompatibleError:
            return False
        return True

    def kernel(self, n: int) -> Callable[[np.ndarray, np.ndarray], np.ndarray]:
        """Batched kernel ``(points, prediction) -> facility`` for instances of size n."""
        kind = self.kind
        if kind is MechanismKind.MINMAXP_1D or kind is MechanismKind.MINIMUM_BOUNDING_BOX:
            return mbb_kernel
        if kind is MechanismKind.COORDINATEWISE_MEDIAN:
            return lambda pts, pred: cm_kernel(pts)
        if kind is MechanismKind.CMP:
            k = self.phantom_count(n)
            return lambda pts, pred: cmp_kernel(pts, pred, k)
        return lambda pts, pred: pts.mean(axis=-2)


def check_confidence(c: float) -> None:
    if not (0.0 <= c < 1.0) or not math.isfinite(c):
        raise FacilityError("confidence out of range")


def smallest_compatible_n(c: float, max_n: int = 10**6) -> int | None:
    frac = Fraction(c).limit_denominator(max_n)
    if abs(float(frac) - c) > INTEGRALITY_TOL:
        return None
    return frac.denominator


def phantom_count(c: float, n: int) -> int:
    """Number of prediction copies cn, snapped to an integer within 1e-9."""
    check_confidence(c)
    k = c * n
    r = round(k)
    if abs(k - r) > INTEGRALITY_TOL:
        hint = smallest_compatible_n(c)
        extra = f"; smallest compatible n is {hint} (or any multiple)" if hint else ""
        raise IncompatibleError(f"confidence incompatible with n={n}{extra}")
    return int(r)


# -- kernels ---------------------------------------------------------------

def _lower_median(values: np.ndarray) -> np.ndarray:
    m = values.shape[-1]
    return np.sort(values, axis=-1)[..., (m - 1) // 2]


def mbb_kernel(points: np.ndarray, prediction: np.ndarray) -> np.ndarray:
    lo = points.min(axis=-2)
    hi = points.max(axis=-2)
    return np.minimum(np.maximum(prediction, lo), hi)


def cm_kernel(points: np.ndarray) -> np.ndarray:
    return np.stack([_lower_median(points[..., 0]), _lower_median(points[..., 1])], axis=-1)


def gcm_kernel(points: np.ndarray, phantoms: np.ndarray) -> np.ndarray:
    return cm_kernel(np.concatenate([points, phantoms], axis=-2))


def cmp_kernel(points: np.ndarray, prediction: np.ndarray, copies: int) -> np.ndarray:
    pred = np.asarray(prediction, dtype=float)
    phantoms = np.broadcast_to(pred[..., None, :], pred.shape[:-1] + (copies, 2))
    phantoms = np.broadcast_to(phantoms, points.shape[:-2] + (copies, 2))
    return gcm_kernel(points, phantoms)


# -- scalar API ------------------------------------------------------------

def minmaxp_1d(values: Sequence[float], prediction: float) -> float:
    arr = np.asarray(values, dtype=float).ravel()
    if arr.size == 0:
        raise EmptyInstanceError()
    lo, hi = float(arr.min()), float(arr.max())
    if lo <= prediction <= hi:
        return float(prediction)
    return lo if prediction < lo else hi


def minimum_bounding_box(instance: Instance) -> Point:
    arr = instance.array()
    return Point(minmaxp_1d(arr[:, 0], instance.prediction.x),
                 minmaxp_1d(arr[:, 1], instance.prediction.y))


def coordinatewise_median(points) -> Point:
    return Point.from_array(cm_kernel(as_array(points)))


def generalized_coordinatewise_median(points, phantoms) -> Point:
    arr = as_array(points)
    ph = np.array([tuple(p) for p in phantoms], dtype=float).reshape(-1, 2)
    return Point.from_array(gcm_kernel(arr, ph))


def cmp(instance: Instance, confidence: float) -> Point:
    k = phantom_count(confidence, instance.n)
    pred = np.array(instance.prediction.as_tuple())
    return Point.from_array(cmp_kernel(instance.array(), pred, k))


def evaluate(spec: MechanismSpec, instance: Instance) -> Point:
    kind = spec.kind
    if kind is MechanismKind.MINMAXP_1D:
        if not instance.is_1d():
            raise IncompatibleError("mechanism is one-dimensional")
        xs = [p.x for p in instance.points]
        return Point(minmaxp_1d(xs, instance.prediction.x), 0.0)
    if kind is MechanismKind.MINIMUM_BOUNDING_BOX:
        return minimum_bounding_box(instance)
    if kind is MechanismKind.COORDINATEWISE_MEDIAN:
        return coordinatewise_median(instance.points)
    if kind is MechanismKind.CMP:
        return cmp(instance, spec.confidence)
    return Point.from_array(instance.array().mean(axis=0))
