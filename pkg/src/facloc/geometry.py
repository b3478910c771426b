"""Planar primitives: points, distances and axis-parallel bounding boxes."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np


class FacilityError(ValueError):
    """Base class for invalid inputs to any facloc operation."""


class EmptyInstanceError(FacilityError):
    def __init__(self, message: str = "empty instance"):
        super().__init__(message)


@dataclass(frozen=True)
class Point:
    x: float
    y: float = 0.0

    def __post_init__(self):
        x, y = float(self.x), float(self.y)
        if not (math.isfinite(x) and math.isfinite(y)):
            raise FacilityError(f"non-finite coordinate in point ({self.x}, {self.y})")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    def __iter__(self):
        yield self.x
        yield self.y

    def __add__(self, other: "Point") -> "Point":
        return Point(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Point") -> "Point":
        return Point(self.x - other.x, self.y - other.y)

    def as_tuple(self) -> tuple[float, float]:
        return (self.x, self.y)

    @classmethod
    def from_array(cls, arr) -> "Point":
        return cls(float(arr[0]), float(arr[1]))


@dataclass(frozen=True)
class BoundingBox:
    x_min: float
    x_max: float
    y_min: float
    y_max: float

    def __post_init__(self):
        if not (self.x_min <= self.x_max and self.y_min <= self.y_max):
            raise FacilityError(
                f"inverted bounding box ({self.x_min}, {self.x_max}, {self.y_min}, {self.y_max})"
            )

    def contains(self, p: Point) -> bool:
        return self.x_min <= p.x <= self.x_max and self.y_min <= p.y <= self.y_max

    @property
    def diagonal(self) -> float:
        return math.hypot(self.x_max - self.x_min, self.y_max - self.y_min)

    def expanded(self, fraction: float) -> "BoundingBox":
        """Grow every side by `fraction` of the box extent (at least `fraction` if degenerate)."""
        dx = (self.x_max - self.x_min) or 1.0
        dy = (self.y_max - self.y_min) or 1.0
        return BoundingBox(
            self.x_min - fraction * dx,
            self.x_max + fraction * dx,
            self.y_min - fraction * dy,
            self.y_max + fraction * dy,
        )


def as_array(points: Iterable[Point] | np.ndarray) -> np.ndarray:
    """Stack points into an ``(n, 2)`` float array, rejecting empty input."""
    if isinstance(points, np.ndarray):
        arr = np.asarray(points, dtype=float).reshape(-1, 2)
        if not np.all(np.isfinite(arr)):
            raise FacilityError("non-finite coordinate")
    else:
        arr = np.array([tuple(Point(*p)) if not isinstance(p, Point) else (p.x, p.y)
                        for p in points], dtype=float).reshape(-1, 2)
    if arr.shape[0] == 0:
        raise EmptyInstanceError()
    return arr


def distance(a: Point, b: Point) -> float:
    return math.hypot(a.x - b.x, a.y - b.y)


def bounding_box(points: Sequence[Point]) -> BoundingBox:
    arr = as_array(points)
    lo = arr.min(axis=0)
    hi = arr.max(axis=0)
    return BoundingBox(float(lo[0]), float(hi[0]), float(lo[1]), float(hi[1]))


def clamp_to_box(p: Point, b: BoundingBox) -> Point:
    """Euclidean projection of `p` onto `b`; coordinatewise clamping suffices for boxes."""
    return Point(min(max(p.x, b.x_min), b.x_max), min(max(p.y, b.y_min), b.y_max))
