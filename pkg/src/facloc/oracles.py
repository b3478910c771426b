"""Exact optimal facilities for the egalitarian and utilitarian objectives.

The egalitarian optimum is the centre of the smallest enclosing circle,
computed with the randomised incremental (Welzl) construction. The
utilitarian optimum is the geometric median, computed with Weiszfeld
iteration after an exact optimality test at every data point.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .geometry import EmptyInstanceError, FacilityError, Point, as_array

DEFAULT_TOL = 1e-9
_SHUFFLE_SEED = 0x5EC
_COINCIDE = 1e-12


class Objective(enum.Enum):
    EGALITARIAN = "egalitarian"
    UTILITARIAN = "utilitarian"

    @classmethod
    def parse(cls, value: "Objective | str") -> "Objective":
        if isinstance(value, Objective):
            return value
        try:
            return cls(value.lower())
        except ValueError:
            raise FacilityError(f"unknown objective {value!r}") from None


@dataclass(frozen=True)
class Circle:
    center: Point
    radius: float

    def __post_init__(self):
        if not self.radius >= 0:
            raise FacilityError(f"negative radius {self.radius}")


def median_1d(values: Sequence[float]) -> float:
    """Middle order statistic; the lower of the two middle ones for even counts."""
    arr = np.asarray(values, dtype=float).ravel()
    if arr.size == 0:
        raise EmptyInstanceError()
    return float(np.sort(arr)[(arr.size - 1) // 2])


# -- smallest enclosing circle ---------------------------------------------

def _contains(c: tuple[float, float, float], p: np.ndarray) -> bool:
    return math.hypot(p[0] - c[0], p[1] - c[1]) <= c[2] * (1 + 1e-14) + 1e-300


def _diameter(a: np.ndarray, b: np.ndarray) -> tuple[float, float, float]:
    cx, cy = (a[0] + b[0]) / 2, (a[1] + b[1]) / 2
    return (cx, cy, max(math.hypot(a[0] - cx, a[1] - cy), math.hypot(b[0] - cx, b[1] - cy)))


def circumcircle(a, b, c) -> tuple[float, float, float] | None:
    """Circle through three points, or None when they are (numerically) collinear."""
    ox = (min(a[0], b[0], c[0]) + max(a[0], b[0], c[0])) / 2
    oy = (min(a[1], b[1], c[1]) + max(a[1], b[1], c[1])) / 2
    ax, ay = a[0] - ox, a[1] - oy
    bx, by = b[0] - ox, b[1] - oy
    cx, cy = c[0] - ox, c[1] - oy
    d = (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by)) * 2
    if d == 0:
        return None
    x = ox + ((ax * ax + ay * ay) * (by - cy) + (bx * bx + by * by) * (cy - ay)
              + (cx * cx + cy * cy) * (ay - by)) / d
    y = oy + ((ax * ax + ay * ay) * (cx - bx) + (bx * bx + by * by) * (ax - cx)
              + (cx * cx + cy * cy) * (bx - ax)) / d
    r = max(math.hypot(x - a[0], y - a[1]), math.hypot(x - b[0], y - b[1]),
            math.hypot(x - c[0], y - c[1]))
    return (x, y, r)


def _cross(ax, ay, bx, by, cx, cy) -> float:
    return (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)


def _circle_two(pts: np.ndarray, p: np.ndarray, q: np.ndarray):
    circ = _diameter(p, q)
    left = right = None
    for r in pts:
        if _contains(circ, r):
            continue
        cross = _cross(p[0], p[1], q[0], q[1], r[0], r[1])
        c = circumcircle(p, q, r)
        if c is None:
            continue
        side = _cross(p[0], p[1], q[0], q[1], c[0], c[1])
        if cross > 0 and (left is None or side > _cross(p[0], p[1], q[0], q[1], left[0], left[1])):
            left = c
        elif cross < 0 and (right is None or side < _cross(p[0], p[1], q[0], q[1], right[0], right[1])):
            right = c
    if left is None and right is None:
        return circ
    if left is None:
        return right
    if right is None:
        return left
    return left if left[2] <= right[2] else right


def _circle_one(pts: np.ndarray, p: np.ndarray):
    c = (float(p[0]), float(p[1]), 0.0)
    for i, q in enumerate(pts):
        if not _contains(c, q):
            c = _diameter(p, q) if c[2] == 0.0 else _circle_two(pts[: i + 1], p, q)
    return c


def smallest_enclosing_circle(points) -> Circle:
    """Minimum-radius circle containing every point.

    The visiting order is a fixed pseudo-random permutation so the result is
    deterministic. The returned radius is re-measured as the largest distance
    from the centre, so it equals the egalitarian cost at the centre exactly.
    """
    arr = as_array(points)
    if np.all(arr == arr[0]):
        return Circle(Point.from_array(arr[0]), 0.0)
    order = np.random.default_rng(_SHUFFLE_SEED).permutation(arr.shape[0])
    pts = arr[order]
    c = None
    for i, p in enumerate(pts):
        if c is None or not _contains(c, p):
            c = _circle_one(pts[: i + 1], p)
    center = np.array([c[0], c[1]])
    radius = float(np.max(np.hypot(*(arr - center).T)))
    return Circle(Point(c[0], c[1]), radius)


# -- geometric median ------------------------------------------------------

def _mean_distance(arr: np.ndarray, m: np.ndarray) -> float:
    return float(np.mean(np.hypot(arr[:, 0] - m[0], arr[:, 1] - m[1])))


def _optimal_data_point(uniq: np.ndarray, counts: np.ndarray) -> int | None:
    """Index of a distinct point whose subgradient condition holds, if any.

    A data point u with multiplicity m minimises the sum of distances iff the
    resultant of unit vectors towards the remaining points has norm <= m.
    """
    diff = uniq[:, None, :] - uniq[None, :, :]
    dist = np.hypot(diff[..., 0], diff[..., 1])
    np.fill_diagonal(dist, 1.0)
    unit = diff / dist[..., None]
    idx = np.arange(len(uniq))
    unit[idx, idx] = 0.0
    resultant = np.hypot(*(unit * counts[None, :, None]).sum(axis=1).T)
    ok = np.flatnonzero(resultant <= counts * (1 + 1e-12))
    return int(ok[0]) if ok.size else None


def _newton_candidate(arr: np.ndarray, y: np.ndarray, d: np.ndarray,
                      cost: float) -> tuple[np.ndarray, float] | None:
    diff = y - arr
    inv = 1.0 / d
    g = (diff * inv[:, None]).sum(axis=0)
    outer = diff[:, :, None] * diff[:, None, :] * (inv ** 3)[:, None, None]
    h = np.eye(2) * inv.sum() - outer.sum(axis=0)
    s = -np.linalg.lstsq(h, g, rcond=None)[0]
    for _ in range(40):
        z = y + s
        cz = _mean_distance(arr, z)
        if cz < cost:
            return z, cz
        s = s / 2
    return None


def _weiszfeld(arr: np.ndarray, tol: float, max_iter: int) -> np.ndarray:
    """Weiszfeld iteration with the Vardi-Zhang step for iterates on data points.

    Each iteration also tries a damped Newton step on the (smooth, since no
    data point is optimal) objective and keeps whichever candidate is cheaper;
    plain Weiszfeld stalls for near-degenerate configurations.
    """
    n = arr.shape[0]
    y = arr.mean(axis=0)
    cost = _mean_distance(arr, y)
    step_tol = tol / (10 * n)
    for _ in range(max_iter):
        diff = arr - y
        d = np.hypot(diff[:, 0], diff[:, 1])
        hit = d < _COINCIDE
        w = np.where(hit, 0.0, 1.0 / np.where(hit, 1.0, d))
        t = (w[:, None] * arr).sum(axis=0) / w.sum()
        eta = hit.sum()
        if eta:
            r = np.hypot(*(w[:, None] * diff).sum(axis=0))
            if r <= eta:
                return y
            lam = eta / r
            t = (1 - lam) * t + lam * y
        ct = _mean_distance(arr, t)
        if not eta:
            newton = _newton_candidate(arr, y, d, cost)
            if newton is not None and newton[1] < ct:
                t, ct = newton
        step = math.hypot(*(t - y))
        if ct > cost:
            break
        y, cost = t, ct
        if step < step_tol:
            break
    return y


def geometric_median_with_cost(points, tol: float = DEFAULT_TOL,
                               max_iter: int = 10_000) -> tuple[Point, float]:
    """Geometric median and its mean distance.

    `tol` is an absolute cost tolerance on the instance rescaled to unit
    bounding-box diagonal. The cost is authoritative; for instances whose
    minimisers form a segment the point is any one of them.
    """
    if not tol > 0:
        raise FacilityError("tol must be positive")
    arr = as_array(points)
    if np.all(arr == arr[0]):
        return Point.from_array(arr[0]), 0.0
    lo, hi = arr.min(axis=0), arr.max(axis=0)
    center = (lo + hi) / 2
    scale = float(np.hypot(*(hi - lo)))
    norm = (arr - center) / scale

    uniq, counts = np.unique(norm, axis=0, return_counts=True)
    j = _optimal_data_point(uniq, counts.astype(float))
    if j is not None:
        m = uniq[j] * scale + center
        # Recover the exact input coordinates of that data point.
        k = int(np.argmin(np.hypot(*(arr - m).T)))
        m = arr[k]
    else:
        m = _weiszfeld(norm, tol, max_iter) * scale + center
    return Point.from_array(m), _mean_distance(arr, m)


def geometric_median(points, tol: float = DEFAULT_TOL) -> Point:
    return geometric_median_with_cost(points, tol)[0]


def optimal_facility(points, objective: Objective | str,
                     tol: float = DEFAULT_TOL) -> tuple[Point, float]:
    """o(P) and its cost under the chosen objective."""
    objective = Objective.parse(objective)
    if objective is Objective.EGALITARIAN:
        circle = smallest_enclosing_circle(points)
        return circle.center, circle.radius
    return geometric_median_with_cost(points, tol)
