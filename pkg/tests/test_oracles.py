import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import minimize_scalar

from facloc.geometry import EmptyInstanceError, Point
from facloc.oracles import (
    Objective,
    geometric_median,
    geometric_median_with_cost,
    median_1d,
    optimal_facility,
    smallest_enclosing_circle,
)
from reference import brute_force_circle, grid_min_cost, max_distance, mean_distance

S = 1 / math.sqrt(2)
SYM_CLUSTERS = [(-3, 0)] * 3 + [(3, 0)] * 3 + [(0, 1)] * 2

coord = st.floats(-50, 50, allow_nan=False, allow_infinity=False)
point_lists = st.lists(st.tuples(coord, coord), min_size=1, max_size=10)


@pytest.mark.parametrize("values,expected", [([3], 3), ([1, 2, 3, 4], 2), ([5, 1, 9], 5)])
def test_median_1d(values, expected):
    assert median_1d(values) == expected


@pytest.mark.parametrize("fn", [median_1d, smallest_enclosing_circle, geometric_median])
def test_empty_inputs(fn):
    with pytest.raises(EmptyInstanceError, match="empty instance"):
        fn([])


def test_circle_examples():
    c = smallest_enclosing_circle([(2, 7)])
    assert c.center == Point(2, 7) and c.radius == 0
    c = smallest_enclosing_circle([(0, 0), (4, 0)])
    assert c.center == Point(2, 0) and c.radius == 2
    c = smallest_enclosing_circle([(0, 1), (1, 0), (-S, -S)])
    assert c.center.x == pytest.approx(0, abs=1e-12)
    assert c.center.y == pytest.approx(0, abs=1e-12)
    assert c.radius == pytest.approx(1, abs=1e-12)


def test_geometric_median_examples():
    assert geometric_median([(5, -3)]) == Point(5, -3)
    assert geometric_median([(-1, 0), (1, 0), (0, 1), (0, 1)]) == Point(0, 1)
    m = geometric_median([(0, 0), (1, 0), (0, 1), (1, 1)])
    assert (m.x, m.y) == pytest.approx((0.5, 0.5), abs=1e-9)


def test_lemma42_utilitarian_optimum_by_line_search():
    # The instance is symmetric in x, so a minimiser lies on x = 0; search y only.
    pts = np.array(SYM_CLUSTERS, dtype=float)
    res = minimize_scalar(lambda y: mean_distance(pts, (0.0, y)), bounds=(-2, 3),
                          method="bounded", options={"xatol": 1e-10})
    assert res.x == pytest.approx(1.0, abs=1e-6)
    assert res.fun == pytest.approx(6 * math.sqrt(10) / 8, abs=1e-9)

    o, cost = optimal_facility(SYM_CLUSTERS, Objective.UTILITARIAN)
    assert o == Point(0, 1)
    assert cost == pytest.approx(6 * math.sqrt(10) / 8, abs=1e-12)


def test_optimal_facility_examples():
    o, r = optimal_facility([(0, 0), (2, 0)], "egalitarian")
    assert o == Point(1, 0) and r == 1
    assert optimal_facility([(0, 0)], "utilitarian") == (Point(0, 0), 0.0)


def test_collinear_even_mass_cost_is_authoritative():
    pts = [(0, 0), (1, 0), (2, 0), (3, 0)]
    m, cost = geometric_median_with_cost(pts)
    assert cost == pytest.approx(1.0, abs=1e-9)
    assert 1 - 1e-9 <= m.x <= 2 + 1e-9


def test_data_point_with_multiplicity_is_detected():
    # A heavy cluster at the origin must win exactly.
    pts = [(0, 0)] * 5 + [(1, 0), (0, 1), (-1, 0), (0, -1), (3, 3)]
    assert geometric_median(pts) == Point(0, 0)


@settings(max_examples=150, deadline=None)
@given(st.lists(st.tuples(coord, coord), min_size=1, max_size=12))
def test_circle_matches_brute_force(pts):
    circ = smallest_enclosing_circle(pts)
    _, r = brute_force_circle(pts)
    scale = max(1.0, float(np.abs(np.asarray(pts)).max()))
    assert circ.radius == pytest.approx(r, abs=1e-9 * scale)
    assert max_distance(pts, circ.center.as_tuple()) <= circ.radius + 1e-9


@settings(max_examples=60, deadline=None)
@given(point_lists)
def test_geometric_median_beats_grid(pts):
    _, cost = geometric_median_with_cost(pts)
    grid_best, _ = grid_min_cost(pts, size=200)
    assert cost <= grid_best + 1e-9


@settings(max_examples=100, deadline=None)
@given(point_lists, coord, coord)
def test_geometric_median_cost_translation_invariant(pts, vx, vy):
    moved = [(x + vx, y + vy) for x, y in pts]
    a = geometric_median_with_cost(pts)[1]
    b = geometric_median_with_cost(moved)[1]
    assert a == pytest.approx(b, abs=1e-9 * max(1.0, a))


@pytest.mark.parametrize("objective", list(Objective))
def test_optimum_beats_random_probes(objective):
    rng = np.random.default_rng(11)
    for _ in range(20):
        pts = rng.uniform(-10, 10, (int(rng.integers(1, 12)), 2))
        o, opt = optimal_facility(pts, objective)
        probes = rng.uniform(-15, 15, (1000, 2))
        d = np.linalg.norm(pts[None, :, :] - probes[:, None, :], axis=2)
        costs = d.max(axis=1) if objective is Objective.EGALITARIAN else d.mean(axis=1)
        assert opt <= costs.min() + 1e-9
