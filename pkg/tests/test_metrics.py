import math

import numpy as np
import pytest

from facloc.adversarial import PredictionMode, random_instance
from facloc.geometry import FacilityError, Point
from facloc.mechanisms import Instance, MechanismKind, MechanismSpec
from facloc.metrics import (
    DEGENERATE,
    approximation_ratio,
    bound_cmp_consistency,
    bound_cmp_error,
    bound_cmp_robustness,
    bound_egalitarian_error,
    egalitarian_cost,
    prediction_error,
    utilitarian_cost,
)
from facloc.oracles import Objective, smallest_enclosing_circle

S = 1 / math.sqrt(2)
R2 = math.sqrt(2)
T33 = (Point(0, 1), Point(1, 0), Point(-S, -S))
L42_CONS = tuple([Point(-3, 0)] * 3 + [Point(3, 0)] * 3 + [Point(0, 1)] * 2)
L42_ROB = tuple([Point(-1 / 3, 0), Point(1 / 3, 0)] + [Point(0, 1)] * 6)
MBB = MechanismSpec(MechanismKind.MINIMUM_BOUNDING_BOX)
CMP_HALF = MechanismSpec(MechanismKind.CMP, 0.5)


def test_egalitarian_cost_examples():
    assert egalitarian_cost(Point(0, 0), [Point(0, 0)]) == 0
    assert egalitarian_cost(Point(1, 1), T33) == pytest.approx(1 + R2, abs=1e-12)
    assert egalitarian_cost(Point(0, 0), T33) == pytest.approx(1, abs=1e-12)


def test_utilitarian_cost_examples():
    assert utilitarian_cost(Point(0, 1), L42_CONS) == pytest.approx(6 * math.sqrt(10) / 8, abs=1e-12)
    assert utilitarian_cost(Point(0, 0), L42_CONS) == pytest.approx(2.5, abs=1e-12)
    assert utilitarian_cost(Point(4, 4), [Point(4, 4)] * 5) == 0


def test_costs_reject_empty():
    with pytest.raises(FacilityError):
        egalitarian_cost(Point(0, 0), [])
    with pytest.raises(FacilityError):
        utilitarian_cost(Point(0, 0), [])


def test_prediction_error_examples():
    assert prediction_error(Instance(L42_CONS, Point(0, 1)), "utilitarian") == pytest.approx(0, abs=1e-12)
    # o = (0, 1) and OPT = 2 * sqrt(1 + 1/9) / 8
    opt = 2 * math.sqrt(1 + 1 / 9) / 8
    assert opt == pytest.approx(math.sqrt(10) / 12)
    assert prediction_error(Instance(L42_ROB, Point(0, 0)), "utilitarian") == pytest.approx(
        12 / math.sqrt(10), abs=1e-9)
    assert prediction_error(Instance(T33, Point(1, 1)), "egalitarian") == pytest.approx(R2, abs=1e-12)


def test_degenerate_sentinels():
    inst = Instance((Point(2, 2),) * 3, Point(5, 5))
    assert prediction_error(inst, "egalitarian") == DEGENERATE
    assert prediction_error(Instance((Point(2, 2),) * 3, Point(2, 2)), "egalitarian") == 0
    rec = approximation_ratio(MBB, inst, "egalitarian")
    assert rec.ratio == 1.0 and rec.degenerate
    rec = approximation_ratio(MechanismSpec(MechanismKind.MEAN_POINT), inst, "utilitarian")
    assert rec.ratio == 1.0
    skew = Instance((Point(0, 0),), Point(1, 0))
    rec = approximation_ratio(MechanismSpec(MechanismKind.CMP, 0.0), skew, "utilitarian")
    assert rec.ratio == 1.0


def test_approximation_ratio_examples():
    rec = approximation_ratio(MBB, Instance(T33, Point(1, 1)), Objective.EGALITARIAN)
    assert rec.mechanism_output == Point(1, 1)
    assert rec.ratio == pytest.approx(1 + R2, abs=1e-9)
    rec = approximation_ratio(CMP_HALF, Instance(L42_CONS, Point(0, 1)), Objective.UTILITARIAN)
    assert rec.ratio == pytest.approx(math.sqrt(10) / 3, abs=1e-9)
    rec = approximation_ratio(CMP_HALF, Instance(L42_ROB, Point(0, 0)), Objective.UTILITARIAN)
    assert rec.ratio == pytest.approx(math.sqrt(10), abs=1e-9)


def test_bound_egalitarian_examples():
    assert bound_egalitarian_error(0) == 1
    assert bound_egalitarian_error(0.5) == 1.5
    assert bound_egalitarian_error(10) == 1 + R2


def test_bound_cmp_examples():
    assert bound_cmp_consistency(0) == pytest.approx(R2)
    assert bound_cmp_robustness(0) == pytest.approx(R2)
    assert bound_cmp_consistency(0.5) == pytest.approx(math.sqrt(10) / 3)
    assert bound_cmp_robustness(0.5) == pytest.approx(math.sqrt(10))
    assert bound_cmp_consistency(1 - 1e-9) == pytest.approx(1, abs=1e-6)
    assert bound_cmp_error(0.5, 0.1) == pytest.approx(math.sqrt(10) / 3 + 0.1)
    assert bound_cmp_error(0.5, 100) == pytest.approx(math.sqrt(10))


@pytest.mark.parametrize("fn", [bound_cmp_consistency, bound_cmp_robustness])
def test_bound_rejects_bad_c(fn):
    with pytest.raises(FacilityError):
        fn(1.0)


def test_bound_monotonicity():
    cs = np.linspace(0, 0.99, 100)
    cons = [bound_cmp_consistency(c) for c in cs]
    rob = [bound_cmp_robustness(c) for c in cs]
    assert all(a > b for a, b in zip(cons, cons[1:]))
    assert all(a < b for a, b in zip(rob, rob[1:]))


def _instances(count, seed, dimension=2, sizes=range(1, 10)):
    rng = np.random.default_rng(seed)
    modes = list(PredictionMode)
    for i in range(count):
        yield random_instance(int(rng.choice(list(sizes))), rng, prediction_mode=modes[i % 3],
                              objective=Objective.EGALITARIAN, dimension=dimension)


def test_ratio_at_least_one():
    for spec, obj in [(MBB, "egalitarian"), (MechanismSpec(MechanismKind.CMP, 0.5), "utilitarian")]:
        for inst in _instances(150, 1, sizes=[2, 4, 6, 8]):
            assert approximation_ratio(spec, inst, obj).ratio >= 1 - 1e-9


def test_mbb_error_bound_random():
    for inst in _instances(300, 2):
        rec = approximation_ratio(MBB, inst, "egalitarian")
        if rec.degenerate:
            continue
        assert rec.ratio <= bound_egalitarian_error(rec.prediction_error) + 1e-6


def test_mbb_consistent_with_circle_centre():
    for inst in _instances(200, 3):
        o = smallest_enclosing_circle(inst.points).center
        rec = approximation_ratio(MBB, Instance(inst.points, o), "egalitarian")
        assert rec.ratio == pytest.approx(1, abs=1e-6)


def test_minmaxp_ratio_bounds():
    spec = MechanismSpec(MechanismKind.MINMAXP_1D)
    for inst in _instances(300, 4, dimension=1):
        rec = approximation_ratio(spec, inst, "egalitarian")
        assert rec.ratio <= 2 + 1e-9
        exact = approximation_ratio(spec, Instance(inst.points, rec.optimal_point), "egalitarian")
        assert exact.ratio == pytest.approx(1, abs=1e-9)


@pytest.mark.parametrize("c,sizes", [(0.0, range(1, 10)), (0.25, [4, 8]), (0.5, [2, 4, 6, 8]),
                                     (0.75, [4, 8])])
def test_cmp_error_bound_random(c, sizes):
    spec = MechanismSpec(MechanismKind.CMP, c)
    for inst in _instances(200, 5, sizes=sizes):
        rec = approximation_ratio(spec, inst, "utilitarian")
        if rec.degenerate:
            continue
        assert rec.ratio <= bound_cmp_error(c, rec.prediction_error) + 1e-5
