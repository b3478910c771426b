"""Worst-case instance generators, COA search, random instances and the fuzzer."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .geometry import FacilityError, Point
from .mechanisms import (
    INTEGRALITY_TOL,
    Instance,
    MechanismKind,
    MechanismSpec,
    check_confidence,
    evaluate,
)
from .metrics import (
    approximation_ratio,
    bound_cmp_consistency,
    bound_cmp_robustness,
    social_cost,
    theoretical_bound,
)
from .oracles import Objective, optimal_facility

SP_SLACK = 1e-12
DEFAULT_BOX = (-10.0, 10.0, -10.0, 10.0)


class CoaMode(enum.Enum):
    CONSISTENCY = "consistency"
    ROBUSTNESS = "robustness"


def _integral(v: float) -> int | None:
    r = round(v)
    return int(r) if abs(v - r) <= INTEGRALITY_TOL else None


# -- COA instances ---------------------------------------------------------

@dataclass(frozen=True)
class CoaInstanceParams:
    c: float
    n: int
    x: float
    u_fraction: float
    mode: CoaMode

    def __post_init__(self):
        check_confidence(self.c)
        if self.n < 1:
            raise FacilityError("n must be positive")
        if self.x < 0 or not 0 <= self.u_fraction <= 1:
            raise FacilityError("need x >= 0 and u_fraction in [0, 1]")

    def counts(self) -> tuple[int, int, int] | None:
        """(agents on each side cluster, agents at (0, 1), phantom copies) or None."""
        u = _integral(self.u_fraction * self.n)
        k = _integral(self.c * self.n)
        if u is None or k is None or (self.n - u) % 2:
            return None
        return (self.n - u) // 2, u, k


def coa_instance(params: CoaInstanceParams) -> Instance:
    counts = params.counts()
    if counts is None:
        raise FacilityError(f"n incompatible with c: n={params.n}, c={params.c}")
    side, up, _ = counts
    pts = [Point(-params.x, 0.0)] * side + [Point(params.x, 0.0)] * side + [Point(0.0, 1.0)] * up
    pred = Point(0.0, 1.0) if params.mode is CoaMode.CONSISTENCY else Point(0.0, 0.0)
    return Instance(tuple(pts), pred)


def _lemma42_params(c: float, n: int, mode: CoaMode) -> CoaInstanceParams:
    check_confidence(c)
    if mode is CoaMode.CONSISTENCY:
        x, u = (1 + c) / (1 - c), (1 - c) / 2
    else:
        x, u = (1 - c) / (1 + c), (1 + c) / 2
    return CoaInstanceParams(c, n, x, u, mode)


def lemma42_compatible(c: float, n: int) -> bool:
    """Cluster sizes (1 +- c)n/4, (1 -+ c)n/2 and the phantom count cn are all integers."""
    return n >= 1 and all(_integral(v) is not None for v in
                          (c * n, (1 + c) * n / 4, (1 - c) * n / 4,
                           (1 + c) * n / 2, (1 - c) * n / 2))


def lemma42_smallest_n(c: float, multiple: int = 1, limit: int = 10**5) -> int:
    check_confidence(c)
    for n in range(multiple, limit + 1, multiple):
        if lemma42_compatible(c, n):
            return n
    raise FacilityError(f"no n <= {limit} is compatible with c={c}")


def _lemma42(c: float, n: int, mode: CoaMode) -> Instance:
    if not lemma42_compatible(c, n):
        try:
            hint = f"; smallest compatible n is {lemma42_smallest_n(c)}"
        except FacilityError:
            hint = ""
        raise FacilityError(f"n incompatible with c (n={n}, c={c}{hint})")
    return coa_instance(_lemma42_params(c, n, mode))


def lemma42_consistency_instance(c: float, n: int) -> Instance:
    """Clusters at +-(1+c)/(1-c) and (1-c)n/2 agents at (0, 1); prediction (0, 1)."""
    return _lemma42(c, n, CoaMode.CONSISTENCY)


def lemma42_robustness_instance(c: float, n: int) -> Instance:
    """Clusters at +-(1-c)/(1+c) and (1+c)n/2 agents at (0, 1); prediction (0, 0)."""
    return _lemma42(c, n, CoaMode.ROBUSTNESS)


def theorem33_robustness_instance() -> Instance:
    s = 1 / math.sqrt(2)
    return Instance((Point(0.0, 1.0), Point(1.0, 0.0), Point(-s, -s)), Point(1.0, 1.0))


def minmaxp_tightness_instance() -> Instance:
    return Instance.on_line([0.0, 1.0], 0.0)


def coa_ratio_closed_form(c: float, x: float, mode: CoaMode | str) -> float:
    """CMP ratio on the worst COA split as a function of the cluster abscissa x."""
    check_confidence(c)
    mode = CoaMode(mode)
    if x < 0:
        raise FacilityError("x must be nonnegative")
    root = math.sqrt(1 + x * x)
    if mode is CoaMode.CONSISTENCY:
        return (1 - c + (1 + c) * x) / ((1 + c) * root)
    return (1 + c + (1 - c) * x) / ((1 - c) * root)


@dataclass(frozen=True)
class CoaSearchResult:
    c: float
    mode: CoaMode
    x_star: float
    max_ratio: float
    closed_form: float
    realized_ratio: float
    n: int

    @property
    def delta(self) -> float:
        return abs(self.max_ratio - self.closed_form)


def _golden_max(f: Callable[[float], float], a: float, b: float, tol: float = 1e-12) -> float:
    invphi = (math.sqrt(5) - 1) / 2
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol * max(1.0, abs(a) + abs(b)):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return (a + b) / 2


def coa_search(c: float, mode: CoaMode | str, resolution: int = 2000) -> CoaSearchResult:
    """Maximise the COA ratio over x on a grid, refine by golden section, and
    re-measure the maximum on a concrete instance with the CMP mechanism."""
    check_confidence(c)
    mode = CoaMode(mode)
    if resolution < 1000:
        raise FacilityError("resolution must be at least 1000")
    f = lambda x: coa_ratio_closed_form(c, x, mode)
    grid = np.linspace(0.0, 10 * (1 + c) / (1 - c), resolution)
    vals = np.array([f(x) for x in grid])
    i = int(np.argmax(vals))
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, resolution - 1)]
    x_star = float(_golden_max(f, lo, hi))
    best = max(f(x_star), float(vals[i]))
    if best > f(x_star):
        x_star = float(grid[i])

    n = lemma42_smallest_n(c, multiple=4)
    split = (1 - c) / 2 if mode is CoaMode.CONSISTENCY else (1 + c) / 2
    inst = coa_instance(CoaInstanceParams(c, n, x_star, split, mode))
    rec = approximation_ratio(MechanismSpec(MechanismKind.CMP, c), inst, Objective.UTILITARIAN)
    bound = bound_cmp_consistency(c) if mode is CoaMode.CONSISTENCY else bound_cmp_robustness(c)
    return CoaSearchResult(c, mode, x_star, best, bound, rec.ratio, n)


# -- random instances ------------------------------------------------------

class PredictionMode(enum.Enum):
    ORACLE = "oracle"
    UNIFORM = "uniform"
    CORNER = "corner"


def random_instance(n: int, seed: int | np.random.SeedSequence | np.random.Generator,
                    box: tuple[float, float, float, float] = DEFAULT_BOX,
                    prediction_mode: PredictionMode | str = PredictionMode.UNIFORM,
                    objective: Objective | str = Objective.UTILITARIAN,
                    dimension: int = 2) -> Instance:
    """n uniform agents in `box` with a prediction drawn per `prediction_mode`.

    ``dimension=1`` places every agent and prediction on the x-axis.
    The corner mode puts the prediction at a random box corner scaled by 2.
    """
    if n < 1:
        raise FacilityError("n must be positive")
    mode = PredictionMode(prediction_mode)
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    x0, x1, y0, y1 = box
    pts = np.empty((n, 2))
    pts[:, 0] = rng.uniform(x0, x1, n)
    pts[:, 1] = rng.uniform(y0, y1, n) if dimension == 2 else 0.0
    if mode is PredictionMode.ORACLE:
        pred = np.array(optimal_facility(pts, objective)[0].as_tuple())
    elif mode is PredictionMode.UNIFORM:
        pred = np.array([rng.uniform(x0, x1), rng.uniform(y0, y1)])
    else:
        sx, sy = rng.integers(0, 2, 2)
        pred = 2 * np.array([(x0, x1)[sx], (y0, y1)[sy]], dtype=float)
    if dimension == 1:
        pred[1] = 0.0
    return Instance.from_arrays(pts, pred)


# -- strategyproofness fuzzing ----------------------------------------------

@dataclass(frozen=True)
class Violation:
    seed: int
    trial: int
    instance: Instance
    agent: int
    deviation: Point
    truthful_cost: float
    deviating_cost: float

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "trial": self.trial,
            "points": [list(p) for p in self.instance.points],
            "prediction": list(self.instance.prediction),
            "agent": self.agent,
            "deviation": list(self.deviation),
            "truthful_cost": self.truthful_cost,
            "deviating_cost": self.deviating_cost,
        }


@dataclass
class FuzzReport:
    mechanism: str
    trials: int
    seed: int
    triples_checked: int = 0
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def merge(self, other: "FuzzReport") -> None:
        self.triples_checked += other.triples_checked
        self.violations.extend(other.violations)
        self.violations.sort(key=lambda v: (v.trial, v.agent))

    def to_dict(self, max_violations: int = 20) -> dict:
        return {
            "mechanism": self.mechanism,
            "trials": self.trials,
            "seed": self.seed,
            "triples_checked": self.triples_checked,
            "violation_count": len(self.violations),
            "violations": [v.to_dict() for v in self.violations[:max_violations]],
        }


def fuzz_sizes(spec: MechanismSpec, max_n: int = 9) -> list[int]:
    sizes = [n for n in range(1, max_n + 1) if spec.compatible(n)]
    if not sizes:
        sizes = [n for n in range(1, 201) if spec.compatible(n)][:3]
    if not sizes:
        raise FacilityError(f"no instance size is compatible with {spec.label}")
    return sizes


def _deviations(arr: np.ndarray, pred: np.ndarray, rng: np.random.Generator,
                one_dim: bool, grid: int = 9, n_random: int = 50) -> np.ndarray:
    lo, hi = arr.min(axis=0), arr.max(axis=0)
    ext = np.where(hi - lo > 0, hi - lo, 1.0)
    lo, hi = lo - 0.5 * ext, hi + 0.5 * ext
    gx = np.linspace(lo[0], hi[0], grid)
    if one_dim:
        devs = [np.column_stack([gx, np.zeros(grid)]),
                np.column_stack([rng.uniform(lo[0], hi[0], n_random), np.zeros(n_random)])]
    else:
        gy = np.linspace(lo[1], hi[1], grid)
        mx, my = np.meshgrid(gx, gy)
        devs = [np.column_stack([mx.ravel(), my.ravel()]),
                np.column_stack([rng.uniform(lo[0], hi[0], n_random),
                                 rng.uniform(lo[1], hi[1], n_random)])]
    # Exact ties with other reports and the prediction are where medians flip.
    devs += [arr, pred[None, :]]
    return np.concatenate(devs)


def fuzz_trial(spec: MechanismSpec, seed: int, trial: int,
               ss: np.random.SeedSequence, sizes: list[int],
               instance: Instance | None = None) -> FuzzReport:
    rng = np.random.default_rng(ss)
    one_dim = spec.kind is MechanismKind.MINMAXP_1D
    if instance is None:
        n = int(rng.choice(sizes))
        mode = rng.choice([PredictionMode.UNIFORM, PredictionMode.CORNER, PredictionMode.ORACLE])
        objective = Objective.EGALITARIAN if spec.kind in (
            MechanismKind.MINMAXP_1D, MechanismKind.MINIMUM_BOUNDING_BOX) else Objective.UTILITARIAN
        instance = random_instance(n, rng, prediction_mode=mode, objective=objective,
                                   dimension=1 if one_dim else 2)
    arr = instance.array()
    pred = np.array(instance.prediction.as_tuple())
    kernel = spec.kernel(instance.n)
    truthful = kernel(arr, pred)
    report = FuzzReport(spec.label, 1, seed)
    for i in range(instance.n):
        devs = _deviations(arr, pred, rng, one_dim)
        batch = np.broadcast_to(arr, (len(devs),) + arr.shape).copy()
        batch[:, i, :] = devs
        out = kernel(batch, np.broadcast_to(pred, (len(devs), 2)))
        honest = math.hypot(*(arr[i] - truthful))
        lied = np.hypot(*(out - arr[i]).T)
        report.triples_checked += len(devs)
        for j in np.flatnonzero(honest > lied + SP_SLACK):
            report.violations.append(Violation(seed, trial, instance, i, Point.from_array(devs[j]),
                                               honest, float(lied[j])))
    return report


def strategyproofness_fuzz(spec: MechanismSpec, trials: int, seed: int,
                           max_n: int = 9) -> FuzzReport:
    """Search for profitable unilateral misreports on random instances.

    Trial t draws its instance and deviations from the t-th child of
    ``SeedSequence(seed)``, so any violation is reproducible from (seed, t).
    """
    if trials < 1:
        raise FacilityError("trials must be at least 1")
    sizes = fuzz_sizes(spec, max_n)
    report = FuzzReport(spec.label, trials, seed)
    for t, ss in enumerate(np.random.SeedSequence(seed).spawn(trials)):
        report.merge(fuzz_trial(spec, seed, t, ss, sizes))
    return report


# -- experiment harnesses ---------------------------------------------------

@dataclass(frozen=True)
class SweepRow:
    c: float
    n: int | None
    theoretical_consistency: float | None
    theoretical_robustness: float | None
    achieved_consistency: float | None
    achieved_robustness: float | None
    error: str = ""


def sweep_c(c_list, n: int | None = None) -> list[SweepRow]:
    """Closed-form versus generator-realised CMP consistency and robustness per c.

    With ``n=None`` each row uses the smallest n compatible with its c.
    Incompatible rows carry an error message instead of numbers.
    """
    rows = []
    for c in c_list:
        try:
            m = lemma42_smallest_n(c) if n is None else n
            spec = MechanismSpec(MechanismKind.CMP, c)
            cons = approximation_ratio(spec, lemma42_consistency_instance(c, m), Objective.UTILITARIAN)
            rob = approximation_ratio(spec, lemma42_robustness_instance(c, m), Objective.UTILITARIAN)
            rows.append(SweepRow(c, m, bound_cmp_consistency(c), bound_cmp_robustness(c),
                                 cons.ratio, rob.ratio))
        except FacilityError as exc:
            rows.append(SweepRow(c, n, None, None, None, None, str(exc)))
    return rows


@dataclass(frozen=True)
class ErrorBucket:
    eta: float
    max_ratio: float
    bound: float | None
    trials: int
    worst_trial: int


def perturbed_prediction(o: Point, opt: float, eta: float, rng: np.random.Generator,
                         one_dim: bool = False) -> Point:
    """A prediction at distance exactly eta * opt from o in a random direction."""
    r = eta * opt
    if one_dim:
        return Point(o.x + r * (1.0 if rng.random() < 0.5 else -1.0), 0.0)
    theta = rng.uniform(0.0, 2 * math.pi)
    return Point(o.x + r * math.cos(theta), o.y + r * math.sin(theta))


def error_curve(spec: MechanismSpec, objective: Objective | str, eta_grid, trials: int,
                seed: int, max_n: int = 12) -> list[ErrorBucket]:
    """Largest observed ratio per prediction-error bucket on random instances."""
    objective = Objective.parse(objective)
    etas = [float(e) for e in eta_grid]
    if any(e < 0 for e in etas) or etas != sorted(etas):
        raise FacilityError("eta grid must be ascending and nonnegative")
    if trials < 1:
        raise FacilityError("trials must be at least 1")
    one_dim = spec.kind is MechanismKind.MINMAXP_1D
    sizes = [n for n in fuzz_sizes(spec, max_n) if n >= 2] or [2 * fuzz_sizes(spec, max_n)[0]]
    buckets = []
    for eta, bucket_ss in zip(etas, np.random.SeedSequence(seed).spawn(len(etas))):
        worst, worst_t = -math.inf, -1
        for t, ss in enumerate(bucket_ss.spawn(trials)):
            rng = np.random.default_rng(ss)
            base = random_instance(int(rng.choice(sizes)), rng, dimension=1 if one_dim else 2)
            arr = base.array()
            o, opt = optimal_facility(arr, objective)
            if opt == 0:
                continue
            inst = Instance(base.points, perturbed_prediction(o, opt, eta, rng, one_dim))
            ratio = social_cost(evaluate(spec, inst), arr, objective) / opt
            if ratio > worst:
                worst, worst_t = ratio, t
        buckets.append(ErrorBucket(eta, worst, theoretical_bound(spec, objective, eta),
                                   trials, worst_t))
    return buckets
