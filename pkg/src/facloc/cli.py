"""Command-line harness: ``facloc {evaluate,sweep-c,error-curve,fuzz,coa-verify,gen}``.

Exit codes: 0 when every check holds, 1 for usage or I/O errors, 2 when a
mathematical check fails (bound exceeded, strategyproofness violation).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass

from . import adversarial as adv
from .geometry import FacilityError
from .io import dumps, read_instance
from .mechanisms import MechanismKind, MechanismSpec
from .metrics import approximation_ratio, theoretical_bound
from .oracles import Objective

EXIT_OK, EXIT_USAGE, EXIT_DISCREPANCY = 0, 1, 2

RESULT_COLUMNS = ["mechanism", "confidence", "objective", "n", "source", "mechanism_cost",
                  "optimal_cost", "ratio", "eta", "bound", "within_bound"]
SWEEP_COLUMNS = ["c", "theoretical_consistency", "theoretical_robustness",
                 "achieved_consistency", "achieved_robustness", "n", "error"]
ERROR_CURVE_COLUMNS = ["eta_bucket", "max_observed_ratio", "bound"]
COA_COLUMNS = ["c", "mode", "x_star", "search_max", "closed_form", "delta"]
GENERATORS = ["lemma42-consistency", "lemma42-robustness", "theorem33", "minmaxp-tight", "random"]

DEFAULT_C_LIST = "0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9"
EGALITARIAN_DEFAULT = {MechanismKind.MINMAXP_1D, MechanismKind.MINIMUM_BOUNDING_BOX}


class UsageError(Exception):
    pass


@dataclass
class ResultRow:
    mechanism: str
    confidence: float
    objective: str
    n: int
    source: str
    mechanism_cost: float
    optimal_cost: float
    ratio: float
    eta: float
    bound: float | None
    within_bound: bool | None


def fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return format(value, ".9g")
    return str(value)


def render(rows: list[dict], columns: list[str], fmt_name: str) -> str:
    if fmt_name == "json":
        clean = [{k: (None if isinstance(r[k], float) and math.isinf(r[k]) else r[k])
                  for k in columns} for r in rows]
        return json.dumps(clean, indent=1) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([fmt(r[k]) for k in columns])
    return buf.getvalue()


def emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def parse_floats(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"expected a comma-separated list of numbers, got {text!r}") from None


def make_spec(args) -> MechanismSpec:
    return MechanismSpec(MechanismKind(args.mechanism), args.confidence)


def objective_for(args, spec: MechanismSpec) -> Objective:
    if args.objective:
        return Objective.parse(args.objective)
    return Objective.EGALITARIAN if spec.kind in EGALITARIAN_DEFAULT else Objective.UTILITARIAN


def default_tolerance(objective: Objective) -> float:
    return 1e-6 if objective is Objective.EGALITARIAN else 1e-5


# -- commands --------------------------------------------------------------

def cmd_evaluate(args) -> int:
    spec = make_spec(args)
    f = read_instance(args.instance)
    objective = objective_for(args, spec)
    tol = args.tolerance if args.tolerance is not None else default_tolerance(objective)
    rec = approximation_ratio(spec, f.instance, objective)
    bound = None if rec.degenerate else theoretical_bound(spec, objective, rec.prediction_error)
    within = None if bound is None else rec.ratio <= bound + tol
    row = ResultRow(spec.kind.value, spec.confidence, objective.value, f.instance.n,
                    f.metadata.get("source", args.instance), rec.mechanism_cost, rec.optimal_cost,
                    rec.ratio, rec.prediction_error, bound, within)
    emit(render([vars(row)], RESULT_COLUMNS, args.format), args.out)
    return EXIT_DISCREPANCY if within is False else EXIT_OK


def cmd_sweep_c(args) -> int:
    if args.objective and Objective.parse(args.objective) is not Objective.UTILITARIAN:
        raise UsageError("sweep-c reproduces the utilitarian trade-off only")
    tol = args.tolerance if args.tolerance is not None else 1e-6
    rows = adv.sweep_c(parse_floats(args.c_list), args.n)
    emit(render([vars(r) for r in rows], SWEEP_COLUMNS, args.format), args.out)
    if any(r.error for r in rows):
        return EXIT_USAGE
    for r in rows:
        if (abs(r.achieved_consistency - r.theoretical_consistency) > tol
                or abs(r.achieved_robustness - r.theoretical_robustness) > tol):
            return EXIT_DISCREPANCY
    return EXIT_OK


def cmd_error_curve(args) -> int:
    spec = make_spec(args)
    objective = objective_for(args, spec)
    tol = args.tolerance if args.tolerance is not None else default_tolerance(objective)
    buckets = adv.error_curve(spec, objective, parse_floats(args.eta_grid), args.trials,
                              args.seed, max_n=args.max_n)
    rows = [{"eta_bucket": b.eta, "max_observed_ratio": b.max_ratio, "bound": b.bound}
            for b in buckets]
    emit(render(rows, ERROR_CURVE_COLUMNS, args.format), args.out)
    bad = [b for b in buckets if b.bound is not None and b.max_ratio > b.bound + tol]
    return EXIT_DISCREPANCY if bad else EXIT_OK


def cmd_fuzz(args) -> int:
    spec = make_spec(args)
    report = adv.strategyproofness_fuzz(spec, args.trials, args.seed, max_n=args.max_n)
    emit(json.dumps(report.to_dict(), indent=1) + "\n", args.out)
    if not report.ok:
        trials = sorted({v.trial for v in report.violations})
        print(f"{len(report.violations)} violations; reproduce with --seed {args.seed}, "
              f"trials {trials[:10]}", file=sys.stderr)
        return EXIT_DISCREPANCY
    return EXIT_OK


def cmd_coa_verify(args) -> int:
    tol = args.tolerance if args.tolerance is not None else 1e-6
    rows = []
    for c in parse_floats(args.c_list):
        for mode in adv.CoaMode:
            r = adv.coa_search(c, mode, args.resolution)
            rows.append({"c": c, "mode": mode.value, "x_star": r.x_star, "search_max": r.max_ratio,
                         "closed_form": r.closed_form, "delta": r.delta})
    emit(render(rows, COA_COLUMNS, args.format), args.out)
    return EXIT_DISCREPANCY if any(r["delta"] >= tol for r in rows) else EXIT_OK


def cmd_gen(args) -> int:
    name = args.generator
    meta = {"generator": name}
    if name in ("lemma42-consistency", "lemma42-robustness"):
        if args.c is None:
            raise UsageError(f"{name} needs --c")
        c = args.c
        n = args.n if args.n is not None else adv.lemma42_smallest_n(c)
        builder = (adv.lemma42_consistency_instance if name == "lemma42-consistency"
                   else adv.lemma42_robustness_instance)
        inst = builder(c, n)
        meta.update(c=repr(c), n=str(n))
    elif name == "theorem33":
        inst = adv.theorem33_robustness_instance()
    elif name == "minmaxp-tight":
        inst = adv.minmaxp_tightness_instance()
        meta["dimension"] = "1"
    else:
        if args.n is None:
            raise UsageError("random needs --n")
        objective = Objective.parse(args.objective or "utilitarian")
        inst = adv.random_instance(args.n, args.seed, prediction_mode=args.prediction_mode,
                                   objective=objective, dimension=args.dimension)
        meta.update(n=str(args.n), seed=str(args.seed), prediction_mode=args.prediction_mode)
        if args.prediction_mode == "oracle":
            meta["objective"] = objective.value
        if args.dimension == 1:
            meta["dimension"] = "1"
    emit(dumps(inst, meta), args.out)
    return EXIT_OK


# -- parser ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", default=None, help="write output here instead of stdout")
    common.add_argument("--format", choices=["csv", "json"], default="csv")
    common.add_argument("--objective", choices=[o.value for o in Objective], default=None)
    common.add_argument("--mechanism", choices=[k.value for k in MechanismKind], default="mbb")
    common.add_argument("--confidence", type=float, default=0.0)
    common.add_argument("--tolerance", type=float, default=None)

    parser = argparse.ArgumentParser(prog="facloc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("evaluate", parents=[common], help="ratio of one mechanism on one instance file")
    p.add_argument("instance")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("sweep-c", parents=[common], help="CMP consistency/robustness per confidence")
    p.add_argument("--c-list", default=DEFAULT_C_LIST)
    p.add_argument("--n", type=int, default=None)
    p.set_defaults(func=cmd_sweep_c)

    p = sub.add_parser("error-curve", parents=[common], help="max ratio per prediction-error bucket")
    p.add_argument("--eta-grid", default="0,0.25,0.5,1,1.4142135623730951,3")
    p.add_argument("--trials", type=int, default=500)
    p.add_argument("--max-n", type=int, default=12)
    p.set_defaults(func=cmd_error_curve)

    p = sub.add_parser("fuzz", parents=[common], help="search for profitable misreports")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--max-n", type=int, default=9)
    p.set_defaults(func=cmd_fuzz)

    p = sub.add_parser("coa-verify", parents=[common], help="1-D COA search against closed forms")
    p.add_argument("--c-list", default=DEFAULT_C_LIST)
    p.add_argument("--resolution", type=int, default=2000)
    p.set_defaults(func=cmd_coa_verify)

    p = sub.add_parser("gen", parents=[common], help="write a generated instance file")
    p.add_argument("generator", choices=GENERATORS)
    p.add_argument("--c", type=float, default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--prediction-mode", choices=[m.value for m in adv.PredictionMode],
                   default="uniform")
    p.add_argument("--dimension", type=int, choices=[1, 2], default=2)
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (FacilityError, UsageError, OSError) as exc:
        print(f"facloc {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
