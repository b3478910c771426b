"""Consistency/robustness trade-off of CMP as the confidence c varies.

Writes the sweep table as CSV and, if matplotlib is importable, a plot.
"""

import argparse
import sys

import numpy as np

from facloc.adversarial import sweep_c
from facloc.cli import SWEEP_COLUMNS, render


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--points", type=int, default=10, help="number of c values in [0, 0.9]")
    ap.add_argument("--out", default="sweep.csv")
    ap.add_argument("--plot", default=None, help="optional PNG path")
    args = ap.parse_args()

    cs = np.round(np.linspace(0, 0.9, args.points), 12)
    rows = sweep_c(cs.tolist())
    bad = [r for r in rows if r.error]
    with open(args.out, "w") as fh:
        fh.write(render([vars(r) for r in rows], SWEEP_COLUMNS, "csv"))
    print(f"wrote {args.out} ({len(rows)} rows, {len(bad)} errors)")
    if args.plot:
        try:
            import matplotlib.pyplot as plt
        except ImportError:
            print("matplotlib not installed; skipping plot", file=sys.stderr)
            return 1 if bad else 0
        ok = [r for r in rows if not r.error]
        xs = [r.c for r in ok]
        plt.plot(xs, [r.theoretical_consistency for r in ok], label="consistency bound")
        plt.plot(xs, [r.theoretical_robustness for r in ok], label="robustness bound")
        plt.scatter(xs, [r.achieved_consistency for r in ok], marker="x", label="achieved")
        plt.scatter(xs, [r.achieved_robustness for r in ok], marker="x")
        plt.yscale("log")
        plt.xlabel("confidence c")
        plt.ylabel("approximation ratio")
        plt.legend()
        plt.savefig(args.plot, dpi=150)
        print(f"wrote {args.plot}")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
