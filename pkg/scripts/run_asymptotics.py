#!/usr/bin/env python3
"""Empirical decay rate of q-sum residuals against the predicted main term.

Evaluates the harmonic q-sum at primitive m-th roots of unity along a
geometric m-grid, subtracts the regularized-product prediction at
T = log(m/pi) + gamma, and fits |residual| ~ C * m^slope by least squares
in log-log coordinates.

Example:
    python scripts/run_asymptotics.py --N 1 --index "k=2;e=0" --grid "100,10000,8"
"""

import argparse
import math
import sys

import numpy as np

from cmzv.qsums import asymptotic_probe
from cmzv.words import parse_index


def geometric_grid(lo: int, hi: int, count: int, N: int, alpha: int) -> list[int]:
    """Roughly geometric integers in [lo, hi], nudged into the class alpha mod N."""
    raw = np.geomspace(lo, hi, count)
    out = []
    for x in raw:
        m = int(round(x))
        m += (alpha - m) % N
        if m >= 2 and (not out or m > out[-1]):
            out.append(m)
    return out


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--N", type=int, default=1)
    ap.add_argument("--index", default="k=2;e=0")
    ap.add_argument("--alpha", type=int, default=1)
    ap.add_argument("--grid", default="100,10000,6", help="lo,hi,count")
    ap.add_argument("--prec", type=int, default=None)
    args = ap.parse_args()

    ix = parse_index(args.index, args.N)
    lo, hi, count = (int(tok) for tok in args.grid.split(","))
    grid = geometric_grid(lo, hi, count, args.N, args.alpha)
    rows = asymptotic_probe(ix, args.alpha, grid, precision=args.prec)

    print(f"{'m':>9} {'|value|':>14} {'|residual|':>14}")
    for r in rows:
        print(f"{r['m']:>9} {abs(r['value']):>14.8f} {r['residual']:>14.3e}")

    kept = [(r["m"], r["residual"]) for r in rows if r["residual"] > 0]
    if len(kept) >= 2:
        logs_m = np.log([m for m, _ in kept])
        logs_r = np.log([res for _, res in kept])
        slope, intercept = np.polyfit(logs_m, logs_r, 1)
        print(f"fitted decay: |residual| ~ {math.exp(intercept):.3g} * m^{slope:.3f}")
    else:
        print("not enough nonzero residuals to fit a slope")
    return 0


if __name__ == "__main__":
    sys.exit(main())
