#!/usr/bin/env python3
"""Sweep dimension tables across levels and compare with the motivic counts.

Example:
    python scripts/run_dimension_tables.py --levels 1,2,3,4 --wmax 4 --jobs 4
"""

import argparse
import sys
import time

from cmzv.relations import DimConfig, dimension_table


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--levels", default="1,2,3", help="comma-separated N values")
    ap.add_argument("--alpha", type=int, default=1)
    ap.add_argument("--wmax", type=int, default=4)
    ap.add_argument("--primes", type=int, default=24)
    ap.add_argument("--verify-primes", type=int, default=12)
    ap.add_argument("--height-bound", type=int, default=1000)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--no-cache", action="store_true")
    args = ap.parse_args()

    print(f"{'N':>3} {'w':>3} {'gens':>6} {'exact':>6} {'lll':>5} {'dim':>4} {'mt':>4}  agree")
    mismatches = 0
    for N in (int(tok) for tok in args.levels.split(",")):
        alpha = args.alpha if N > 1 else 0
        cfg = DimConfig(
            train_primes=args.primes,
            verify_primes=args.verify_primes,
            height_bound=args.height_bound,
            jobs=args.jobs,
            use_cache=not args.no_cache,
        )
        start = time.time()
        for rep in dimension_table(N, alpha % N if N > 1 else 0, args.wmax, cfg):
            agree = rep.dim_estimate == rep.mt_dim
            mismatches += not agree
            print(
                f"{rep.N:>3} {rep.weight:>3} {rep.generator_count:>6} "
                f"{rep.exact_relation_rank:>6} {rep.lll_extra_relations:>5} "
                f"{rep.dim_estimate:>4} {rep.mt_dim:>4}  {'yes' if agree else 'NO'}"
            )
        print(f"  level {N}: {time.time() - start:.1f}s")
    if mismatches:
        print(f"{mismatches} weight(s) disagree with the motivic count", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
