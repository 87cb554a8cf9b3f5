"""Tabulate the certified bound on n for k = 1..K with both solving methods.

    python3 scripts/run_bounds.py --k-max 8 --out results/bounds.csv
"""

import argparse
import csv
import math
import sys
import time
from fractions import Fraction

from fibpow import bound_pipeline as bp


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--k-max", type=int, default=8)
    ap.add_argument("--delta", type=Fraction, default=Fraction(1, 2))
    ap.add_argument("--out", help="CSV destination (default stdout)")
    args = ap.parse_args(argv)

    rows = []
    for k in range(1, args.k_max + 1):
        chosen = bp.max_over_paths(k)
        for method in ("iteration", "lemma10"):
            t = time.perf_counter()
            fb = bp.finish(k, method, args.delta)
            rows.append({
                "k": k,
                "method": fb.method,
                "x_chosen": str(chosen.x),
                "log10_c_chosen": f"{math.log10(chosen.c.numerator) - math.log10(chosen.c.denominator):.4f}",
                "log10_n_bound": f"{fb.log10_n_bound:.4f}",
                "iterations": fb.iterations,
                "seconds": f"{time.perf_counter() - t:.3f}",
            })
            print(f"k={k} {fb.method:<16} log10(n) <= {fb.log10_n_bound:.4f}", file=sys.stderr)

    out = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        w = csv.DictWriter(out, fieldnames=list(rows[0]))
        w.writeheader()
        w.writerows(rows)
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


if __name__ == "__main__":
    sys.exit(main())
