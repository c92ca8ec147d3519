"""Ball growth for Z^2, Nil and Sol with polynomial and exponential fits.

    python3 scripts/growth_sweep.py [--out growth.csv]
"""

import argparse
import time

from vtl.cayley import default_generators, growth_series
from vtl.group import HEISENBERG, SOL, Z2
from vtl.profiler import exponential_growth_rate, growth_exponent

RUNS = [(Z2, 20, (6, 20)), (HEISENBERG, 14, (6, 14)), (SOL, 12, (6, 12))]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", help="write r,group,ball_size rows here")
    args = ap.parse_args()
    rows = ["group,r,ball_size"]
    for G, rmax, (lo, hi) in RUNS:
        t0 = time.perf_counter()
        series = growth_series(G, default_generators(G), rmax)
        dt = time.perf_counter() - t0
        rows += [f"{G},{r},{n}" for r, n in enumerate(series)]
        degree, r2p = growth_exponent(series, lo, hi)
        rate, _, r2e = exponential_growth_rate(series, lo, hi)
        print(
            f"{G!s:>4}  r<={rmax}  |B|={series[-1]:>9}  degree={degree:.3f} (r2 {r2p:.4f})"
            f"  rate={rate:.3f} (r2 {r2e:.4f})  {dt:.1f}s"
        )
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write("\n".join(rows) + "\n")


if __name__ == "__main__":
    main()
