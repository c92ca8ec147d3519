"""Isoperimetric profiles over ball domains, with the fitted exponents.

    python3 scripts/profile_sweep.py [--family balls] [--out-dir results/]
"""

import argparse
import time
from pathlib import Path

from vtl.cayley import default_generators
from vtl.group import HEISENBERG, SOL, Z2
from vtl.profiler import ProfileParams, ProfileReport, isoperimetric_profile, points_csv

SWEEPS = [(Z2, range(3, 16)), (HEISENBERG, range(3, 11)), (SOL, range(3, 10))]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--family", default="balls", choices=["balls", "boxes", "random"])
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out-dir", type=Path)
    args = ap.parse_args()
    params = ProfileParams(seed=args.seed)
    for G, ns in SWEEPS:
        t0 = time.perf_counter()
        points = isoperimetric_profile(G, default_generators(G), args.family, ns, params)
        rep = ProfileReport.build(G, args.family, points)
        print(f"== {G} ({args.family}, n={ns.start}..{ns.stop - 1}, {time.perf_counter() - t0:.1f}s)")
        print(rep.summary(), end="")
        if args.out_dir:
            args.out_dir.mkdir(parents=True, exist_ok=True)
            (args.out_dir / f"profile-{G}-{args.family}.csv").write_text(points_csv(str(G), points))


if __name__ == "__main__":
    main()
