"""Check both transport bounds on a seeded corpus of random domains.

    python3 scripts/verify_corpus.py [--count 200] [--max-target 60] [--seed 0]
"""

import argparse
import random
from collections import Counter

from vtl.cayley import default_generators
from vtl.domain import random_connected
from vtl.group import HEISENBERG, SOL, Z2
from vtl.transport import verify_bounds

GROUPS = (Z2, HEISENBERG, SOL)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--count", type=int, default=200)
    ap.add_argument("--max-target", type=int, default=60)
    ap.add_argument("--max-mult", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    held, total = Counter(), Counter()
    worst = {}
    for i in range(args.count):
        G = GROUPS[i % 3]
        D = random_connected(
            G, default_generators(G), rng.randint(1, args.max_target), rng.randint(1, args.max_mult),
            rng.getrandbits(64),
        )
        rep = verify_bounds(D, check=False)
        name = str(G)
        total[name] += 1
        held[name] += rep.averaging_bound_holds and rep.length_bound_holds and rep.witness_holds
        # tightest averaging margin: average / (mass/2), closest to 1 is tightest
        margin = rep.average / rep.mass * 2
        worst[name] = min(worst.get(name, margin), margin)
    for name in total:
        print(f"{name:>4}: {held[name]}/{total[name]} domains satisfy all bounds, "
              f"tightest average/(mass/2) = {float(worst[name]):.4f}")


if __name__ == "__main__":
    main()
