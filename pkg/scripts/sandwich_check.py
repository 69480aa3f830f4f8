"""Check optimizer-found inner points against the inputs-only outer bound.

For random binary channels, searches both inner schemes and reports every
outer constraint that the inner point violates at the induced input law.

    python3 scripts/sandwich_check.py --channels 20 --samples 60
"""
import argparse

import numpy as np

from cicsec.dmc import eval_outer
from cicsec.search import SearchConfig, optimize_region, random_channel

SCHEMES = (("binning", {"U": 2, "V": 2}), ("superposition", {"T": 1, "U": 2, "V": 2}))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--channels", type=int, default=20)
    ap.add_argument("--samples", type=int, default=60)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--stateless", action="store_true", help="use |S1| = |S2| = 1")
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    sizes = {"S1": 1, "S2": 1} if args.stateless else None
    counts = {s: 0 for s, _ in SCHEMES}
    for i in range(args.channels):
        ch = random_channel(rng, sizes)
        for scheme, aux in SCHEMES:
            cfg = SearchConfig(mode="random", samples=args.samples, seed=i, aux_sizes=aux)
            res = optimize_region(ch, scheme, cfg)
            if not res.found:
                continue
            slack = eval_outer(ch, res.best, "thm4").slack(res.point)
            bad = {k: v for k, v in slack.items() if v < -1e-9}
            if bad:
                counts[scheme] += 1
                detail = ", ".join(f"{k} {v:+.4f}" for k, v in sorted(bad.items()))
                print(f"channel {i:>3} {scheme:<13} point "
                      f"({res.point['r1']:.4f}, {res.point['r2']:.4f}, {res.point['re2']:.4f}) "
                      f"violates {detail}")
    print("violations:", counts)


if __name__ == "__main__":
    main()
