"""Median error probability of the binning code vs blocklength on the clean toy.

    python3 scripts/sim_trends.py --eps 0.1,0.5,0.9 --seeds 20
"""
import argparse
import dataclasses

import numpy as np

from cicsec.sim import SimConfig, clean_toy, compute_bin_rates, run_experiment


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--eps", default="0.1,0.5,0.9")
    ap.add_argument("--n", default="4,8,12")
    ap.add_argument("--seeds", type=int, default=20)
    ap.add_argument("--trials", type=int, default=30)
    ap.add_argument("--r1b", type=float, default=0.5)
    ap.add_argument("--r2a", type=float, default=0.5)
    args = ap.parse_args()
    ch, des = clean_toy()
    rates = compute_bin_rates(ch, des, 0.1, r1b=args.r1b, r2a=args.r2a)
    rates = dataclasses.replace(rates, l1=0.0)
    print("eps      " + "  ".join(f"n={n:>3}" for n in args.n.split(",")))
    for eps in (float(e) for e in args.eps.split(",")):
        meds = []
        for n in (int(v) for v in args.n.split(",")):
            pes = [run_experiment(SimConfig(ch, des, n=n, epsilon=eps, trials=args.trials,
                                            seed=s, max_enumeration=0), rates).pe
                   for s in range(args.seeds)]
            meds.append(float(np.median(pes)))
        print(f"{eps:<8} " + "  ".join(f"{m:6.3f}" for m in meds))


if __name__ == "__main__":
    main()
