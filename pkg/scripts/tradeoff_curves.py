"""Primary-rate vs secrecy-rate curves for the (4, 4, 1, 1, b=0.3) Gaussian example.

Writes one CSV of frontier points per cross gain and prints the endpoints and
the crossover threshold.

    python3 scripts/tradeoff_curves.py --out-dir results/
"""
import argparse
from pathlib import Path

from cicsec.gaussian import GaussianChannel, crossover_a_dagger
from cicsec.io import atomic_write
from cicsec.region import region_to_csv, sweep_tradeoff


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out-dir", default="results")
    ap.add_argument("--a", default="0.1,0.9", help="comma-separated cross gains")
    args = ap.parse_args()
    out = Path(args.out_dir)
    base = dict(p1=4.0, p2=4.0, k1=1.0, k2=1.0, b=0.3)
    c = crossover_a_dagger(GaussianChannel(**base, a=0.0))
    print(f"crossover a_dagger = {c.value:.6f}")
    for a in (float(t) for t in args.a.split(",")):
        ch = GaussianChannel(**base, a=a)
        for scheme in ("gpc", "spc_perfect"):
            label = f"{scheme}_a={a:g}"
            region = sweep_tradeoff(ch, scheme, label=label)
            path = out / f"{label}.csv"
            atomic_write(path, region_to_csv(region, frontier_only=True, label=label))
            e = region.endpoints()
            print(f"{label:>18}: R1 max {e['r1']:.5f}  secrecy R2 max {e['r2']:.5f}  -> {path}")


if __name__ == "__main__":
    main()
