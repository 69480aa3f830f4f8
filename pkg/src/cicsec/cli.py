"""Command-line interface: ``cicsec <command> [options]``.

Every artifact starts with a reproducibility header (command, full
configuration, seed, version). Files are written atomically. Failures print
one JSON error record on stderr and exit nonzero.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from typing import Sequence

import numpy as np

from . import __version__
from .constraints import RegionConstraints
from .dmc import (
    Scheme,
    eval_binning_inner,
    eval_outer,
    eval_superposition_inner,
    eval_superposition_symmetric,
    eval_symmetric_secrecy,
    project_superposition,
)
from .errors import ArgumentError, CicError
from .gaussian import (
    GaussianChannel,
    GpcParams,
    Interference,
    SpcParams,
    classify_interference,
    crossover_a_dagger,
    eval_gpc,
    eval_outer_strong,
    eval_spc,
    eval_spc_perfect,
)
from .io import atomic_write, dumps, gaussian_from_dict, header, load_channel, load_input, load_json
from .region import boundary_curve, region_to_dict, sweep_tradeoff
from .search import SearchConfig, optimize_region
from .sim import SimConfig, SimRates, clean_toy, compute_bin_rates, run_experiment

WORKERS_ENV = "CICSEC_WORKERS"
CSV_DIGITS = 12
EXIT_USAGE = 2
EXIT_FAILURE = 1


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ArgumentError(message)


def parse_sweep(text: str) -> list[float]:
    """``"0.1,0.9"`` or ``"start:stop:step"`` (stop included within rounding)."""
    text = text.strip()
    try:
        if ":" in text:
            parts = [float(t) for t in text.split(":")]
            if len(parts) != 3 or parts[2] <= 0:
                raise ValueError
            start, stop, step = parts
            count = int(math.floor((stop - start) / step + 1e-9)) + 1
            if count < 1:
                raise ValueError
            return [round(start + i * step, 12) for i in range(count)]
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise ArgumentError(f"bad sweep {text!r}: use a,b,c or start:stop:step") from None


def _fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.{CSV_DIGITS}g}"
    return "" if x is None else str(x)


def _csv(rows: list[dict], hdr: dict) -> str:
    buf = io.StringIO()
    buf.write("# " + json.dumps(hdr, sort_keys=True) + "\n")
    cols: list[str] = []
    for r in rows:
        cols += [k for k in r if k not in cols]
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for r in rows:
        w.writerow([_fmt(r.get(c)) for c in cols])
    return buf.getvalue()


def _emit(args, payload, rows: list[dict] | None, text: str | None = None):
    hdr = header(args.command, _config(args), getattr(args, "seed", None))
    fmt = args.format or ("csv" if args.out and args.out.endswith(".csv") else None)
    if fmt == "csv":
        if rows is None:
            raise ArgumentError(f"{args.command} has no CSV form; use --format json")
        out = _csv(rows, hdr)
    elif fmt == "json" or text is None:
        out = dumps({"header": hdr, "result": payload})
    else:
        out = text
    if args.out:
        atomic_write(args.out, out)
    else:
        sys.stdout.write(out)


def _config(args) -> dict:
    skip = {"func", "out"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


# ------------------------------------------------------------------ gaussian

def _gaussian_base(args, required=("p1", "p2", "k1", "k2", "b")) -> dict:
    d = dict(gaussian_from_dict(load_json(args.channel)).__dict__) if args.channel else {}
    for k in ("p1", "p2", "k1", "k2", "b"):
        v = getattr(args, k)
        if v is not None:
            d[k] = v
    missing = [k for k in required if k not in d]
    if missing:
        raise ArgumentError(f"missing channel parameters {missing}")
    return d


def _a_values(args, base) -> list[float]:
    if args.a is not None:
        return parse_sweep(args.a)
    if "a" in base:
        return [base["a"]]
    raise ArgumentError("missing channel parameter a")


def _constraint_rows(cons: RegionConstraints, params: dict) -> list[dict]:
    rows = []
    for b in cons.bounds:
        row = dict(params, label=b.label)
        row.update({f"coeff_{a}": float(c) for a, c in zip(cons.axes, b.coeffs)})
        row["value"] = float(b.value)
        rows.append(row)
    return rows


def cmd_gaussian(args):
    base = _gaussian_base(args)
    rhos = parse_sweep(args.rho) if args.rho else [1.0 if args.scheme == "spc" else 0.0]
    rho1s, rho2s = parse_sweep(args.rho1), parse_sweep(args.rho2)
    jobs = []
    # validate every combination before evaluating any
    for a in _a_values(args, base):
        ch = GaussianChannel(**dict(base, a=a))
        kind = classify_interference(ch)
        if args.scheme == "outer_strong":
            if kind is not Interference.STRONG:
                eval_outer_strong(ch)  # raises the precondition error
        elif kind is not Interference.WEAK:
            eval_gpc(ch)
        for rho in rhos:
            if args.scheme == "spc":
                for r1 in rho1s:
                    for r2 in rho2s:
                        jobs.append((ch, {"rho": rho, "rho1": r1, "rho2": r2},
                                     SpcParams(rho, r1, r2)))
            else:
                jobs.append((ch, {"rho": rho}, GpcParams(rho)))
    results, rows = [], []
    for ch, params, p in jobs:
        if args.scheme == "gpc":
            cons = eval_gpc(ch, p)
        elif args.scheme == "outer_strong":
            cons = eval_outer_strong(ch, p.rho)
        elif args.scheme == "spc":
            cons = eval_spc(ch, p)
        else:
            cons = eval_spc_perfect(ch)
        params = dict(ch.to_dict(), **params)
        results.append({"params": params, "constraints": cons.to_dict()})
        rows += _constraint_rows(cons, params)
    _emit(args, results, rows)


def cmd_crossover(args):
    # the threshold depends on powers and state variances only
    base = _gaussian_base(args, ("p1", "p2", "k1", "k2"))
    base.setdefault("b", 0.0)
    base["a"] = args.a if args.a is not None else base.get("a", 0.0)
    ch = GaussianChannel(**base)
    c = crossover_a_dagger(ch)
    rec = {"value": c.value, "numerator": c.numerator, "denominator": c.denominator,
           "diagnosis": c.diagnosis, "spc_wins_below": c.spc_wins_below}
    text = f"{c.value:.6f}\n" if c.defined else f"{c.diagnosis}\n"
    _emit(args, rec, [rec], text)


# ------------------------------------------------------------------ dmc

DMC_BOUNDS = ("binning", "superposition", "superposition_split", "symmetric",
              "symmetric_secrecy", "thm3", "thm4", "thm8")


def cmd_dmc(args):
    ch = load_channel(args.channel)
    f = load_input(args.input)
    b = args.bound
    if b == "binning":
        cons = eval_binning_inner(ch, f)
    elif b == "superposition":
        cons = project_superposition(eval_superposition_inner(ch, f))
    elif b == "superposition_split":
        cons = eval_superposition_inner(ch, f)
    elif b == "symmetric":
        cons = eval_superposition_symmetric(ch, f)
    elif b == "symmetric_secrecy":
        val = eval_symmetric_secrecy(ch, f)
        rec = {"secrecy_rate": val}
        return _emit(args, rec, [rec])
    else:
        cons = eval_outer(ch, f, b, coupling_search=args.coupling_search)
    _emit(args, cons.to_dict(), _constraint_rows(cons, {}))


# ------------------------------------------------------------------ optimize

def _aux(text: str | None) -> dict[str, int]:
    if not text:
        return {}
    out = {}
    for item in text.split(","):
        k, _, v = item.partition("=")
        if not v:
            raise ArgumentError(f"bad --aux item {item!r}; use U=2,V=3")
        out[k.strip()] = int(v)
    return out


def cmd_optimize(args):
    ch = load_channel(args.channel)
    weights = tuple(parse_sweep(args.weights))
    if len(weights) != 3:
        raise ArgumentError("--weights needs three values for r1,r2,re2")
    cfg = SearchConfig(mode=args.mode, resolution=args.resolution, samples=args.samples,
                       seed=args.seed, aux_sizes=_aux(args.aux), objective=args.objective,
                       r1=args.r1, weights=weights, max_candidates=args.max_candidates,
                       workers=args.workers)
    res = optimize_region(ch, Scheme(args.scheme), cfg)
    rec = {
        "found": res.found, "objective": res.objective, "index": res.index,
        "point": res.point, "evaluated": res.evaluated,
        "feasible_count": res.feasible_count, "meta": res.meta,
        "constraints": res.constraints.to_dict() if res.constraints else None,
        "best": res.best.to_dict() if res.best else None,
    }
    row = {"found": int(res.found), "objective": res.objective, "index": res.index,
           "evaluated": res.evaluated, "feasible_count": res.feasible_count}
    row.update(res.point or {})
    _emit(args, rec, [row])


# ------------------------------------------------------------------ simulate

def cmd_simulate(args):
    if args.toy:
        ch, design = clean_toy("x1" if args.toy == "clean" else "x2")
    elif args.channel and args.input:
        ch, design = load_channel(args.channel), load_input(args.input)
    else:
        raise ArgumentError("simulate needs --toy or both --channel and --input")
    split = {k: getattr(args, k) for k in ("r1a", "r1b", "r2a", "r2b")}
    if args.delta is not None:
        rates = compute_bin_rates(ch, design, args.delta, **split).__dict__
    else:
        rates = dict(split)
    for k in ("r2a_bin", "r2b_bin", "l1"):
        if getattr(args, k) is not None:
            rates[k] = getattr(args, k)
    rates = SimRates(**rates)
    cfg = SimConfig(ch, design, n=args.n, epsilon=args.epsilon, trials=args.trials,
                    seed=args.seed, subbin_rate=args.subbin_rate,
                    max_enumeration=args.max_enumeration, workers=args.workers)
    res = run_experiment(cfg, rates, keep_trace=bool(args.trace))
    rec = dict(res.to_dict(), rates=rates.__dict__)
    if args.trace:
        atomic_write(args.trace, res.trace_csv())
    row = {k: v for k, v in res.to_dict().items() if k != "equivocation_note"}
    _emit(args, rec, [row])


# ------------------------------------------------------------------ tradeoff

def cmd_tradeoff(args):
    base = _gaussian_base(args)
    schemes = [s.strip() for s in args.schemes.split(",") if s.strip()]
    for s in schemes:
        if s not in ("gpc", "spc_perfect", "spc"):
            raise ArgumentError(f"unknown tradeoff scheme {s!r}")
    chans = []
    for a in _a_values(args, base):
        ch = GaussianChannel(**dict(base, a=a))
        if classify_interference(ch) is not Interference.WEAK:
            eval_gpc(ch)
        chans.append(ch)
    grid = {"rho": np.linspace(0.0, 1.0, args.rho_points).tolist()}
    curves, rows = [], []
    for ch in chans:
        for s in schemes:
            label = f"{s}_a={ch.a:g}"
            region = sweep_tradeoff(ch, s, grid if s == "gpc" else None, label=label)
            pts = sorted(region.frontier_points(), key=lambda p: (p.r1, -p.r2))
            curves.append({"label": label, "scheme": s, "a": ch.a,
                           "curve": boundary_curve(region), "region": region_to_dict(region)})
            for p in pts:
                rows.append({"curve": label, "r1": p.r1, "r2": p.r2, "re2": p.re2,
                             "provenance": json.dumps(p.provenance, sort_keys=True)})
    _emit(args, curves, rows)


# ------------------------------------------------------------------ parser

def _gaussian_flags(p, sweep_a: bool = False):
    p.add_argument("--channel", help="JSON file with p1, p2, k1, k2, a, b; flags override it")
    for k in ("p1", "p2", "k1", "k2", "b"):
        p.add_argument(f"--{k}", type=float)
    if sweep_a:
        p.add_argument("--a", help="cross gain: value, list a,b or start:stop:step")
    else:
        p.add_argument("--a", type=float)


def _common(p):
    p.add_argument("--out", help="output file (default stdout)")
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int,
                   default=int(os.environ.get(WORKERS_ENV, "1") or 1),
                   help=f"worker processes (default ${WORKERS_ENV} or 1)")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="cicsec", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("gaussian", help="closed-form Gaussian bounds")
    _gaussian_flags(p, sweep_a=True)
    p.add_argument("--scheme", required=True,
                   choices=("gpc", "spc", "spc_perfect", "outer_strong"))
    p.add_argument("--rho", help="sweep of rho")
    p.add_argument("--rho1", default="0", help="sweep of rho1 (spc)")
    p.add_argument("--rho2", default="0", help="sweep of rho2 (spc)")
    _common(p)
    p.set_defaults(func=cmd_gaussian)

    p = sub.add_parser("crossover", help="cross-gain threshold between GPC and SPC")
    _gaussian_flags(p)
    _common(p)
    p.set_defaults(func=cmd_crossover)

    p = sub.add_parser("dmc", help="evaluate a finite-alphabet bound")
    p.add_argument("--channel", required=True)
    p.add_argument("--input", required=True, help="factored input JSON")
    p.add_argument("--bound", required=True, choices=DMC_BOUNDS)
    p.add_argument("--coupling-search", type=int, default=None,
                   help="grid points for the thm4 coupling search (binary outputs)")
    _common(p)
    p.set_defaults(func=cmd_dmc)

    p = sub.add_parser("optimize", help="search an inner bound over input laws")
    p.add_argument("--channel", required=True)
    p.add_argument("--scheme", default="binning", choices=("binning", "superposition"))
    p.add_argument("--mode", default="grid", choices=("grid", "random"))
    p.add_argument("--resolution", type=int, default=3)
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--objective", default="re2", choices=("re2", "r2_at_r1", "weighted"))
    p.add_argument("--r1", type=float, default=0.0)
    p.add_argument("--weights", default="1,1,0")
    p.add_argument("--aux", help="auxiliary caps, e.g. U=2,V=3,T=1")
    p.add_argument("--max-candidates", type=int, default=200_000)
    _common(p)
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("simulate", help="Monte Carlo binning code experiment")
    p.add_argument("--toy", choices=("clean", "leaky"),
                   help="clean: Y1=X1, Y2=X2; leaky: Y1=Y2=X2")
    p.add_argument("--channel")
    p.add_argument("--input", help="binning design distribution JSON")
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--epsilon", type=float, default=0.1)
    p.add_argument("--trials", type=int, default=100)
    for k in ("r1a", "r1b", "r2a", "r2b"):
        p.add_argument(f"--{k}", type=float, default=0.0)
    p.add_argument("--delta", type=float, help="derive bin and partition rates with this margin")
    p.add_argument("--r2a-bin", type=float)
    p.add_argument("--r2b-bin", type=float)
    p.add_argument("--l1", type=float)
    p.add_argument("--subbin-rate", type=float)
    p.add_argument("--max-enumeration", type=int, default=2 ** 24)
    p.add_argument("--trace", help="per-trial CSV trace file")
    _common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("tradeoff", help="primary rate vs secrecy rate curves")
    _gaussian_flags(p, sweep_a=True)
    p.add_argument("--schemes", default="gpc,spc_perfect")
    p.add_argument("--rho-points", type=int, default=101)
    _common(p)
    p.set_defaults(func=cmd_tradeoff)
    return ap


def _error_record(kind: str, message: str, command: str | None) -> None:
    rec = {"error": {"kind": kind, "message": message, "command": command,
                     "version": __version__}}
    sys.stderr.write(json.dumps(rec, sort_keys=True) + "\n")


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    command = next((a for a in argv if not a.startswith("-")), None)
    try:
        args = build_parser().parse_args(argv)
        if args.workers < 1:
            raise ArgumentError("--workers must be >= 1")
        args.func(args)
    except CicError as e:
        _error_record(e.kind, str(e), command)
        return EXIT_USAGE
    except NotImplementedError as e:
        _error_record("not_implemented", str(e), command)
        return EXIT_FAILURE
    except (ValueError, OSError, MemoryError) as e:
        _error_record(type(e).__name__, str(e), command)
        return EXIT_FAILURE
    return 0


if __name__ == "__main__":
    sys.exit(main())
