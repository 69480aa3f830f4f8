"""Rate-point clouds: Pareto frontiers, time-sharing, containment and sweeps."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy.optimize import linprog

from .constraints import RegionConstraints
from .errors import ArgumentError, WeakInterferenceError
from .gaussian import (
    GaussianChannel,
    GpcParams,
    Interference,
    SpcParams,
    classify_interference,
    eval_gpc,
    eval_spc,
    eval_spc_perfect,
)

DEFAULT_LAMBDAS = 101
CSV_DIGITS = 12


@dataclass(frozen=True)
class RatePoint:
    r1: float
    r2: float
    re2: float
    provenance: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        for name in ("r1", "r2", "re2"):
            v = getattr(self, name)
            if not math.isfinite(v) or v < 0:
                raise ArgumentError(f"{name}={v!r}: rates must be finite and >= 0")
        if self.re2 > self.r2 + 1e-12:
            raise ArgumentError(f"re2={self.re2} exceeds r2={self.r2}")

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.r1, self.r2, self.re2)


@dataclass(frozen=True)
class Region:
    points: tuple[RatePoint, ...]
    frontier: tuple[int, ...]
    convexified: bool = False

    def frontier_points(self) -> list[RatePoint]:
        return [self.points[i] for i in self.frontier]

    def array(self, frontier_only: bool = False) -> np.ndarray:
        pts = self.frontier_points() if frontier_only else self.points
        return np.array([p.as_tuple() for p in pts], dtype=float).reshape(-1, 3)

    def endpoints(self) -> dict[str, float]:
        a = self.array()
        return {"r1": float(a[:, 0].max()), "r2": float(a[:, 1].max()),
                "re2": float(a[:, 2].max())}


def _frontier_indices(arr: np.ndarray) -> list[int]:
    """Indices of points no other point weakly dominates; duplicates keep the first."""
    n = len(arr)
    # any dominator precedes its victim in this order
    order = np.lexsort((np.arange(n), -arr[:, 2], -arr[:, 1], -arr[:, 0], -arr.sum(axis=1)))
    kept: list[int] = []
    kept_arr = np.empty((n, 3))
    for i in order:
        p = arr[i]
        if kept and np.any(np.all(kept_arr[:len(kept)] >= p, axis=1)):
            continue
        kept_arr[len(kept)] = p
        kept.append(int(i))
    return sorted(kept)


def pareto_frontier(points: Sequence[RatePoint]) -> Region:
    points = tuple(points)
    if not points:
        raise ArgumentError("pareto_frontier needs at least one point")
    arr = np.array([p.as_tuple() for p in points], dtype=float)
    return Region(points, tuple(_frontier_indices(arr)))


def time_share_hull(region: Region, samples: int = DEFAULT_LAMBDAS) -> Region:
    """Add gridded convex combinations of frontier pairs, then re-extract the frontier.

    The result is marked convexified, so :func:`contains` tests membership in
    the exact convex hull of the frontier rather than the finite grid.
    """
    if samples < 2:
        raise ArgumentError("samples must be >= 2")
    fr = region.frontier_points()
    lams = np.linspace(0.0, 1.0, samples)[1:-1]
    new = list(region.points)
    base = {id(p): i for i, p in enumerate(region.points)}
    for a in range(len(fr)):
        for b in range(a + 1, len(fr)):
            p, q = fr[a], fr[b]
            pa, qa = np.array(p.as_tuple()), np.array(q.as_tuple())
            for lam in lams:
                c = lam * pa + (1 - lam) * qa
                new.append(RatePoint(float(c[0]), float(c[1]), min(float(c[2]), float(c[1])),
                                     {"time_share": [base[id(p)], base[id(q)]],
                                      "lambda": float(lam)}))
    out = pareto_frontier(new)
    return Region(out.points, out.frontier, True)


def _hull_contains(fr: np.ndarray, p: np.ndarray, tol: float) -> bool:
    k = len(fr)
    # find weights on the simplex whose combination dominates p - tol
    res = linprog(np.zeros(k), A_ub=-fr.T, b_ub=-(p - tol),
                  A_eq=np.ones((1, k)), b_eq=[1.0], bounds=[(0, None)] * k,
                  method="highs")
    return res.status == 0


def contains(region: Region, p: RatePoint | Sequence[float], tol: float = 1e-9) -> bool:
    """True iff ``p`` is dominated (within ``tol``) by the region.

    Plain regions use frontier-point dominance; convexified regions use
    dominance by the convex hull of the frontier.
    """
    x = np.array(p.as_tuple() if isinstance(p, RatePoint) else p, dtype=float)
    if np.all(x <= tol):
        return True
    fr = region.array(frontier_only=True)
    if np.any(np.all(fr >= x - tol, axis=1)):
        return True
    if region.convexified and len(fr) > 1:
        return _hull_contains(fr, x, tol)
    return False


# ------------------------------------------------------------------ sweeps

def _corners(cons: RegionConstraints, secrecy: bool, prov: dict) -> list[RatePoint]:
    """Corner points of the (r1, r2) pentagon; r2 is the secrecy rate when ``secrecy``."""
    b = cons.as_dict()
    if not cons.feasible:
        return []
    a = b["r1"]
    s = min(b["r2"], b["re2"]) if secrecy else b["r2"]
    c = b.get("sum", math.inf)
    top = min(s, c)
    r1max = min(a, c)
    raw = {k: float(v) for k, v in b.items()}
    pts = [(0.0, top), (max(0.0, min(a, c - top)), top),
           (r1max, max(0.0, min(s, c - r1max))), (r1max, 0.0)]
    out = []
    for i, (r1, r2) in enumerate(pts):
        re2 = r2 if secrecy else min(r2, max(b["re2"], 0.0))
        out.append(RatePoint(r1, r2, re2, dict(prov, corner=i, bounds=raw)))
    return out


def _grid(spec, default):
    if spec is None:
        return list(default)
    if isinstance(spec, (int, float)):
        return [float(spec)]
    return [float(v) for v in spec]


def sweep_tradeoff(ch: GaussianChannel, scheme: str, grid: dict | None = None,
                   label: str | None = None) -> Region:
    """Trade-off between the primary rate and the cognitive secrecy rate.

    ``scheme`` is ``gpc`` (sweep of rho), ``spc_perfect`` (single region) or
    ``spc`` (grid over rho, rho1, rho2; infeasible power splits are skipped).
    Each point's provenance records the parameters and the raw bounds.
    """
    if classify_interference(ch) is not Interference.WEAK:
        raise WeakInterferenceError(
            f"sweep_tradeoff({scheme}) needs weak interference, got a={ch.a}"
        )
    grid = grid or {}
    prov0 = {"scheme": scheme, "channel": ch.to_dict()}
    if label:
        prov0["curve"] = label
    pts: list[RatePoint] = []
    if scheme == "gpc":
        for rho in _grid(grid.get("rho"), np.linspace(0, 1, 101)):
            pts += _corners(eval_gpc(ch, GpcParams(rho)), True, dict(prov0, rho=rho))
    elif scheme == "spc_perfect":
        pts += _corners(eval_spc_perfect(ch), True, dict(prov0))
    elif scheme == "spc":
        lin = np.linspace(0, 1, 11)
        for rho in _grid(grid.get("rho"), lin):
            for rho1 in _grid(grid.get("rho1"), lin):
                for rho2 in _grid(grid.get("rho2"), lin):
                    if rho1 ** 2 + rho2 ** 2 > 1 or rho > 1 - rho1 ** 2 - rho2 ** 2 + 1e-12:
                        continue
                    p = SpcParams(rho, rho1, rho2)
                    pts += _corners(eval_spc(ch, p), True,
                                    dict(prov0, rho=rho, rho1=rho1, rho2=rho2))
    else:
        raise ArgumentError(f"unknown sweep scheme {scheme!r}")
    if not pts:
        raise ArgumentError("sweep produced no feasible point")
    return pareto_frontier(pts)


def boundary_curve(region: Region) -> list[tuple[float, float]]:
    """Plot-ready (r1, r2) polyline: frontier sorted by r1 closed to both axes."""
    fr = sorted({(p.r1, p.r2) for p in region.frontier_points()})
    if not fr:
        return []
    curve = [(0.0, max(r2 for _, r2 in fr))] if fr[0][0] > 0 else []
    curve += fr
    if curve[-1][1] > 0:
        curve.append((curve[-1][0], 0.0))
    return curve


# ------------------------------------------------------------------ export

def _fmt(x: float) -> str:
    return f"{x:.{CSV_DIGITS}g}"


def region_to_csv(region: Region, frontier_only: bool = False,
                  label: str | None = None, header: Iterable[str] = ()) -> str:
    buf = io.StringIO()
    for line in header:
        buf.write(f"# {line}\n")
    w = csv.writer(buf, lineterminator="\n")
    cols = (["curve"] if label is not None else []) + ["r1", "r2", "re2", "provenance"]
    w.writerow(cols)
    pts = region.frontier_points() if frontier_only else region.points
    for p in pts:
        row = ([label] if label is not None else []) + [
            _fmt(p.r1), _fmt(p.r2), _fmt(p.re2), json.dumps(p.provenance, sort_keys=True)]
        w.writerow(row)
    return buf.getvalue()


def region_to_dict(region: Region) -> dict:
    return {
        "points": [{"r1": p.r1, "r2": p.r2, "re2": p.re2, "provenance": p.provenance}
                   for p in region.points],
        "frontier": list(region.frontier),
        "convexified": region.convexified,
    }


def region_from_dict(d: dict) -> Region:
    pts = tuple(RatePoint(p["r1"], p["r2"], p["re2"], p.get("provenance", {}))
                for p in d["points"])
    return Region(pts, tuple(d["frontier"]), bool(d.get("convexified", False)))
