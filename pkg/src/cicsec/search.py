"""Grid and random search of inner bounds over input-law families.

Candidates are addressed by an integer index and regenerated from it, so the
candidate list can be split across worker processes and merged by
``(objective, index)`` with results independent of the worker count.
"""
from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Mapping

import numpy as np

from .constraints import RegionConstraints
from .dmc import (
    CARDINALITY_NOTE,
    DmcChannel,
    FactoredInput,
    Scheme,
    eval_binning_inner,
    eval_superposition_inner,
    one_hot_map,
    project_superposition,
)
from .errors import ArgumentError, CapacityError

OBJECTIVES = ("re2", "r2_at_r1", "weighted")


@dataclass(frozen=True)
class SearchConfig:
    mode: str = "grid"
    resolution: int = 3
    samples: int = 200
    seed: int = 0
    aux_sizes: Mapping[str, int] = field(default_factory=dict)
    objective: str = "re2"
    r1: float = 0.0
    weights: tuple[float, float, float] = (1.0, 1.0, 0.0)
    max_candidates: int = 200_000
    workers: int = 1

    def __post_init__(self):
        if self.mode not in ("grid", "random"):
            raise ArgumentError(f"mode must be grid or random, got {self.mode!r}")
        if self.resolution < 2:
            raise ArgumentError("resolution must be >= 2")
        if self.samples < 1:
            raise ArgumentError("samples must be >= 1")
        if any(v < 1 for v in self.aux_sizes.values()):
            raise ArgumentError("auxiliary alphabet caps must be >= 1")
        if self.objective not in OBJECTIVES:
            raise ArgumentError(f"objective must be one of {OBJECTIVES}")


@dataclass(frozen=True)
class OptimizeResult:
    best: FactoredInput | None
    constraints: RegionConstraints | None
    point: dict | None
    objective: float | None
    index: int | None
    evaluated: int
    feasible_count: int
    meta: dict = field(default_factory=dict)

    @property
    def found(self) -> bool:
        return self.best is not None


def default_aux_sizes(ch: DmcChannel) -> dict[str, int]:
    cap = max(ch.sizes["X1"], ch.sizes["X2"]) + 1
    return {"U": cap, "V": cap, "T": cap}


@lru_cache(maxsize=None)
def simplex_lattice(k: int, resolution: int) -> np.ndarray:
    """All points of the k-simplex with coordinates in multiples of 1/(resolution-1)."""
    m = resolution - 1
    pts = [c for c in itertools.product(range(m + 1), repeat=k) if sum(c) == m]
    return np.array(pts, dtype=float) / m


def _dirichlet(rng: np.random.Generator, k: int) -> np.ndarray:
    e = rng.exponential(size=k)
    return e / e.sum()


class _Family:
    """Slices and deterministic maps that parameterize one scheme.

    ``slices`` is a list of ``(count, k)``: ``count`` conditional rows each on
    the ``k``-simplex. ``maps`` is ``(n_in, n_out)`` for the table of
    ``x2 = g(v, s1)``.
    """

    def __init__(self, ch: DmcChannel, scheme: Scheme, aux: Mapping[str, int]):
        self.ch, self.scheme = ch, scheme
        s = ch.sizes
        self.nx1, self.nx2, self.ns1 = s["X1"], s["X2"], s["S1"]
        self.nu = aux.get("U", 1)
        self.nv = aux.get("V", self.nx2)
        self.nt = aux.get("T", 1)
        parents = self.nx1 * self.ns1
        if scheme is Scheme.BINNING:
            self.slices = [(1, self.nx1), (parents, self.nu), (self.nu * parents, self.nv)]
        elif scheme is Scheme.SUPERPOSITION:
            self.slices = [(1, self.nx1), (parents, self.nt), (self.nt * parents, self.nu),
                           (self.nu * self.nt * parents, self.nv)]
        else:
            raise ArgumentError(f"no search family for scheme {scheme.value}")
        self.map_in = self.nv * self.ns1

    def grid_size(self, resolution: int) -> int:
        n = self.nx2 ** self.map_in
        for count, k in self.slices:
            n *= len(simplex_lattice(k, resolution)) ** count
        return n

    def grid_candidate(self, index: int, resolution: int):
        rows = []
        for count, k in self.slices:
            lat = simplex_lattice(k, resolution)
            block = []
            for _ in range(count):
                index, r = divmod(index, len(lat))
                block.append(lat[r])
            rows.append(np.array(block))
        table = []
        for _ in range(self.map_in):
            index, r = divmod(index, self.nx2)
            table.append(r)
        return rows, np.array(table)

    def random_candidate(self, seed: int, index: int):
        rng = np.random.default_rng([seed, index])
        rows = [np.array([_dirichlet(rng, k) for _ in range(count)]) for count, k in self.slices]
        table = rng.integers(0, self.nx2, size=self.map_in)
        return rows, table

    def build(self, rows, table) -> FactoredInput:
        nx1, nx2, ns1, nu, nv, nt = self.nx1, self.nx2, self.ns1, self.nu, self.nv, self.nt
        g = table.reshape(nv, ns1)
        if self.scheme is Scheme.BINNING:
            p_x1, p_u, p_v = rows
            return FactoredInput(
                Scheme.BINNING,
                {
                    "p_x1a": np.ones(1),
                    "p_x1b_given_x1a": p_x1.reshape(1, nx1),
                    "x1_map": one_hot_map((1, nx1), nx1, lambda a, b: b),
                    "p_u_given_x1a_x1b_s1": p_u.reshape(1, nx1, ns1, nu),
                    "p_v_given_u_x1a_x1b_s1": p_v.reshape(nu, 1, nx1, ns1, nv),
                    "x2_map": one_hot_map((nu, nv, nx1, ns1), nx2,
                                          lambda u, v, x1, s1: g[v, s1]),
                },
                {"X1a": 1, "X1b": nx1, "U": nu, "V": nv},
            )
        p_x1, p_t, p_u, p_v = rows
        p_t = p_t.reshape(nx1, ns1, nt)
        p_u = p_u.reshape(nt, nx1, ns1, nu)
        p_v = p_v.reshape(nu, nt, nx1, ns1, nv)
        x2 = one_hot_map((nv, ns1), nx2, lambda v, s1: g[v, s1])
        joint = np.einsum("xst,txsu,utxsv,vsy->xstuvy", p_t, p_u, p_v, x2)
        return FactoredInput(
            Scheme.SUPERPOSITION,
            {"p_x1": p_x1.reshape(nx1), "p_tuvx2_given_x1_s1": joint},
            {"T": nt, "U": nu, "V": nv},
        )


def evaluate_inner(ch: DmcChannel, f: FactoredInput) -> RegionConstraints:
    """Inner-bound constraints over ``(r1, r2, re2)`` for either inner scheme."""
    if f.scheme is Scheme.BINNING:
        return eval_binning_inner(ch, f)
    if f.scheme is Scheme.SUPERPOSITION:
        return project_superposition(eval_superposition_inner(ch, f))
    raise ArgumentError(f"{f.scheme.value} is not an inner-bound scheme")


def operating_point(cons: RegionConstraints, cfg: SearchConfig) -> tuple[float, dict] | None:
    """Best rate point of ``cons`` under the configured objective, or None if infeasible."""
    if not cons.feasible:
        return None
    if cfg.objective == "re2":
        p = cons.maximize({"re2": 1.0}, tiebreak=("r2", "r1"))
        return None if p is None else (p["re2"], p)
    if cfg.objective == "r2_at_r1":
        p = cons.maximize({"r2": 1.0}, fixed={"r1": cfg.r1}, tiebreak=("re2",))
        return None if p is None else (p["r2"], p)
    w = dict(zip(("r1", "r2", "re2"), cfg.weights))
    p = cons.maximize(w, tiebreak=("re2", "r2", "r1"))
    return None if p is None else (sum(w[k] * p[k] for k in w), p)


def _scan(ch, scheme, aux, cfg, start, stop):
    fam = _Family(ch, scheme, aux)
    best = None
    feasible = 0
    for i in range(start, stop):
        if cfg.mode == "grid":
            rows, table = fam.grid_candidate(i, cfg.resolution)
        else:
            rows, table = fam.random_candidate(cfg.seed, i)
        f = fam.build(rows, table)
        res = operating_point(evaluate_inner(ch, f), cfg)
        if res is None:
            continue
        feasible += 1
        val, point = res
        # strictly greater keeps the lowest index among ties
        if best is None or val > best[0]:
            best = (val, i, point)
    return best, feasible


def optimize_region(ch: DmcChannel, scheme: Scheme | str, cfg: SearchConfig) -> OptimizeResult:
    """Search the scheme's input family for the best objective value."""
    scheme = Scheme(scheme)
    aux = dict(default_aux_sizes(ch))
    aux.update(cfg.aux_sizes)
    fam = _Family(ch, scheme, aux)
    total = fam.grid_size(cfg.resolution) if cfg.mode == "grid" else cfg.samples
    if total > cfg.max_candidates:
        raise CapacityError(
            f"{cfg.mode} search needs {total} candidates, cap is {cfg.max_candidates}; "
            "lower the resolution or auxiliary sizes, or use random mode"
        )
    workers = max(1, min(cfg.workers, total))
    chunks = [(total * w // workers, total * (w + 1) // workers) for w in range(workers)]
    if workers == 1:
        parts = [_scan(ch, scheme, aux, cfg, *chunks[0])]
    else:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            futs = [ex.submit(_scan, ch, scheme, aux, cfg, a, b) for a, b in chunks]
            parts = [f.result() for f in futs]
    feasible = sum(p[1] for p in parts)
    cands = [p[0] for p in parts if p[0] is not None]
    meta = {"scheme": scheme.value, "mode": cfg.mode, "aux_sizes": aux,
            "cardinality_note": CARDINALITY_NOTE}
    if not cands:
        return OptimizeResult(None, None, None, None, None, total, 0,
                              dict(meta, status="no feasible point"))
    val, idx, point = max(cands, key=lambda c: (c[0], -c[1]))
    if cfg.mode == "grid":
        rows, table = fam.grid_candidate(idx, cfg.resolution)
    else:
        rows, table = fam.random_candidate(cfg.seed, idx)
    best = fam.build(rows, table)
    return OptimizeResult(best, evaluate_inner(ch, best), point, val, idx, total,
                          feasible, dict(meta, status="ok"))


def induced_inputs(ch: DmcChannel, f: FactoredInput):
    """Joint law of ``(X1, X2, S1, S2)`` plus outputs induced by ``f``."""
    return f.joint(ch).marginal("X1,X2,S1,S2,Y1,Y2")


def random_channel(rng: np.random.Generator, sizes: Mapping[str, int] | None = None,
                   symmetric: bool = False) -> DmcChannel:
    """Channel with uniformly random (Dirichlet(1)) conditional rows and state priors."""
    s = {"X1": 2, "X2": 2, "S1": 2, "S2": 2, "Y1": 2, "Y2": 2}
    s.update(sizes or {})
    ny = s["Y1"] * s["Y2"]
    if symmetric:
        shape = (s["X1"], s["X2"], s["S1"])
        law = np.array([_dirichlet(rng, ny) for _ in range(math.prod(shape))])
        law = law.reshape(shape + (s["Y1"], s["Y2"]))
        return DmcChannel.symmetric(law, _dirichlet(rng, s["S1"]))
    shape = (s["X1"], s["X2"], s["S1"], s["S2"])
    law = np.array([_dirichlet(rng, ny) for _ in range(math.prod(shape))])
    law = law.reshape(shape + (s["Y1"], s["Y2"]))
    return DmcChannel.from_priors(law, _dirichlet(rng, s["S1"]), _dirichlet(rng, s["S2"]))
