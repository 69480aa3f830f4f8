"""Linear rate-constraint sets emitted by every bound evaluator."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np
from scipy.optimize import linprog

from .errors import ArgumentError

RATE_AXES = ("r1", "r2", "re2")
NEG_TOL = 1e-12


@dataclass(frozen=True)
class Bound:
    label: str
    coeffs: tuple[float, ...]
    value: float


@dataclass(frozen=True)
class RegionConstraints:
    """Upper bounds ``coeffs · rates <= value`` over the named rate axes.

    ``feasible`` is False as soon as any right-hand side is negative; such
    a constraint set describes no achievable point with non-negative rates.
    """

    bounds: tuple[Bound, ...]
    axes: tuple[str, ...] = RATE_AXES
    meta: Mapping = field(default_factory=dict)

    def __post_init__(self):
        labels = [b.label for b in self.bounds]
        if len(set(labels)) != len(labels):
            raise ArgumentError(f"duplicate constraint labels: {labels}")
        for b in self.bounds:
            if len(b.coeffs) != len(self.axes):
                raise ArgumentError(f"{b.label}: coefficient vector length mismatch")
            if not math.isfinite(b.value):
                raise ArgumentError(f"{b.label}: bound value {b.value!r} not finite")

    @classmethod
    def build(cls, items: Sequence[tuple[str, Mapping[str, float], float]],
              axes: Sequence[str] = RATE_AXES, meta: Mapping | None = None):
        """Build from ``(label, {axis: coeff}, value)`` triples."""
        axes = tuple(axes)
        bounds = []
        for label, cmap, value in items:
            unknown = set(cmap) - set(axes)
            if unknown:
                raise ArgumentError(f"{label}: unknown axes {sorted(unknown)}")
            bounds.append(Bound(label, tuple(float(cmap.get(a, 0.0)) for a in axes),
                                float(value)))
        return cls(tuple(bounds), axes, dict(meta or {}))

    @property
    def feasible(self) -> bool:
        return all(b.value >= -NEG_TOL for b in self.bounds)

    @property
    def labels(self) -> list[str]:
        return [b.label for b in self.bounds]

    def bound(self, label: str) -> float:
        for b in self.bounds:
            if b.label == label:
                return b.value
        raise KeyError(label)

    def __getitem__(self, label: str) -> float:
        return self.bound(label)

    def as_dict(self) -> dict[str, float]:
        return {b.label: b.value for b in self.bounds}

    def slack(self, point: Mapping[str, float] | Sequence[float]) -> dict[str, float]:
        x = self._vec(point)
        return {b.label: b.value - float(np.dot(b.coeffs, x)) for b in self.bounds}

    def satisfied(self, point, tol: float = 0.0) -> bool:
        return all(s >= -tol for s in self.slack(point).values())

    def _vec(self, point) -> np.ndarray:
        if isinstance(point, Mapping):
            return np.array([float(point.get(a, 0.0)) for a in self.axes])
        if hasattr(point, "as_tuple"):
            point = point.as_tuple()
        x = np.asarray(point, dtype=float)
        if x.shape != (len(self.axes),):
            raise ArgumentError(f"point must have {len(self.axes)} coordinates")
        return x

    def maximize(self, weights: Mapping[str, float],
                 fixed: Mapping[str, float] | None = None,
                 tiebreak: Sequence[str] = ()) -> dict[str, float] | None:
        """Maximize a non-negative weighted rate sum over the region.

        The secrecy convention ``re2 <= r2`` applies on rate axes. Ties are
        broken lexicographically by the ``tiebreak`` axes. Returns None when
        the region holds no non-negative point (honouring ``fixed``).
        """
        if any(w < 0 for w in weights.values()):
            raise ArgumentError("weights must be non-negative")
        caps = self._standard_caps()
        if caps is not None:
            return self._maximize_closed(caps, weights, fixed or {}, tiebreak)
        return self._maximize_lp(weights, fixed or {}, tiebreak)

    def _standard_caps(self):
        """Per-axis and sum caps when every bound is on r1, r2, r1+r2 or re2."""
        if self.axes != RATE_AXES:
            return None
        caps = {"r1": math.inf, "r2": math.inf, "sum": math.inf, "re2": math.inf}
        kinds = {(1.0, 0.0, 0.0): "r1", (0.0, 1.0, 0.0): "r2",
                 (1.0, 1.0, 0.0): "sum", (0.0, 0.0, 1.0): "re2"}
        for b in self.bounds:
            k = kinds.get(tuple(float(c) for c in b.coeffs))
            if k is None:
                return None
            caps[k] = min(caps[k], b.value)
        return caps

    def _maximize_closed(self, caps, weights, fixed, tiebreak):
        A, B, S, E = caps["r1"], caps["r2"], caps["sum"], caps["re2"]
        if min(A, B, S, E) < -NEG_TOL:
            return None
        A, B, S, E = (max(v, 0.0) for v in (A, B, S, E))
        top2 = min(B, S)
        if "r1" in fixed:
            r1 = float(fixed["r1"])
            if r1 < 0 or r1 > min(A, S) + NEG_TOL:
                return None
            r2 = max(min(B, S - r1), 0.0)
            cands = [(r1, r2)]
        else:
            a = min(A, S)
            cands = [(a, max(min(B, S - a), 0.0)), (max(min(A, S - top2), 0.0), top2),
                     (a, 0.0), (0.0, top2), (0.0, 0.0)]
            if E < top2:
                cands += [(max(min(A, S - E), 0.0), E), (0.0, E)]
        pts = [{"r1": r1, "r2": r2, "re2": min(E, r2)} for r1, r2 in cands]
        if "r2" in fixed or "re2" in fixed:
            return self._maximize_lp(weights, fixed, tiebreak)

        def key(p):
            return (sum(weights.get(k, 0.0) * p[k] for k in RATE_AXES),) + tuple(
                p[t] for t in tiebreak)

        best = pts[0]
        for p in pts[1:]:
            if key(p) > key(best):
                best = p
        return best

    def _maximize_lp(self, weights, fixed, tiebreak):
        n = len(self.axes)
        A = [list(b.coeffs) for b in self.bounds]
        ub = [b.value for b in self.bounds]
        if "re2" in self.axes and "r2" in self.axes:
            row = [0.0] * n
            row[self.axes.index("re2")] = 1.0
            row[self.axes.index("r2")] = -1.0
            A.append(row)
            ub.append(0.0)
        box = [(0.0, None)] * n
        for a, v in fixed.items():
            box[self.axes.index(a)] = (v, v)
        A = np.array(A)
        ub = np.array(ub)
        x = None
        for w in [dict(weights)] + [{a: 1.0} for a in tiebreak]:
            c = -np.array([float(w.get(a, 0.0)) for a in self.axes])
            res = linprog(c, A_ub=A, b_ub=ub, bounds=box, method="highs")
            if res.status != 0:
                return None
            x = res.x
            # keep this stage's optimum while optimizing the next tie-break
            A = np.vstack([A, c])
            ub = np.append(ub, float(c @ x) + 1e-9)
        x = np.clip(x, 0.0, None)
        # shrink solver round-off back inside the (non-negative) bounds
        for b in self.bounds:
            lhs = float(np.dot(b.coeffs, x))
            if lhs > b.value and lhs > 0 and b.value >= 0 and min(b.coeffs) >= 0:
                x = x * (b.value / lhs)
        return {a: float(v) for a, v in zip(self.axes, x)}

    def to_dict(self) -> dict:
        return {
            "axes": list(self.axes),
            "feasible": self.feasible,
            "bounds": [
                {"label": b.label, "coeffs": list(b.coeffs), "value": b.value}
                for b in self.bounds
            ],
            "meta": dict(self.meta),
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "RegionConstraints":
        bounds = tuple(Bound(b["label"], tuple(b["coeffs"]), b["value"])
                       for b in d["bounds"])
        return cls(bounds, tuple(d["axes"]), dict(d.get("meta", {})))
