"""Finite-alphabet (discrete memoryless) rate and equivocation bounds.

A :class:`DmcChannel` holds ``P(y1, y2 | x1, x2, s1, s2)`` and the joint
state law. A :class:`FactoredInput` holds the conditional factors of one of
the supported input factorizations; :meth:`FactoredInput.joint` multiplies
them with the channel into a :class:`~cicsec.infotheory.FiniteDist`, and the
``eval_*`` functions read every bound off that joint.

The time-sharing variable is always trivial here (``|Q| = 1``); convex
combinations of rate points are handled geometrically in :mod:`cicsec.region`.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .constraints import RegionConstraints
from .errors import (
    ArgumentError,
    CouplingError,
    DistributionError,
    PreconditionError,
    SchemeError,
)
from .infotheory import FiniteDist

COND_TOL = 1e-12
CHANNEL_VARS = ("X1", "X2", "S1", "S2", "Y1", "Y2")

CARDINALITY_NOTE = (
    "auxiliary alphabet sizes are capped by configuration, not by a proven "
    "cardinality bound; optimized values are lower bounds on the true inner bound"
)


class Scheme(str, enum.Enum):
    BINNING = "binning"
    OUTER1 = "outer1"
    SUPERPOSITION = "superposition"
    OUTER3 = "outer3"
    SYMMETRIC = "symmetric"
    INPUTS = "inputs"


# Factor layout per scheme: name -> axis variables; the last axis is the
# variable being generated, the rest are its parents.
FACTOR_LAYOUT: dict[Scheme, dict[str, tuple[str, ...]]] = {
    Scheme.BINNING: {
        "p_x1a": ("X1a",),
        "p_x1b_given_x1a": ("X1a", "X1b"),
        "x1_map": ("X1a", "X1b", "X1"),
        "p_u_given_x1a_x1b_s1": ("X1a", "X1b", "S1", "U"),
        "p_v_given_u_x1a_x1b_s1": ("U", "X1a", "X1b", "S1", "V"),
        "x2_map": ("U", "V", "X1", "S1", "X2"),
    },
    Scheme.OUTER1: {
        "p_v1": ("V1",),
        "p_v2": ("V2",),
        "p_u_given_v1_v2": ("V1", "V2", "U"),
        "p_x1_given_v1": ("V1", "X1"),
        "p_x2_given_u_v1_v2_s1": ("U", "V1", "V2", "S1", "X2"),
    },
    Scheme.SUPERPOSITION: {
        "p_x1": ("X1",),
        "p_tuvx2_given_x1_s1": ("X1", "S1", "T", "U", "V", "X2"),
    },
    Scheme.OUTER3: {
        "p_x1": ("X1",),
        "p_tvx2_given_x1_s1": ("X1", "S1", "T", "V", "X2"),
    },
    Scheme.SYMMETRIC: {
        "p_x1": ("X1",),
        "p_ux2_given_x1_s": ("X1", "S1", "U", "X2"),
    },
    Scheme.INPUTS: {
        "p_x1x2": ("X1", "X2"),
    },
}

# how many trailing axes of each factor are "generated" (the rest condition)
_GENERATED = {
    "p_tuvx2_given_x1_s1": 4,
    "p_tvx2_given_x1_s1": 3,
    "p_ux2_given_x1_s": 2,
    "p_x1x2": 2,
}

DETERMINISTIC_FACTORS = {Scheme.BINNING: ("x1_map", "x2_map")}


def _check_conditional(name: str, arr: np.ndarray, generated: int = 1):
    if np.any(arr < 0) or not np.all(np.isfinite(arr)):
        raise DistributionError(f"{name}: entries must be finite and non-negative")
    sums = arr.reshape(arr.shape[: arr.ndim - generated] + (-1,)).sum(axis=-1)
    if np.any(np.abs(sums - 1.0) > COND_TOL):
        raise DistributionError(f"{name}: conditional slices must sum to 1")


@dataclass(frozen=True, eq=False)
class DmcChannel:
    """Memoryless channel law ``law[x1, x2, s1, s2, y1, y2]`` plus state law.

    ``state_joint[s1, s2]`` defaults to the product of the two priors. A
    symmetric-state channel (``S1 = S2``) has a diagonal ``state_joint``.
    """

    law: np.ndarray
    state_joint: np.ndarray

    def __post_init__(self):
        law = np.array(self.law, dtype=float)
        sj = np.array(self.state_joint, dtype=float)
        if law.ndim != 6:
            raise DistributionError("law must have axes (X1, X2, S1, S2, Y1, Y2)")
        _check_conditional("law", law, generated=2)
        if sj.shape != law.shape[2:4]:
            raise DistributionError("state_joint shape must be (|S1|, |S2|)")
        if np.any(sj < 0) or abs(sj.sum() - 1.0) > COND_TOL:
            raise DistributionError("state_joint must be a probability table")
        law.setflags(write=False)
        sj.setflags(write=False)
        object.__setattr__(self, "law", law)
        object.__setattr__(self, "state_joint", sj)

    @classmethod
    def from_priors(cls, law, s1_prior=None, s2_prior=None) -> "DmcChannel":
        law = np.asarray(law, dtype=float)
        s1 = np.ones(law.shape[2]) / law.shape[2] if s1_prior is None else np.asarray(s1_prior, float)
        s2 = np.ones(law.shape[3]) / law.shape[3] if s2_prior is None else np.asarray(s2_prior, float)
        return cls(law, np.outer(s1, s2))

    @classmethod
    def symmetric(cls, law_s, s_prior) -> "DmcChannel":
        """Channel with one state seen by both the cognitive pair: ``law_s[x1, x2, s, y1, y2]``."""
        law_s = np.asarray(law_s, dtype=float)
        s_prior = np.asarray(s_prior, dtype=float)
        ns = law_s.shape[2]
        law = np.zeros(law_s.shape[:3] + (ns,) + law_s.shape[3:])
        # off-diagonal state pairs have zero probability; fill them with the
        # diagonal law so every conditional slice stays valid
        for s2 in range(ns):
            law[:, :, :, s2] = law_s
        return cls(law, np.diag(s_prior))

    @classmethod
    def from_functions(cls, sizes: Mapping[str, int], y1, y2,
                       s1_prior=None, s2_prior=None) -> "DmcChannel":
        """Deterministic channel from ``y1(x1, x2, s1, s2)`` and ``y2(...)``."""
        shape = tuple(sizes[n] for n in CHANNEL_VARS)
        law = np.zeros(shape)
        for idx in np.ndindex(*shape[:4]):
            law[idx + (y1(*idx), y2(*idx))] = 1.0
        return cls.from_priors(law, s1_prior, s2_prior)

    @property
    def sizes(self) -> dict[str, int]:
        return dict(zip(CHANNEL_VARS, self.law.shape))

    @property
    def s1_prior(self) -> np.ndarray:
        return self.state_joint.sum(axis=1)

    @property
    def s2_prior(self) -> np.ndarray:
        return self.state_joint.sum(axis=0)

    @property
    def is_symmetric(self) -> bool:
        sj = self.state_joint
        return sj.shape[0] == sj.shape[1] and np.allclose(sj, np.diag(np.diag(sj)), atol=0)

    @property
    def y1_law(self) -> np.ndarray:
        return self.law.sum(axis=5)

    @property
    def y2_law(self) -> np.ndarray:
        return self.law.sum(axis=4)


@dataclass(frozen=True, eq=False)
class FactoredInput:
    """Conditional factors for one input factorization.

    ``factors`` maps the factor names of :data:`FACTOR_LAYOUT` to tensors;
    ``aux_sizes`` gives the alphabet size of every auxiliary the scheme uses.
    Channel-variable sizes are taken from the channel at assembly time.
    """

    scheme: Scheme
    factors: Mapping[str, np.ndarray]
    aux_sizes: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self):
        scheme = Scheme(self.scheme)
        object.__setattr__(self, "scheme", scheme)
        layout = FACTOR_LAYOUT[scheme]
        missing = set(layout) - set(self.factors)
        extra = set(self.factors) - set(layout)
        if missing or extra:
            raise SchemeError(
                f"{scheme.value} factorization needs factors {sorted(layout)}; "
                f"missing {sorted(missing)}, unexpected {sorted(extra)}"
            )
        facs = {}
        sizes = dict(self.aux_sizes)
        for name, axes in layout.items():
            arr = np.array(self.factors[name], dtype=float)
            if arr.ndim != len(axes):
                raise SchemeError(f"{name} must have axes {axes}")
            for ax, s in zip(axes, arr.shape):
                if ax in sizes and sizes[ax] != s:
                    raise SchemeError(f"{name}: axis {ax} has size {s}, expected {sizes[ax]}")
                sizes.setdefault(ax, s)
            _check_conditional(name, arr, _GENERATED.get(name, 1))
            arr.setflags(write=False)
            facs[name] = arr
        for name in DETERMINISTIC_FACTORS.get(scheme, ()):
            if not np.all((facs[name] == 0) | (facs[name] == 1)):
                raise DistributionError(f"{name} must be a deterministic map (0/1 entries)")
        object.__setattr__(self, "factors", facs)
        object.__setattr__(self, "aux_sizes", {k: v for k, v in sizes.items()
                                               if k not in CHANNEL_VARS})
        object.__setattr__(self, "_sizes_all", sizes)

    def joint(self, ch: DmcChannel) -> FiniteDist:
        """Assemble the full joint law with ``ch``."""
        sizes = dict(ch.sizes)
        for k, v in self._sizes_all.items():
            if k in sizes and sizes[k] != v:
                raise SchemeError(f"input uses |{k}|={v} but channel has |{k}|={sizes[k]}")
        sizes.update(self.aux_sizes)
        layout = FACTOR_LAYOUT[self.scheme]
        factors = [(layout[n], a) for n, a in self.factors.items()]
        if self.scheme is Scheme.SYMMETRIC and not ch.is_symmetric:
            raise PreconditionError("symmetric scheme needs a channel with S1 = S2")
        factors.append((("S1", "S2"), ch.state_joint))
        factors.append((CHANNEL_VARS, ch.law))
        order = [n for n in _ORDER if n in sizes and (n in CHANNEL_VARS or n in self.aux_sizes)]
        return FiniteDist.from_factors({n: sizes[n] for n in order}, factors, order)

    def to_dict(self) -> dict:
        layout = FACTOR_LAYOUT[self.scheme]
        return {
            "kind": "factored_input",
            "scheme": self.scheme.value,
            "aux_sizes": dict(self.aux_sizes),
            "factors": {
                n: {"variables": list(layout[n]), "shape": list(a.shape),
                    "data": a.ravel().tolist()}
                for n, a in self.factors.items()
            },
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "FactoredInput":
        facs = {n: np.asarray(f["data"], dtype=float).reshape(f["shape"])
                for n, f in d["factors"].items()}
        return cls(Scheme(d["scheme"]), facs, dict(d.get("aux_sizes", {})))


_ORDER = ("X1a", "X1b", "T", "V1", "V2", "U", "V", "X1", "X2", "S1", "S2", "Y1", "Y2")


# ---------------------------------------------------------------- builders

def one_hot_map(shape_in: tuple[int, ...], n_out: int, fn) -> np.ndarray:
    """Tensor of a deterministic map ``fn(*idx) -> output symbol``."""
    arr = np.zeros(tuple(shape_in) + (n_out,))
    for idx in np.ndindex(*shape_in):
        arr[idx + (int(fn(*idx)),)] = 1.0
    return arr


def binning_input(ch: DmcChannel, *, p_x1, p_u_given_x1_s1=None, p_v_given_u_x1_s1=None,
                  x2_fn=None, u_size: int = 1, v_size: int | None = None) -> FactoredInput:
    """Binning input with trivial ``X1a`` and ``X1b = X1``.

    ``p_x1[x1]``, ``p_u_given_x1_s1[x1, s1, u]``, ``p_v_given_u_x1_s1[u, x1, s1, v]``
    and ``x2_fn(u, v, x1, s1)``. Defaults: constant U, ``V = X2`` drawn
    independently from ``p_x1`` sized uniform, ``x2 = v``.
    """
    nx1, nx2, ns1 = ch.sizes["X1"], ch.sizes["X2"], ch.sizes["S1"]
    v_size = nx2 if v_size is None else v_size
    if p_u_given_x1_s1 is None:
        p_u_given_x1_s1 = np.full((nx1, ns1, u_size), 1.0 / u_size)
    p_u = np.asarray(p_u_given_x1_s1, float)
    u_size = p_u.shape[-1]
    if p_v_given_u_x1_s1 is None:
        p_v_given_u_x1_s1 = np.full((u_size, nx1, ns1, v_size), 1.0 / v_size)
    p_v = np.asarray(p_v_given_u_x1_s1, float)
    v_size = p_v.shape[-1]
    if x2_fn is None:
        x2_fn = lambda u, v, x1, s1: v % nx2  # noqa: E731
    return FactoredInput(
        Scheme.BINNING,
        {
            "p_x1a": np.ones(1),
            "p_x1b_given_x1a": np.asarray(p_x1, float).reshape(1, nx1),
            "x1_map": one_hot_map((1, nx1), nx1, lambda a, b: b),
            "p_u_given_x1a_x1b_s1": p_u.reshape(1, nx1, ns1, u_size),
            "p_v_given_u_x1a_x1b_s1": p_v.reshape(u_size, 1, nx1, ns1, v_size),
            "x2_map": one_hot_map((u_size, v_size, nx1, ns1), nx2, x2_fn),
        },
        {"X1a": 1, "X1b": nx1, "U": u_size, "V": v_size},
    )


def inputs_only(p_x1x2) -> FactoredInput:
    p = np.asarray(p_x1x2, float)
    return FactoredInput(Scheme.INPUTS, {"p_x1x2": p})


# ---------------------------------------------------------------- evaluators

def _joint(ch: DmcChannel, f: FactoredInput | FiniteDist) -> FiniteDist:
    return f if isinstance(f, FiniteDist) else f.joint(ch)


def _require(f, *schemes: Scheme):
    if isinstance(f, FactoredInput) and f.scheme not in schemes:
        raise SchemeError(
            f"expected a {'/'.join(s.value for s in schemes)} input, got {f.scheme.value}"
        )


def _with_meta(meta: dict, f) -> dict:
    meta = dict(meta)
    if isinstance(f, FactoredInput):
        meta["aux_sizes"] = dict(f.aux_sizes)
        meta["cardinality_note"] = CARDINALITY_NOTE
    return meta


def eval_binning_inner(ch: DmcChannel, f: FactoredInput | FiniteDist,
                       raw: bool = False) -> RegionConstraints | tuple[RegionConstraints, RegionConstraints]:
    """Inner bound of the two-step binning scheme.

    Returns the eliminated (R1, R2, R1+R2, Re2) constraints; with ``raw=True``
    also the split-rate constraints over ``(r1a, r1b, r2a, r2b, re2)``.
    """
    _require(f, Scheme.BINNING)
    d = _joint(ch, f)
    I = d.I
    r1_dec = I("X1", "Y1,U")
    r1_joint = I("X1,U", "Y1")
    v_layer = I("V", "Y2,S2", "U") - I("V", "X1,S1", "U")
    r2 = I("V,U", "Y2,S2") - I("V,U", "X1,S1")
    re2 = I("V", "Y2,S2,U") - I("V,S1", "X1,Y1,U")
    cons = RegionConstraints.build(
        [
            ("r1_decode", {"r1": 1}, r1_dec),
            ("r1_joint", {"r1": 1}, r1_joint),
            ("r2", {"r2": 1}, r2),
            ("sum", {"r1": 1, "r2": 1}, v_layer + r1_joint),
            ("re2", {"re2": 1}, re2),
        ],
        meta=_with_meta({"scheme": "binning"}, f),
    )
    if not raw:
        return cons
    split_axes = ("r1a", "r1b", "r2a", "r2b", "re2")
    split = RegionConstraints.build(
        [
            ("r1", {"r1a": 1, "r1b": 1}, r1_dec),
            ("r1b", {"r1b": 1}, I("X1b", "Y1,U", "X1a")),
            ("r2a", {"r2a": 1}, v_layer),
            ("r2", {"r2a": 1, "r2b": 1}, r2),
            ("r1_r2b", {"r1a": 1, "r1b": 1, "r2b": 1}, r1_joint),
            ("r1b_r2b", {"r1b": 1, "r2b": 1}, I("X1b,U", "Y2", "X1a")),
            ("re2", {"re2": 1}, re2),
        ],
        axes=split_axes,
        meta=_with_meta({"scheme": "binning_split"}, f),
    )
    return cons, split


def eval_symmetric_secrecy(ch: DmcChannel, f: FactoredInput | FiniteDist) -> float:
    """Secrecy rate with one shared state S = S1 = S2, floored at 0.

    The last term is the secret-key rate the common state supplies.
    """
    if not ch.is_symmetric:
        raise PreconditionError("symmetric secrecy needs S1 = S2 (diagonal state law)")
    d = _joint(ch, f)
    val = d.I("V", "Y2", "U,S1") - d.I("V", "X1,Y1", "U,S1") + d.H("S1", "U,X1,Y1")
    return max(val, 0.0)


def eval_superposition_inner(ch: DmcChannel, f: FactoredInput | FiniteDist) -> RegionConstraints:
    """Superposition inner bound over ``(r1, r21, r22, re2)``; R2 = R21 + R22."""
    _require(f, Scheme.SUPERPOSITION)
    d = _joint(ch, f)
    I = d.I
    state_cost = I("T,U,V", "S1", "X1")
    leak_state = I("V", "S1", "U,X1,T")
    leak_rx1 = I("V", "Y1", "U,X1,T")
    private = I("V", "Y2,S2", "U,X1,T")
    axes = ("r1", "r21", "r22", "re2")
    return RegionConstraints.build(
        [
            ("r1_r21", {"r1": 1, "r21": 1}, I("T,U,X1", "Y1") - I("T,U", "S1", "X1")),
            ("r22", {"r22": 1}, private - leak_state),
            ("r2_given_t", {"r21": 1, "r22": 1},
             I("U,V", "Y2,S2", "X1,T") - I("U,V", "S1", "X1,T")),
            ("r2", {"r21": 1, "r22": 1}, I("T,U,V", "Y2,S2", "X1") - state_cost),
            ("sum", {"r1": 1, "r21": 1, "r22": 1}, I("T,U,V,X1", "Y2,S2") - state_cost),
            ("re2", {"re2": 1}, private - max(leak_state, leak_rx1)),
        ],
        axes=axes,
        meta=_with_meta({"scheme": "superposition",
                         "re2_max_branch": "state" if leak_state >= leak_rx1 else "rx1"}, f),
    )


def project_superposition(raw: RegionConstraints) -> RegionConstraints:
    """Eliminate the R21/R22 split, giving constraints over ``(r1, r2, re2)``."""
    b = raw.as_dict()
    return RegionConstraints.build(
        [
            ("r1", {"r1": 1}, b["r1_r21"]),
            ("r2_given_t", {"r2": 1}, b["r2_given_t"]),
            ("r2", {"r2": 1}, b["r2"]),
            ("sum", {"r1": 1, "r2": 1}, b["sum"]),
            ("sum_split", {"r1": 1, "r2": 1}, b["r1_r21"] + b["r22"]),
            ("re2", {"re2": 1}, b["re2"]),
        ],
        meta=dict(raw.meta, projected=True),
    )


def eval_superposition_symmetric(ch: DmcChannel, f: FactoredInput | FiniteDist) -> RegionConstraints:
    """Superposition bound for a shared state with T = X1 and V = X2."""
    _require(f, Scheme.SYMMETRIC)
    if not ch.is_symmetric:
        raise PreconditionError("needs S1 = S2 (diagonal state law)")
    d = _joint(ch, f)
    I = d.I
    r1 = I("U,X1", "Y1") - I("U", "S1", "X1")
    r2 = I("X2", "Y2", "X1,S1")
    return RegionConstraints.build(
        [
            ("r1", {"r1": 1}, r1),
            ("r2", {"r2": 1}, r2),
            ("sum", {"r1": 1, "r2": 1}, r1 + r2),
            ("re2_state_known", {"re2": 1}, I("X2", "Y2", "U,X1,S1")),
            ("re2_leak", {"re2": 1}, I("X2", "Y2,S1", "U,X1") - I("X2", "Y1", "U,X1")),
        ],
        meta=_with_meta({"scheme": "superposition_symmetric"}, f),
    )


def _outer1(d: FiniteDist) -> list:
    I = d.I
    return [
        ("r1_joint", {"r1": 1}, I("U,V1", "Y1")),
        ("r1_decode", {"r1": 1}, I("V1", "Y1,U")),
        ("r2", {"r2": 1}, I("U,V2", "Y2", "S1,S2")),
        ("sum_rx2_last", {"r1": 1, "r2": 1},
         I("V2", "Y2", "U,V1,S1,S2") + I("V1,U", "Y1")),
        ("sum_rx1_last", {"r1": 1, "r2": 1},
         I("V2,U", "Y2", "S1,S2") + I("V1", "Y1", "U,V2")),
        ("re2_common", {"re2": 1}, I("V2", "Y2", "U") - I("V2", "Y1", "U")),
        ("re2_given_v1", {"re2": 1}, I("V2", "Y2", "V1,U") - I("V2", "Y1", "V1,U")),
    ]


def _coupled_term(d: FiniteDist, ch: DmcChannel, coupling: np.ndarray) -> float:
    """I(X2; Y2 | X1, S1, S2, Y1') with Y1' drawn through ``coupling``."""
    # coupling[x1, x2, s1, s2, y2, y1p]
    px = d.marginal("X1,X2,S1,S2").reorder(("X1", "X2", "S1", "S2")).probs
    joint = px[..., None, None] * coupling
    e = FiniteDist(("X1", "X2", "S1", "S2", "Y2", "Y1p"), joint)
    return e.I("X2", "Y2", "X1,S1,S2,Y1p")


def _check_coupling(ch: DmcChannel, coupling: np.ndarray):
    sh = ch.law.shape
    if coupling.shape != sh[:4] + (sh[5], sh[4]):
        raise CouplingError("coupling must have axes (X1, X2, S1, S2, Y2, Y1')")
    if np.any(coupling < 0):
        raise CouplingError("coupling entries must be non-negative")
    if np.max(np.abs(coupling.sum(axis=5) - ch.y2_law)) > 1e-9:
        raise CouplingError("coupling's Y2 marginal differs from the channel")
    if np.max(np.abs(coupling.sum(axis=4) - ch.y1_law)) > 1e-9:
        raise CouplingError("coupling's Y1' marginal differs from the channel's Y1 law")


def _search_coupling(d: FiniteDist, ch: DmcChannel, resolution: int) -> float:
    """Grid-minimize the coupled term over binary-output couplings.

    The term splits over ``(x1, s1, s2)`` groups; inside a group each ``x2``
    picks ``q(y2=1, y1'=1)`` on a grid between its Fréchet bounds.
    """
    sh = ch.law.shape
    if sh[4] != 2 or sh[5] != 2:
        raise ArgumentError("coupling search supports binary Y1 and Y2 only")
    p = d.marginal("X1,X2,S1,S2").reorder(("X1", "X2", "S1", "S2")).probs
    y1 = ch.y1_law[..., 1]
    y2 = ch.y2_law[..., 1]
    total = 0.0
    grid = np.linspace(0.0, 1.0, resolution)
    nx2 = sh[1]
    for x1, s1, s2 in np.ndindex(sh[0], sh[2], sh[3]):
        w = p[x1, :, s1, s2]
        mass = w.sum()
        if mass <= 0:
            continue
        best = np.inf
        options = []
        for x2 in range(nx2):
            a, b = y2[x1, x2, s1, s2], y1[x1, x2, s1, s2]
            lo, hi = max(0.0, a + b - 1.0), min(a, b)
            ts = lo + grid * (hi - lo)
            qs = []
            for t in ts:
                q = np.array([[1 - a - b + t, b - t], [a - t, t]])  # q[y2, y1']
                qs.append(np.clip(q, 0.0, None))
            options.append(qs)
        for combo in np.ndindex(*(len(o) for o in options)):
            q = np.stack([options[x2][c] for x2, c in enumerate(combo)])  # x2, y2, y1'
            joint = (w / mass)[:, None, None] * q
            e = FiniteDist(("X2", "Y2", "Y1p"), joint / joint.sum())
            best = min(best, e.I("X2", "Y2", "Y1p"))
        total += mass * best
    return total


def eval_outer(ch: DmcChannel, f: FactoredInput | FiniteDist, which: str,
               coupling: np.ndarray | None = None,
               coupling_search: int | None = None) -> RegionConstraints:
    """Outer bounds ``thm3`` (auxiliary form), ``thm4`` (inputs only), ``thm8``.

    ``thm4`` accepts any input whose joint contains X1, X2, S1, S2 and uses
    that induced input law. Its sum bound uses the coupling ``Y1' = Y1``
    unless an explicit ``coupling`` is given or ``coupling_search`` asks for
    a grid minimization (binary outputs only).
    """
    if which == "thm3":
        _require(f, Scheme.OUTER1)
        d = _joint(ch, f)
        items = _outer1(d)
    elif which == "thm4":
        d = _joint(ch, f)
        I = d.I
        base = I("Y1", "X1,X2,S1,S2")
        if coupling is not None:
            coupling = np.asarray(coupling, float)
            _check_coupling(ch, coupling)
            second = _coupled_term(d, ch, coupling)
        elif coupling_search:
            second = min(_search_coupling(d, ch, coupling_search),
                         I("X2", "Y2", "X1,S1,S2,Y1"))
        else:
            second = I("X2", "Y2", "X1,S1,S2,Y1")
        items = [
            ("r1", {"r1": 1}, I("X1,X2", "Y1")),
            ("r2", {"r2": 1}, I("X2", "Y2", "X1,S1,S2")),
            ("sum", {"r1": 1, "r2": 1}, base + second),
            ("re2_marginal", {"re2": 1}, I("X2", "Y2") - I("X2", "Y1")),
            ("re2_given_x1", {"re2": 1}, I("X2", "Y2", "X1") - I("X2", "Y1", "X1")),
        ]
    elif which == "thm8":
        _require(f, Scheme.OUTER3)
        d = _joint(ch, f)
        I = d.I
        cost = I("T,V", "S1", "X1")
        items = [
            ("r1", {"r1": 1}, I("T,X1", "Y1") - I("T", "S1", "X1")),
            ("r2", {"r2": 1}, I("T,V", "Y2,S2", "X1") - cost),
            ("sum", {"r1": 1, "r2": 1}, I("T,V,X1", "Y2,S2") - cost),
        ]
    else:
        raise ArgumentError(f"unknown outer bound {which!r}")
    return RegionConstraints.build(items, meta=_with_meta({"scheme": which}, f))


def eval_point_to_point(rate_s: float, dist: FiniteDist) -> float:
    """Rate of the state-dependent point-to-point scheme for one input law.

    ``dist`` is a joint over ``U, S, X, Y``. The first term is the
    superposition rate, the inner max picks the better of treating the state
    as a rate-``rate_s`` codebook or binning against it. A non-positive result
    means the law supports no positive rate.
    """
    I = dist.I
    return min(I("X", "Y", "S"),
               max(I("U,S", "Y") - rate_s, I("U", "Y") - I("U", "S")))
