"""Monte Carlo simulation of the two-step binning code at tiny blocklengths.

Random codebooks are drawn from a binning design distribution, the cognitive
encoder runs a two-stage typicality bin search against the primary codeword
and its state sequence, both decoders search all codeword tuples for joint
typicality, and the equivocation at receiver 1 is computed exactly by
enumerating the posterior of the cognitive message under the fixed code.

Index conventions are 0-based: "bin 1" of the construction is index 0.
"""
from __future__ import annotations

import csv
import io
import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.special import xlogy

from .dmc import DmcChannel, FactoredInput, Scheme, binning_input
from .errors import ArgumentError, CapacityError, SchemeError
from .infotheory import as_names

MAX_CODEBOOK_CELLS = 2 ** 24
MAX_ENUMERATION = 2 ** 24
RATE_SLACK = 1e-9


def family_size(n: int, rate: float) -> int:
    """``ceil(2^(n*rate))``, never below 1; tiny float excess is forgiven."""
    if rate <= 0:
        return 1
    return max(1, math.ceil(2.0 ** (n * rate) - RATE_SLACK))


@dataclass(frozen=True)
class SimRates:
    r1a: float = 0.0
    r1b: float = 0.0
    r2a: float = 0.0
    r2b: float = 0.0
    r2a_bin: float = 0.0
    r2b_bin: float = 0.0
    l1: float = 0.0
    l2: float = 0.0

    def __post_init__(self):
        for k, v in asdict(self).items():
            if not math.isfinite(v) or v < 0:
                raise ArgumentError(f"{k}={v!r}: rates must be finite and >= 0")

    @property
    def r1(self) -> float:
        return self.r1a + self.r1b

    @property
    def r2(self) -> float:
        return self.r2a + self.r2b


def compute_bin_rates(ch: DmcChannel, design: FactoredInput, delta: float,
                      r1a: float = 0.0, r1b: float = 0.0,
                      r2a: float = 0.0, r2b: float = 0.0) -> SimRates:
    """Bin rates that cover the encoder's search, plus the secrecy-partition rates.

    ``l1`` is floored at 0 so the result is a valid :class:`SimRates`; the
    unfloored value is what the partition needs, see :func:`build_codebooks`.
    """
    if delta <= 0:
        raise ArgumentError("delta must be > 0")
    if design.scheme is not Scheme.BINNING:
        raise SchemeError("the simulator covers the binning scheme only")
    d = design.joint(ch)
    l2 = d.I("V", "Y1,X1", "U")
    l1 = d.I("V", "Y2,S2", "U") - l2
    return SimRates(
        r1a, r1b, r2a, r2b,
        r2a_bin=d.I("V", "X1a,X1b,S1", "U") + delta,
        r2b_bin=d.I("U", "X1a,X1b,S1") + delta,
        l1=max(l1, 0.0),
        l2=l2,
    )


@dataclass(frozen=True)
class SimConfig:
    channel: DmcChannel
    design: FactoredInput
    n: int = 4
    epsilon: float = 0.1
    trials: int = 100
    seed: int = 0
    subbin_rate: float | None = None
    max_codebook_cells: int = MAX_CODEBOOK_CELLS
    max_enumeration: int = MAX_ENUMERATION
    workers: int = 1

    def __post_init__(self):
        if self.n < 1:
            raise ArgumentError("n must be >= 1")
        if not 0 < self.epsilon < 1:
            raise ArgumentError("epsilon must lie in (0, 1)")
        if self.trials < 0:
            raise ArgumentError("trials must be >= 0")
        if self.design.scheme is not Scheme.BINNING:
            raise SchemeError("the simulator covers the binning scheme only")

    def describe(self) -> dict:
        return {"n": self.n, "epsilon": self.epsilon, "trials": self.trials,
                "seed": self.seed, "subbin_rate": self.subbin_rate,
                "max_enumeration": self.max_enumeration}


@dataclass(frozen=True, eq=False)
class Codebook:
    """Codeword arrays (last axis is time) and the deterministic maps.

    ``v`` is indexed ``[w2b, b2b, ab, b2a]`` where ``ab = a * nB + b`` encodes
    the secrecy pair; ``subbin[b]`` is the sub-bin ``c`` that ``b`` falls in.
    """

    n: int
    x1a: np.ndarray          # [N1a, n]
    x1b: np.ndarray          # [N1a, N1b, n]
    u: np.ndarray            # [N2b, Nb2b, n]
    v: np.ndarray            # [N2b, Nb2b, nA*nB, Nb2a, n]
    x1_map: np.ndarray       # [|X1a|, |X1b|] -> x1
    x2_map: np.ndarray       # [|U|, |V|, |X1|, |S1|] -> x2
    n_a: int
    n_b: int
    n_c: int
    subbin: np.ndarray       # [nB] -> c

    @property
    def n_w1(self) -> int:
        return self.x1b.shape[0] * self.x1b.shape[1]

    @property
    def n_w2a(self) -> int:
        return self.n_a * self.n_c

    @property
    def n_w2(self) -> int:
        return self.n_w2a * self.u.shape[0]

    def subbin_members(self, c: int) -> np.ndarray:
        return np.flatnonzero(self.subbin == c)

    def identical(self, other: "Codebook") -> bool:
        names = ("x1a", "x1b", "u", "v", "x1_map", "x2_map", "subbin")
        return all(np.array_equal(getattr(self, k), getattr(other, k)) for k in names)


@dataclass
class TrialResult:
    trials: int
    pe1: float
    pe2: float
    equivocation: float | None
    equivocation_note: str
    r1: float
    r2: float
    stage1_failures: int
    stage2_failures: int
    trace: list = field(default_factory=list, repr=False)

    @property
    def pe(self) -> float:
        return max(self.pe1, self.pe2)

    def to_dict(self, with_trace: bool = False) -> dict:
        d = {"trials": self.trials, "pe1": self.pe1, "pe2": self.pe2, "pe": self.pe,
             "equivocation": self.equivocation, "equivocation_note": self.equivocation_note,
             "r1": self.r1, "r2": self.r2, "stage1_failures": self.stage1_failures,
             "stage2_failures": self.stage2_failures}
        if with_trace:
            d["trace"] = self.trace
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "TrialResult":
        keys = ("trials", "pe1", "pe2", "equivocation", "equivocation_note", "r1", "r2",
                "stage1_failures", "stage2_failures")
        return cls(**{k: d[k] for k in keys}, trace=list(d.get("trace", [])))

    def trace_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["trial", "w1", "w2", "b2b", "b2a", "w1_hat", "w2_hat", "ok1", "ok2"])
        for row in self.trace:
            w.writerow([row[k] for k in ("trial", "w1", "w2", "b2b", "b2a", "w1_hat",
                                         "w2_hat", "ok1", "ok2")])
        return buf.getvalue()


# ------------------------------------------------------------------ design

class _Design:
    """Marginals of the design joint used by codebook draws and typicality tests."""

    def __init__(self, ch: DmcChannel, design: FactoredInput):
        self.ch = ch
        self.joint = design.joint(ch)
        f = design.factors
        self.x1_map = f["x1_map"].argmax(axis=-1)
        self.x2_map = f["x2_map"].argmax(axis=-1)
        self._tests: dict[str, np.ndarray] = {}
        self.p_x1a = self.pmf("X1a")
        self.p_x1b_given_x1a = _conditional(self.pmf("X1a,X1b"))
        self.p_u = self.pmf("U")
        self.p_v_given_u = _conditional(self.pmf("U,V"))

    def pmf(self, names: str) -> np.ndarray:
        if names not in self._tests:
            order = as_names(names)
            self._tests[names] = self.joint.marginal(order).reorder(order).probs
        return self._tests[names]


def _conditional(j: np.ndarray) -> np.ndarray:
    """Rows of ``j[a, b]`` normalized; zero rows become uniform (never sampled)."""
    s = j.sum(axis=-1, keepdims=True)
    out = np.where(s > 0, j / np.where(s > 0, s, 1), 1.0 / j.shape[-1])
    return out


def typical(pmf: np.ndarray, seqs, eps: float) -> np.ndarray:
    """Strong typicality of symbol sequences against ``pmf``.

    ``seqs`` holds one integer array per axis of ``pmf``, broadcastable
    against each other with time on the last axis. A tuple of sequences is
    typical when every joint symbol frequency is within ``eps * p`` of its
    probability ``p``; zero-probability symbols must not occur at all.
    """
    code = np.zeros((), dtype=np.int64)
    for k, s in enumerate(seqs):
        code = code * pmf.shape[k] + np.asarray(s, dtype=np.int64)
    n = code.shape[-1]
    p = pmf.ravel()
    counts = (code[..., None] == np.arange(p.size)).sum(axis=-2)
    return np.all(np.abs(counts / n - p) <= eps * p + 1e-12, axis=-1)


def _draw(rng: np.random.Generator, pmf: np.ndarray, shape) -> np.ndarray:
    return rng.choice(pmf.size, size=shape, p=pmf)


def _draw_conditional(rng, cond: np.ndarray, parent: np.ndarray, reps: int) -> np.ndarray:
    """Draw ``reps`` children per parent sequence, symbol by symbol."""
    out = np.empty((reps,) + parent.shape, dtype=np.int64)
    u = rng.random(out.shape)
    cdf = np.cumsum(cond, axis=-1)
    rows = cdf[parent]                                     # [..., n, k]
    out[:] = (u[..., None] > rows[None]).sum(axis=-1)
    return np.minimum(out, cond.shape[-1] - 1)


# ------------------------------------------------------------------ codebook

def _partition_sizes(n: int, rates: SimRates, subbin_rate: float | None):
    if rates.r2a + RATE_SLACK < rates.l1:
        raise NotImplementedError(
            f"r2a={rates.r2a} < l1={rates.l1}: the perfect-secrecy variant of the "
            "secrecy mapping is not implemented"
        )
    n_a = family_size(n, rates.r2a - rates.l1)
    n_b = family_size(n, rates.l1)
    n_c = family_size(n, rates.l1 if subbin_rate is None else subbin_rate)
    if n_c > n_b:
        raise ArgumentError(f"{n_c} sub-bins cannot partition {n_b} secrecy indices")
    return n_a, n_b, n_c


def build_codebooks(cfg: SimConfig, rates: SimRates) -> Codebook:
    n = cfg.n
    des = _Design(cfg.channel, cfg.design)
    n1a, n1b = family_size(n, rates.r1a), family_size(n, rates.r1b)
    n2b, nb2b = family_size(n, rates.r2b), family_size(n, rates.r2b_bin)
    nb2a = family_size(n, rates.r2a_bin)
    n_a, n_b, n_c = _partition_sizes(n, rates, cfg.subbin_rate)
    cells = n * (n1a + n1a * n1b + n2b * nb2b * (1 + n_a * n_b * nb2a))
    if cells > cfg.max_codebook_cells:
        raise CapacityError(f"codebooks need {cells} symbols, cap is {cfg.max_codebook_cells}")
    rng = np.random.default_rng([cfg.seed, 0])
    x1a = _draw(rng, des.p_x1a, (n1a, n))
    x1b = _draw_conditional(rng, des.p_x1b_given_x1a, x1a, n1b).transpose(1, 0, 2)
    u = _draw(rng, des.p_u, (n2b, nb2b, n))
    v = _draw_conditional(rng, des.p_v_given_u, u, n_a * n_b * nb2a)
    v = np.moveaxis(v, 0, 2).reshape(n2b, nb2b, n_a * n_b, nb2a, n)
    subbin = np.arange(n_b) % n_c
    return Codebook(n, x1a, x1b, u, v, des.x1_map, des.x2_map, n_a, n_b, n_c, subbin)


# ------------------------------------------------------------------ coding

def _split_w1(cb: Codebook, w1: int):
    return divmod(w1, cb.x1b.shape[1])


def _split_w2(cb: Codebook, w2: int):
    """``w2 -> (w2b, a, c)`` with ``w2a = a * n_c + c``."""
    w2a, w2b = divmod(w2, cb.u.shape[0])
    a, c = divmod(w2a, cb.n_c)
    return w2b, a, c


@dataclass(frozen=True)
class Encoded:
    x1: np.ndarray
    x2: np.ndarray
    b2b: int
    b2a: int
    stage1_failed: bool
    stage2_failed: bool


def encode(cb: Codebook, des: _Design, eps: float, w1: int, w2: int, b: int,
           s1: np.ndarray) -> Encoded:
    """Both transmitters' codewords for messages ``w1``, ``w2``.

    ``b`` is the secrecy index drawn from the sub-bin of ``w2``. A failed
    bin search falls back to index 0 and is flagged.
    """
    w1a, w1b = _split_w1(cb, w1)
    w2b, a, c = _split_w2(cb, w2)
    if cb.subbin[b] != c:
        raise ArgumentError(f"secrecy index {b} is not in sub-bin {c}")
    xa, xb = cb.x1a[w1a], cb.x1b[w1a, w1b]
    x1 = cb.x1_map[xa, xb]
    hit1 = np.flatnonzero(typical(des.pmf("U,X1a,X1b,S1"), (cb.u[w2b], xa, xb, s1), eps))
    b2b = int(hit1[0]) if hit1.size else 0
    u = cb.u[w2b, b2b]
    vs = cb.v[w2b, b2b, a * cb.n_b + b]
    hit2 = np.flatnonzero(typical(des.pmf("V,U,X1a,X1b,S1"), (vs, u, xa, xb, s1), eps))
    b2a = int(hit2[0]) if hit2.size else 0
    x2 = cb.x2_map[u, vs[b2a], x1, s1]
    return Encoded(x1, x2, b2b, b2a, hit1.size == 0, hit2.size == 0)


def decode(cb: Codebook, des: _Design, eps: float, y1: np.ndarray, y2: np.ndarray,
           s2: np.ndarray) -> tuple[int, int]:
    """Exhaustive joint-typicality decoding at both receivers.

    Receiver 1 searches ``(w1a, w1b, w2b, b2b)``, receiver 2 searches
    ``(w2b, b2b, ab, b2a)``; the first typical tuple in index order wins and
    an empty search returns index 0. Returns ``(w1_hat, w2_hat)``.
    """
    n1a, n1b = cb.x1b.shape[:2]
    n2b, nb2b = cb.u.shape[:2]
    xa = cb.x1a[:, None, None, None]
    xb = cb.x1b[:, :, None, None]
    u = cb.u[None, None]
    ok = typical(des.pmf("U,X1a,X1b,Y1"), (u, xa, xb, y1), eps).ravel()
    hit = np.flatnonzero(ok)
    w1 = int(hit[0]) // (n2b * nb2b) if hit.size else 0
    ok = typical(des.pmf("V,U,Y2,S2"), (cb.v, cb.u[:, :, None, None], y2, s2), eps).ravel()
    hit = np.flatnonzero(ok)
    if hit.size:
        w2b, rest = divmod(int(hit[0]), nb2b * cb.v.shape[2] * cb.v.shape[3])
        ab = rest % (cb.v.shape[2] * cb.v.shape[3]) // cb.v.shape[3]
        a, b = divmod(ab, cb.n_b)
        w2 = (a * cb.n_c + int(cb.subbin[b])) * n2b + w2b
    else:
        w2 = 0
    return w1, w2


def _sample_row(rng: np.random.Generator, p: np.ndarray) -> int:
    return int(min(np.searchsorted(np.cumsum(p), rng.random(), side="right"), p.size - 1))


def _run_trials(cfg: SimConfig, cb: Codebook, start: int, stop: int, keep_trace: bool):
    des = _Design(cfg.channel, cfg.design)
    ch = cfg.channel
    n = cfg.n
    ns2 = ch.sizes["S2"]
    ny2 = ch.sizes["Y2"]
    state = ch.state_joint.ravel()
    law = ch.law.reshape(ch.law.shape[:4] + (-1,))
    err1 = err2 = f1 = f2 = 0
    trace = []
    for t in range(start, stop):
        rng = np.random.default_rng([cfg.seed, 1, t])
        w1 = int(rng.integers(cb.n_w1))
        w2 = int(rng.integers(cb.n_w2))
        _, _, c = _split_w2(cb, w2)
        members = cb.subbin_members(c)
        b = int(members[rng.integers(members.size)])
        s = np.array([_sample_row(rng, state) for _ in range(n)])
        s1, s2 = np.divmod(s, ns2)
        enc = encode(cb, des, cfg.epsilon, w1, w2, b, s1)
        y = np.array([_sample_row(rng, law[enc.x1[i], enc.x2[i], s1[i], s2[i]])
                      for i in range(n)])
        y1, y2 = np.divmod(y, ny2)
        w1_hat, w2_hat = decode(cb, des, cfg.epsilon, y1, y2, s2)
        err1 += w1_hat != w1
        err2 += w2_hat != w2
        f1 += enc.stage1_failed
        f2 += enc.stage2_failed
        if keep_trace:
            trace.append({"trial": t, "w1": w1, "w2": w2, "b2b": enc.b2b, "b2a": enc.b2a,
                          "w1_hat": w1_hat, "w2_hat": w2_hat,
                          "ok1": int(w1_hat == w1), "ok2": int(w2_hat == w2)})
    return err1, err2, f1, f2, trace


def enumeration_size(cfg: SimConfig, cb: Codebook) -> int:
    states = int(np.count_nonzero(cfg.channel.state_joint)) ** cfg.n
    per_c = int(np.bincount(cb.subbin).max())
    return cb.n_w2 * cb.n_w1 * per_c * states * cfg.channel.sizes["Y1"] ** cfg.n


def exact_equivocation(cfg: SimConfig, cb: Codebook) -> float:
    """``H(W2 | Y1^n) / n`` for uniform messages under the fixed codebook.

    Sums the likelihood of every receiver-1 output sequence over the primary
    message, the secrecy index within the sub-bin and all state sequences;
    the encoder is deterministic given these.
    """
    des = _Design(cfg.channel, cfg.design)
    ch, n = cfg.channel, cfg.n
    y1_law = ch.y1_law                                    # [x1, x2, s1, s2, y1]
    ny1 = ch.sizes["Y1"]
    pairs = [(i, j, p) for (i, j), p in np.ndenumerate(ch.state_joint) if p > 0]
    lik = np.zeros((cb.n_w2, ny1 ** n))
    for w2 in range(cb.n_w2):
        _, _, c = _split_w2(cb, w2)
        members = cb.subbin_members(c)
        for seq in itertools.product(pairs, repeat=n):
            s1 = np.array([q[0] for q in seq])
            s2 = np.array([q[1] for q in seq])
            ps = math.prod(q[2] for q in seq)
            for w1 in range(cb.n_w1):
                for b in members:
                    enc = encode(cb, des, cfg.epsilon, w1, w2, int(b), s1)
                    vec = np.ones(1)
                    for i in range(n):
                        vec = np.outer(vec, y1_law[enc.x1[i], enc.x2[i], s1[i], s2[i]]).ravel()
                    lik[w2] += ps / (cb.n_w1 * members.size) * vec
    joint = lik / cb.n_w2
    py = joint.sum(axis=0)
    h_joint = -xlogy(joint, joint).sum() / math.log(2)
    h_y = -xlogy(py, py).sum() / math.log(2)
    return float(min(max(h_joint - h_y, 0.0), math.log2(cb.n_w2))) / n


def run_experiment(cfg: SimConfig, rates: SimRates, codebook: Codebook | None = None,
                   keep_trace: bool = False) -> TrialResult:
    """Monte Carlo error rates plus the exact equivocation when it is enumerable."""
    cb = codebook if codebook is not None else build_codebooks(cfg, rates)
    workers = max(1, min(cfg.workers, cfg.trials))
    chunks = [(cfg.trials * w // workers, cfg.trials * (w + 1) // workers)
              for w in range(workers)]
    if workers == 1:
        parts = [_run_trials(cfg, cb, *chunks[0], keep_trace)]
    else:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            futs = [ex.submit(_run_trials, cfg, cb, a, b, keep_trace) for a, b in chunks]
            parts = [f.result() for f in futs]
    e1, e2, f1, f2 = (sum(p[k] for p in parts) for k in range(4))
    trace = [row for p in parts for row in p[4]]
    size = enumeration_size(cfg, cb)
    if size <= cfg.max_enumeration:
        eq, note = exact_equivocation(cfg, cb), "exact"
    else:
        eq, note = None, (f"not computed: enumeration needs {size} terms, "
                          f"cap is {cfg.max_enumeration}")
    t = max(cfg.trials, 1)
    return TrialResult(
        trials=cfg.trials, pe1=e1 / t, pe2=e2 / t, equivocation=eq, equivocation_note=note,
        r1=math.log2(cb.n_w1) / cfg.n, r2=math.log2(cb.n_w2) / cfg.n,
        stage1_failures=f1, stage2_failures=f2, trace=trace,
    )


# ------------------------------------------------------------------ toys

def xor_x2_map(nu: int, nv: int, nx1: int, ns1: int, nx2: int) -> np.ndarray:
    """Default composition ``x2 = (u + v + s1) mod |X2|`` as a one-hot table."""
    arr = np.zeros((nu, nv, nx1, ns1, nx2))
    for u, v, x1, s1 in np.ndindex(nu, nv, nx1, ns1):
        arr[u, v, x1, s1, (u + v + s1) % nx2] = 1.0
    return arr


def clean_toy(y1: str = "x1") -> tuple[DmcChannel, FactoredInput]:
    """Stateless binary toy ``Y2 = X2`` with uniform inputs, constant U and V = X2.

    ``y1`` selects receiver 1's output: ``x1`` (clean parallel channel, Y1
    independent of X2) or ``x2`` (receiver 1 sees X2 exactly).
    """
    if y1 not in ("x1", "x2"):
        raise ArgumentError("y1 must be 'x1' or 'x2'")
    sizes = {"X1": 2, "X2": 2, "S1": 1, "S2": 1, "Y1": 2, "Y2": 2}
    ch = DmcChannel.from_functions(
        sizes, (lambda x1, x2, s1, s2: x1) if y1 == "x1" else (lambda x1, x2, s1, s2: x2),
        lambda x1, x2, s1, s2: x2)
    design = binning_input(ch, p_x1=[0.5, 0.5], x2_fn=lambda u, v, x1, s1: (u + v + s1) % 2)
    return ch, design
