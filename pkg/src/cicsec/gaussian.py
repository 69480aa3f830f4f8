"""Closed-form regions for the Gaussian cognitive interference channel.

Model: ``Y1 = X1 + a X2 + S1 + S2 + Z1`` and ``Y2 = b X1 + X2 + S1 + S2 + Z2``
with unit-variance noise, state variances ``k1``, ``k2`` and powers ``p1``, ``p2``.
Inner bounds come in two flavours: binning against the primary codeword and
the state (GPC, dirty-paper style) and superposition coding (SPC).
"""
from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass

from .constraints import RegionConstraints
from .errors import (
    ArgumentError,
    PowerSplitError,
    SingularityError,
    StrongInterferenceError,
    WeakInterferenceError,
)
from .infotheory import gaussian_capacity as C


class Interference(str, enum.Enum):
    WEAK = "weak"
    STRONG = "strong"


@dataclass(frozen=True)
class GaussianChannel:
    p1: float
    p2: float
    k1: float
    k2: float
    a: float
    b: float

    def __post_init__(self):
        for name in ("p1", "p2", "k1", "k2", "a", "b"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise ArgumentError(f"{name} must be finite, got {v!r}")
        for name in ("p1", "p2", "k1", "k2"):
            if getattr(self, name) < 0:
                raise ArgumentError(f"{name} must be >= 0")

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class GpcParams:
    rho: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.rho <= 1.0:
            raise ArgumentError(f"rho must lie in [0, 1], got {self.rho}")


@dataclass(frozen=True)
class SpcParams:
    """Power split for superposition coding.

    ``rho`` is the share of P2 carrying the private message, ``rho1`` the
    cooperation coefficient with X1, ``rho2`` the state-cooperation coefficient.
    """

    rho: float = 1.0
    rho1: float = 0.0
    rho2: float = 0.0

    def __post_init__(self):
        for name in ("rho", "rho1", "rho2"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise PowerSplitError(f"{name} must lie in [0, 1], got {v}")
        budget = 1.0 - self.rho1 ** 2 - self.rho2 ** 2
        if budget < -1e-12:
            raise PowerSplitError("rho1^2 + rho2^2 must not exceed 1")
        if self.rho > budget + 1e-12:
            raise PowerSplitError(
                f"rho={self.rho} exceeds the remaining power fraction {budget:.6g}"
            )


def classify_interference(ch: GaussianChannel) -> Interference:
    """Weak iff |a| <= 1 (the boundary a = 1 is weak)."""
    return Interference.WEAK if abs(ch.a) <= 1.0 else Interference.STRONG


def _require_weak(ch: GaussianChannel, what: str):
    if classify_interference(ch) is not Interference.WEAK:
        raise WeakInterferenceError(
            f"{what} needs weak interference (|a| <= 1), got a={ch.a}; "
            "use eval_outer_strong for a > 1"
        )


def _require_k1(ch: GaussianChannel):
    if ch.k1 <= 0:
        raise SingularityError("superposition bounds contain -½log2(K1); K1 must be > 0")


def eval_gpc(ch: GaussianChannel, p: GpcParams | float = GpcParams()) -> RegionConstraints:
    """Binning (dirty-paper) inner bound for weak interference."""
    if not isinstance(p, GpcParams):
        p = GpcParams(float(p))
    _require_weak(ch, "eval_gpc")
    share = 1.0 - p.rho ** 2
    r2 = C(share * ch.p2)
    return RegionConstraints.build(
        [
            ("r1", {"r1": 1}, C(ch.p1 / (ch.k2 + 1.0))),
            ("r2", {"r2": 1}, r2),
            ("re2", {"re2": 1}, r2 - C(share * ch.a ** 2 * ch.p2)),
        ],
        meta={"scheme": "gpc", "rho": p.rho},
    )


def eval_outer_strong(ch: GaussianChannel, rho: float = 0.0) -> RegionConstraints:
    """Outer bound for strong interference; receiver 1 sees X2 better, so no secrecy."""
    if not 0.0 <= rho <= 1.0:
        raise ArgumentError(f"rho must lie in [0, 1], got {rho}")
    if classify_interference(ch) is not Interference.STRONG:
        raise StrongInterferenceError(
            f"eval_outer_strong needs strong interference (|a| > 1), got a={ch.a}"
        )
    cross = 2.0 * rho * math.sqrt(ch.p1 * ch.p2)
    return RegionConstraints.build(
        [
            ("r2", {"r2": 1}, C((1.0 - rho ** 2) * ch.p2)),
            ("sum_rx1", {"r1": 1, "r2": 1}, C(ch.p1 + ch.a ** 2 * ch.p2 + ch.a * cross)),
            ("sum_rx2", {"r1": 1, "r2": 1}, C(ch.b ** 2 * ch.p1 + ch.p2 + ch.b * cross)),
            ("re2", {"re2": 1}, 0.0),
        ],
        meta={"scheme": "outer_strong", "rho": rho},
    )


def eval_spc(ch: GaussianChannel, p: SpcParams = SpcParams()) -> RegionConstraints:
    """Superposition inner bound with the three-way power split of X2."""
    _require_weak(ch, "eval_spc")
    _require_k1(ch)
    p1, p2, k1, k2, a, b = ch.p1, ch.p2, ch.k1, ch.k2, ch.a, ch.b
    p2pp = p.rho * p2
    coop = math.sqrt(p1 * p2)
    state_coop = math.sqrt(p2 * k1)
    r1_num = p1 + a * a * p2 + k1 + k2 + 1.0 + 2 * a * p.rho1 * coop + 2 * a * p.rho2 * state_coop
    r1_den = k1 * (a * a * p2pp + k2 + 1.0)
    sum_arg = b * b * p1 + p2 + k1 + 2 * b * p.rho1 * coop + 2 * p.rho2 * state_coop
    return RegionConstraints.build(
        [
            ("r1", {"r1": 1}, C(r1_num / r1_den)),
            ("r2", {"r2": 1}, C(p2pp)),
            ("sum", {"r1": 1, "r2": 1}, C(sum_arg) - 0.5 * math.log2(k1)),
            ("re2", {"re2": 1}, C(p2pp) - C(a * a * p2pp / (k2 + 1.0))),
        ],
        meta={"scheme": "spc", "rho": p.rho, "rho1": p.rho1, "rho2": p.rho2},
    )


def eval_spc_perfect(ch: GaussianChannel) -> RegionConstraints:
    """Superposition with all of P2 on the private message, read at perfect secrecy.

    The ``r2`` bound is already a secrecy rate, so ``re2`` repeats it.
    """
    _require_weak(ch, "eval_spc_perfect")
    _require_k1(ch)
    p1, p2, k1, k2, a, b = ch.p1, ch.p2, ch.k1, ch.k2, ch.a, ch.b
    leak = a * a * p2
    r2 = C(p2) - C(leak / (k2 + 1.0))
    return RegionConstraints.build(
        [
            ("r1", {"r1": 1}, C((p1 + leak + k1 + k2 + 1.0) / (k1 * (leak + k2 + 1.0)))),
            ("r2", {"r2": 1}, r2),
            ("sum", {"r1": 1, "r2": 1}, C(b * b * p1 + p2 + k1) - 0.5 * math.log2(k1)),
            ("re2", {"re2": 1}, r2),
        ],
        meta={"scheme": "spc_perfect"},
    )


@dataclass(frozen=True)
class Crossover:
    """Cross-gain threshold where GPC and SPC swap the better primary rate.

    ``value`` is None when the defining quotient is not strictly positive and
    finite; ``diagnosis`` says why. ``spc_wins_below`` records whether SPC
    gives the larger R1 for |a| < value. A positive quotient with a negative
    denominator would need ``p1 + k1 < 0``, so for valid channels it is
    always True when the value is defined.
    """

    value: float | None
    numerator: float
    denominator: float
    diagnosis: str
    spc_wins_below: bool | None = None

    @property
    def defined(self) -> bool:
        return self.value is not None


def crossover_a_dagger(ch: GaussianChannel) -> Crossover:
    p1, p2, k1, k2 = ch.p1, ch.p2, ch.k1, ch.k2
    num = (k2 + 1.0) * (p1 + k1 + k2 + 1.0) - p1 * k1 * (k2 + 1.0)
    den = p1 * p2 * k1 - p2 * (k2 + 1.0)
    if den == 0.0:
        return Crossover(None, num, den, "undefined: zero denominator")
    q = num / den
    if not math.isfinite(q):
        return Crossover(None, num, den, "undefined: non-finite quotient")
    if q <= 0.0:
        sn = "positive" if num > 0 else ("zero" if num == 0 else "negative")
        sd = "positive" if den > 0 else "negative"
        return Crossover(None, num, den,
                         f"undefined: non-positive quotient (numerator {sn}, denominator {sd})")
    return Crossover(math.sqrt(q), num, den, "defined", spc_wins_below=den > 0)
