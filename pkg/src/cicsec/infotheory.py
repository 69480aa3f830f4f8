"""Entropy and mutual information over joint laws on finite alphabets.

All quantities are in bits. A :class:`FiniteDist` is a dense probability
tensor with one named axis per random variable; variable subsets are passed
either as iterables of names or as a comma separated string (``"Y2,S2"``).
"""
from __future__ import annotations

import math
import string
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence, Union

import numpy as np

from .errors import (
    ArgumentError,
    CapacityError,
    DistributionError,
    DomainError,
    NameResolutionError,
)

VarSet = Union[str, Iterable[str]]

MAX_CELLS = 2 ** 24
NORM_TOL = 1e-12
ZERO_PROB = 1e-15
MI_CLAMP_TOL = 1e-12


def as_names(vs: VarSet | None) -> tuple[str, ...]:
    """Normalize a variable-set argument to a tuple of names."""
    if vs is None:
        return ()
    if isinstance(vs, str):
        return tuple(s.strip() for s in vs.split(",") if s.strip())
    return tuple(vs)


@dataclass(frozen=True, eq=False)
class FiniteDist:
    names: tuple[str, ...]
    probs: np.ndarray
    _memo: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        names = tuple(self.names)
        probs = np.array(self.probs, dtype=float)
        if len(set(names)) != len(names):
            raise DistributionError(f"duplicate variable names in {names}")
        if probs.ndim != len(names):
            raise DistributionError(
                f"tensor has {probs.ndim} axes but {len(names)} variables were named"
            )
        if any(s < 1 for s in probs.shape):
            raise DistributionError("alphabet sizes must be >= 1")
        if probs.size > MAX_CELLS:
            raise CapacityError(
                f"joint alphabet has {probs.size} cells, cap is {MAX_CELLS}"
            )
        if not np.all(np.isfinite(probs)) or np.any(probs < 0):
            raise DistributionError("probabilities must be finite and non-negative")
        total = probs.sum()
        if abs(total - 1.0) > NORM_TOL:
            raise DistributionError(f"probabilities sum to {total!r}, not 1")
        probs.setflags(write=False)
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "probs", probs)

    @property
    def sizes(self) -> dict[str, int]:
        return dict(zip(self.names, self.probs.shape))

    @property
    def variables(self) -> list[tuple[str, int]]:
        return list(zip(self.names, self.probs.shape))

    def axes(self, vs: VarSet) -> tuple[int, ...]:
        out = []
        for n in as_names(vs):
            try:
                out.append(self.names.index(n))
            except ValueError:
                raise NameResolutionError(
                    f"variable {n!r} not in distribution {self.names}"
                ) from None
        return tuple(out)

    def marginal(self, keep: VarSet) -> "FiniteDist":
        return marginalize(self, keep)

    def H(self, vs: VarSet, given: VarSet = ()) -> float:
        return entropy(self, vs, given)

    def I(self, a: VarSet, b: VarSet, given: VarSet = ()) -> float:
        return mutual_info(self, a, b, given)

    def with_names(self, mapping: Mapping[str, str]) -> "FiniteDist":
        return FiniteDist(tuple(mapping.get(n, n) for n in self.names), self.probs)

    def reorder(self, order: Sequence[str]) -> "FiniteDist":
        ax = self.axes(order)
        if len(ax) != len(self.names):
            raise ArgumentError("reorder needs every variable exactly once")
        return FiniteDist(tuple(order), np.transpose(self.probs, ax))

    # construction helpers

    @classmethod
    def uniform(cls, **sizes: int) -> "FiniteDist":
        shape = tuple(sizes.values())
        return cls(tuple(sizes), np.full(shape, 1.0 / math.prod(shape)))

    @classmethod
    def from_factors(
        cls,
        sizes: Mapping[str, int],
        factors: Sequence[tuple[Sequence[str], np.ndarray]],
        order: Sequence[str] | None = None,
    ) -> "FiniteDist":
        """Multiply named factor tensors into a joint law.

        Each factor is ``(names, array)``; the product is taken with einsum so
        the cell count of the result is the only memory cost.
        """
        order = tuple(order) if order is not None else tuple(sizes)
        cells = math.prod(sizes[n] for n in order)
        if cells > MAX_CELLS:
            raise CapacityError(f"joint alphabet has {cells} cells, cap is {MAX_CELLS}")
        if len(order) > len(string.ascii_letters):
            raise ArgumentError("too many variables")
        letter = {n: string.ascii_letters[i] for i, n in enumerate(order)}
        operands, subs = [], []
        for names, arr in factors:
            names = as_names(names)
            arr = np.asarray(arr, dtype=float)
            for n, s in zip(names, arr.shape):
                if n not in letter:
                    raise NameResolutionError(f"factor variable {n!r} not in {order}")
                if sizes[n] != s:
                    raise DistributionError(
                        f"factor axis {n!r} has size {s}, expected {sizes[n]}"
                    )
            if arr.ndim != len(names):
                raise DistributionError(f"factor over {names} has {arr.ndim} axes")
            operands.append(arr)
            subs.append("".join(letter[n] for n in names))
        used = set("".join(subs))
        missing = [n for n in order if letter[n] not in used]
        if any(sizes[n] != 1 for n in missing):
            raise DistributionError(f"no factor mentions variables {missing}")
        out = "".join(letter[n] for n in order if letter[n] in used)
        probs = np.einsum(",".join(subs) + "->" + out, *operands)
        return cls(order, probs.reshape(tuple(sizes[n] for n in order)))


def marginalize(dist: FiniteDist, keep: VarSet) -> FiniteDist:
    """Sum out every variable not in ``keep``; axis order follows ``dist``."""
    keep_ax = set(dist.axes(keep))
    drop = tuple(i for i in range(len(dist.names)) if i not in keep_ax)
    names = tuple(n for i, n in enumerate(dist.names) if i in keep_ax)
    if not drop:
        return dist
    return FiniteDist(names, dist.probs.sum(axis=drop))


def _joint_entropy(dist: FiniteDist, axes: frozenset[int]) -> float:
    memo = dist._memo
    if axes in memo:
        return memo[axes]
    if not axes:
        h = 0.0
    else:
        drop = tuple(i for i in range(dist.probs.ndim) if i not in axes)
        p = dist.probs.sum(axis=drop) if drop else dist.probs
        p = p[p > ZERO_PROB]
        h = float(-np.sum(p * np.log2(p)))
    memo[axes] = h
    return h


def entropy(dist: FiniteDist, vars: VarSet, given: VarSet = ()) -> float:
    """H(vars | given) in bits with 0 log 0 = 0."""
    a = frozenset(dist.axes(vars))
    g = frozenset(dist.axes(given))
    if a & g:
        raise ArgumentError("entropy: vars and given overlap")
    h = _joint_entropy(dist, a | g) - _joint_entropy(dist, g)
    return max(h, 0.0) if h > -MI_CLAMP_TOL else h


def mutual_info(dist: FiniteDist, a: VarSet, b: VarSet, given: VarSet = ()) -> float:
    """I(a; b | given) in bits; tiny negative round-off is clamped to 0."""
    A = frozenset(dist.axes(a))
    B = frozenset(dist.axes(b))
    G = frozenset(dist.axes(given))
    if A & B or A & G or B & G:
        raise ArgumentError("mutual_info: variable sets must be pairwise disjoint")
    h = _joint_entropy
    val = h(dist, A | G) + h(dist, B | G) - h(dist, A | B | G) - h(dist, G)
    if val < 0 and val > -MI_CLAMP_TOL:
        return 0.0
    return val


def gaussian_capacity(x: float) -> float:
    """½·log2(1 + x), the capacity of a real AWGN channel at SNR ``x``."""
    if not x >= 0:
        raise DomainError(f"gaussian_capacity needs x >= 0, got {x!r}")
    return 0.5 * math.log2(1.0 + x)


def binary_entropy(p: float) -> float:
    if p <= 0 or p >= 1:
        return 0.0
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)
