"""JSON formats for channels and atomic artifact writing."""
from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path
from typing import Any, Mapping

import numpy as np

from . import __version__
from .dmc import CHANNEL_VARS, DmcChannel, FactoredInput
from .errors import ArgumentError
from .gaussian import GaussianChannel


def _tensor(a: np.ndarray) -> dict:
    return {"shape": list(a.shape), "data": np.asarray(a, float).ravel().tolist()}


def _untensor(d: Mapping, what: str) -> np.ndarray:
    try:
        return np.asarray(d["data"], dtype=float).reshape(d["shape"])
    except (KeyError, ValueError, TypeError) as e:
        raise ArgumentError(f"{what}: malformed tensor ({e})") from e


def channel_to_dict(ch: DmcChannel) -> dict:
    return {
        "kind": "dmc_channel",
        "variables": [{"name": n, "size": s} for n, s in ch.sizes.items()],
        "law": _tensor(ch.law),
        "state_joint": _tensor(ch.state_joint),
    }


def channel_from_dict(d: Mapping) -> DmcChannel:
    if d.get("kind") != "dmc_channel":
        raise ArgumentError("expected a document with kind 'dmc_channel'")
    names = [v["name"] for v in d["variables"]]
    if tuple(names) != CHANNEL_VARS:
        raise ArgumentError(f"channel variables must be {list(CHANNEL_VARS)} in order")
    law = _untensor(d["law"], "law")
    if list(law.shape) != [v["size"] for v in d["variables"]]:
        raise ArgumentError("law shape does not match the variable table")
    if "state_joint" in d:
        return DmcChannel(law, _untensor(d["state_joint"], "state_joint"))
    return DmcChannel.from_priors(law, d.get("s1_prior"), d.get("s2_prior"))


def gaussian_from_dict(d: Mapping) -> GaussianChannel:
    keys = ("p1", "p2", "k1", "k2", "a", "b")
    missing = [k for k in keys if k not in d]
    if missing:
        raise ArgumentError(f"gaussian channel file lacks {missing}")
    return GaussianChannel(**{k: float(d[k]) for k in keys})


def load_json(path: str | os.PathLike) -> Any:
    p = Path(path)
    if not p.is_file():
        raise ArgumentError(f"file not found: {p}")
    try:
        return json.loads(p.read_text())
    except json.JSONDecodeError as e:
        raise ArgumentError(f"{p}: invalid JSON ({e})") from e


def load_channel(path) -> DmcChannel:
    return channel_from_dict(load_json(path))


def load_input(path) -> FactoredInput:
    d = load_json(path)
    if d.get("kind") != "factored_input":
        raise ArgumentError(f"{path}: expected kind 'factored_input'")
    return FactoredInput.from_dict(d)


def header(command: str, config: Mapping, seed: int | None) -> dict:
    """Reproducibility header: command, full config, seed and package version."""
    return {"command": command, "config": dict(config), "seed": seed, "version": __version__}


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def atomic_write(path: str | os.PathLike, text: str) -> None:
    """Write ``text`` via a temporary sibling and rename, so no partial file survives."""
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=p.parent, prefix=f".{p.name}.", suffix=".part")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, p)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise
