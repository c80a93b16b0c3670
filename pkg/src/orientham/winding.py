"""Winding oriented paths around a cyclic sequence of clusters.

The first vertex of a path lands in a uniformly random cluster; each later
vertex moves one cluster forward after a forward edge and one back after a
backward edge.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InputError


def parse_path_spec(spec: str, seed: int | None = None) -> list[str]:
    """Paths from ``COUNTxORDER[:dir|anti|rand]``, e.g. ``1000x10``.

    Each path is its sign string, with ``ORDER - 1`` signs.
    """
    m = re.fullmatch(r"\s*(\d+)\s*x\s*(\d+)\s*(?::\s*(dir|anti|rand))?\s*", spec)
    if not m:
        raise InputError(f"path spec {spec!r} must look like COUNTxORDER[:dir|anti|rand]")
    count, order, kind = int(m.group(1)), int(m.group(2)), m.group(3) or "dir"
    if order < 1:
        raise InputError("paths need at least one vertex")
    if kind == "dir":
        return ["+" * (order - 1)] * count
    if kind == "anti":
        return [("+-" * order)[: order - 1]] * count
    if seed is None:
        raise InputError("random path orientations need a seed")
    rng = np.random.default_rng(seed)
    return ["".join(np.where(rng.random(order - 1) < 0.5, "+", "-")) for _ in range(count)]


@dataclass(frozen=True)
class _Offsets:
    owner: np.ndarray   # path index of every vertex
    offset: np.ndarray  # cluster offset of every vertex relative to its path start
    total: int


def _offsets(paths: Sequence[str]) -> _Offsets:
    owners, offsets = [], []
    for i, signs in enumerate(paths):
        if set(signs) - {"+", "-"}:
            raise InputError(f"path {i} has characters other than '+' and '-'")
        steps = np.fromiter((1 if c == "+" else -1 for c in signs), dtype=np.int64, count=len(signs))
        offsets.append(np.concatenate(([0], np.cumsum(steps))))
        owners.append(np.full(len(signs) + 1, i, dtype=np.int64))
    if not offsets:
        return _Offsets(np.zeros(0, np.int64), np.zeros(0, np.int64), 0)
    owner = np.concatenate(owners)
    return _Offsets(owner, np.concatenate(offsets), len(owner))


@dataclass(frozen=True)
class WindingResult:
    loads: np.ndarray
    clusters: list[np.ndarray]

    @property
    def total(self) -> int:
        return int(self.loads.sum())


def wind_paths(k: int, paths: Sequence[str], seed: int) -> WindingResult:
    """Assign every vertex of every path to a cluster in ``0..k-1``."""
    if k < 1:
        raise InputError("need at least one cluster")
    off = _offsets(paths)
    rng = np.random.default_rng(seed)
    starts = rng.integers(0, k, size=len(paths))
    cluster = (starts[off.owner] + off.offset) % k if off.total else off.offset
    loads = np.bincount(cluster, minlength=k)
    bounds = np.cumsum([0] + [len(p) + 1 for p in paths])
    return WindingResult(loads, [cluster[a:b] for a, b in zip(bounds, bounds[1:])])


@dataclass(frozen=True)
class ConcentrationReport:
    k: int
    n: int
    eps: float
    trials: int
    max_deviation: np.ndarray  # per trial, max_i |a(i) - n / k|
    conserved: bool

    @property
    def within(self) -> np.ndarray:
        return self.max_deviation <= self.eps * self.n

    @property
    def fraction_within(self) -> float:
        return float(self.within.mean()) if self.trials else 1.0

    def to_json(self) -> dict:
        dev = self.max_deviation
        return {
            "k": self.k,
            "n": self.n,
            "eps": self.eps,
            "trials": self.trials,
            "fraction_within": self.fraction_within,
            "conserved": self.conserved,
            "max_deviation": {
                "mean": float(dev.mean()) if dev.size else 0.0,
                "max": float(dev.max()) if dev.size else 0.0,
                "p95": float(np.quantile(dev, 0.95)) if dev.size else 0.0,
            },
        }


def concentration_experiment(
    k: int,
    paths: Sequence[str],
    trials: int,
    eps: float,
    seed: int,
    max_order: float | None | str = "auto",
) -> ConcentrationReport:
    """Repeat ``wind_paths`` and record the worst cluster deviation per trial.

    ``max_order`` caps path orders; ``"auto"`` uses the cube root of the total
    number of vertices and ``None`` disables the cap.
    """
    off = _offsets(paths)
    n = off.total
    cap = n ** (1 / 3) if max_order == "auto" else max_order
    if cap is not None:
        longest = max((len(p) + 1 for p in paths), default=0)
        if longest > cap + 1e-9:
            raise InputError(f"a path has {longest} vertices, above the cap {cap:.3g}")
    seeds = np.random.SeedSequence(seed).spawn(trials)
    dev = np.empty(trials)
    conserved = True
    for i, ss in enumerate(seeds):
        rng = np.random.default_rng(ss)
        starts = rng.integers(0, k, size=len(paths))
        loads = np.bincount((starts[off.owner] + off.offset) % k, minlength=k) if n else np.zeros(k, np.int64)
        conserved &= int(loads.sum()) == n
        dev[i] = np.abs(loads - n / k).max()
    return ConcentrationReport(k, n, eps, trials, dev, bool(conserved))
