"""Four-part vertex partitions (W, X, Y, Z) arranged around a 4-cycle."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .errors import InputError
from .graph import OrientedGraph, mask_of

PARTS = ("W", "X", "Y", "Z")
SUCCESSOR = {"W": "X", "X": "Y", "Y": "Z", "Z": "W"}
PREDECESSOR = {v: k for k, v in SUCCESSOR.items()}


@dataclass(frozen=True)
class QuadPartition:
    W: frozenset[int]
    X: frozenset[int]
    Y: frozenset[int]
    Z: frozenset[int]

    @classmethod
    def of(cls, W: Iterable[int], X: Iterable[int], Y: Iterable[int], Z: Iterable[int], n: int | None = None) -> "QuadPartition":
        part = cls(frozenset(W), frozenset(X), frozenset(Y), frozenset(Z))
        part.validate(n)
        return part

    def validate(self, n: int | None = None) -> None:
        seen: set[int] = set()
        for name in PARTS:
            block = self[name]
            clash = seen & block
            if clash:
                raise InputError(f"vertex {min(clash)} appears in more than one part")
            seen |= block
        if n is not None and seen != set(range(n)):
            missing = sorted(set(range(n)) - seen)
            extra = sorted(seen - set(range(n)))
            raise InputError(f"partition does not cover 0..{n - 1} exactly (missing {missing}, extra {extra})")

    def __getitem__(self, name: str) -> frozenset[int]:
        if name not in PARTS:
            raise KeyError(name)
        return getattr(self, name)

    def mask(self, *names: str) -> int:
        return mask_of(v for name in names for v in self[name])

    def part_of(self, v: int) -> str:
        for name in PARTS:
            if v in self[name]:
                return name
        raise InputError(f"vertex {v} is not in the partition")

    def sizes(self) -> dict[str, int]:
        return {name: len(self[name]) for name in PARTS}

    def moved(self, v: int, target: str) -> "QuadPartition":
        """Partition with ``v`` moved into part ``target``."""
        parts = {name: set(self[name]) - {v} for name in PARTS}
        parts[target].add(v)
        return QuadPartition.of(**parts)

    def swapped(self, a: str, b: str) -> "QuadPartition":
        parts = {name: self[name] for name in PARTS}
        parts[a], parts[b] = parts[b], parts[a]
        return QuadPartition(**parts)

    def restricted(self, index_map: list[int]) -> "QuadPartition":
        """Partition of an induced subgraph whose ``index_map[new] == old``."""
        pos = {old: new for new, old in enumerate(index_map)}
        return QuadPartition.of(*(
            (pos[v] for v in self[name] if v in pos) for name in PARTS
        ), n=len(index_map))

    def to_json(self) -> dict:
        return {name: sorted(self[name]) for name in PARTS}

    @classmethod
    def from_json(cls, data: dict, n: int | None = None) -> "QuadPartition":
        try:
            return cls.of(*(data[name] for name in PARTS), n=n)
        except KeyError as exc:
            raise InputError(f"partition JSON lacks part {exc}") from exc


def special_edges(g: OrientedGraph, part: QuadPartition) -> list[tuple[int, int]]:
    """Edges of ``E(W u Z, Y u Z)`` together with ``E(X u Y, W u X)``."""
    wz, yz = part.mask("W", "Z"), part.mask("Y", "Z")
    xy, wx = part.mask("X", "Y"), part.mask("W", "X")
    return [
        (u, v)
        for u, v in g.edges
        if ((wz >> u) & 1 and (yz >> v) & 1) or ((xy >> u) & 1 and (wx >> v) & 1)
    ]


def count_edges_between(g: OrientedGraph, src: int, dst: int) -> int:
    return sum((g.out_masks[u] & dst).bit_count() for u in range(g.n) if (src >> u) & 1)
