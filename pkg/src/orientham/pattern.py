"""Cyclic orientation patterns.

A pattern of length t is a string over ``+``/``-``.  Sign ``i`` describes
the edge between cycle positions ``i`` and ``i + 1`` (indices mod t):
``+`` means the edge points forward along the traversal.
"""
from __future__ import annotations

import functools
import itertools
import random
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import InputError

SINK, SOURCE, NORMAL = "sink", "source", "normal"
_FLIP = str.maketrans("+-", "-+")


@dataclass(frozen=True)
class Pattern:
    signs: str

    def __post_init__(self):
        if not isinstance(self.signs, str) or not self.signs or set(self.signs) - {"+", "-"}:
            raise InputError(f"pattern must be a non-empty string over '+' and '-', got {self.signs!r}")

    @classmethod
    def parse(cls, value: "str | Sequence[int] | Pattern") -> "Pattern":
        if isinstance(value, Pattern):
            return value
        if isinstance(value, str):
            return cls(value.strip())
        try:
            return cls("".join("+" if int(x) > 0 else "-" for x in value))
        except (TypeError, ValueError) as exc:
            raise InputError(f"cannot read pattern from {value!r}") from exc

    @classmethod
    def directed(cls, t: int) -> "Pattern":
        return cls("+" * t)

    @classmethod
    def antidirected(cls, t: int) -> "Pattern":
        if t % 2:
            raise InputError(f"antidirected cycles have even length, got {t}")
        return cls("+-" * (t // 2))

    def __len__(self) -> int:
        return len(self.signs)

    def __str__(self) -> str:
        return self.signs

    def sign(self, i: int) -> str:
        return self.signs[i % len(self.signs)]

    def role(self, i: int) -> str:
        before, after = self.sign(i - 1), self.sign(i)
        if before == "+" and after == "-":
            return SINK
        if before == "-" and after == "+":
            return SOURCE
        return NORMAL

    def roles(self) -> list[str]:
        return [self.role(i) for i in range(len(self))]

    def sinks(self) -> list[int]:
        return [i for i in range(len(self)) if self.role(i) == SINK]

    def sources(self) -> list[int]:
        return [i for i in range(len(self)) if self.role(i) == SOURCE]

    @property
    def sigma(self) -> int:
        return len(self.sinks())

    @property
    def cycle_type(self) -> int:
        return self.signs.count("+") - self.signs.count("-")

    @property
    def is_directed(self) -> bool:
        return len(set(self.signs)) == 1

    @property
    def is_antidirected(self) -> bool:
        t = len(self)
        return t % 2 == 0 and all(self.signs[i] != self.signs[(i + 1) % t] for i in range(t))

    def rotate(self, r: int) -> "Pattern":
        r %= len(self)
        return Pattern(self.signs[r:] + self.signs[:r])

    def reversed_traversal(self) -> "Pattern":
        """Same cycle read backwards: vertex order v[t-1], ..., v[0]."""
        t = len(self)
        return Pattern("".join(self.signs[(t - 2 - j) % t] for j in range(t)).translate(_FLIP))

    def canonical(self) -> "Pattern":
        return Pattern(canonical_signs(self.signs))

    @property
    def is_canonical(self) -> bool:
        return canonical_signs(self.signs) == self.signs

    # paths inside the cycle

    def path_signs(self, start: int, order: int) -> str:
        """Signs of the edges of the path on ``order`` consecutive positions."""
        t = len(self)
        return "".join(self.signs[(start + j) % t] for j in range(max(order - 1, 0)))

    def path_is_directed(self, start: int, order: int) -> bool:
        return order >= 1 and len(set(self.path_signs(start, order))) <= 1

    def path_is_antidirected(self, start: int, order: int) -> bool:
        s = self.path_signs(start, order)
        return order >= 1 and all(a != b for a, b in zip(s, s[1:]))

    def path_sink_count(self, start: int, order: int) -> int:
        """Vertices of the subpath with no out-edge inside it (endpoints included)."""
        s = self.path_signs(start, order)
        if order == 1:
            return 1
        count = (s[0] == "-") + (s[-1] == "+")
        count += sum(1 for a, b in zip(s, s[1:]) if a == "+" and b == "-")
        return count


def canonical_signs(signs: str) -> str:
    t = len(signs)
    rev = "".join(signs[(t - 2 - j) % t] for j in range(t)).translate(_FLIP)
    return min(min(s[r:] + s[:r] for r in range(t)) for s in (signs, rev))


def canonical_patterns(t: int) -> list[Pattern]:
    """One representative per rotation/reversal class, in lexicographic order."""
    if t < 1:
        raise InputError("pattern length must be positive")
    return [Pattern(s) for s in _canonical_strings(t)]


@functools.lru_cache(maxsize=None)
def _canonical_strings(t: int) -> tuple[str, ...]:
    found = {canonical_signs("".join(combo)) for combo in itertools.product("+-", repeat=t)}
    return tuple(sorted(found))


def distinct_rotations(p: Pattern) -> list[tuple[int, Pattern]]:
    seen = set()
    out = []
    for r in range(len(p)):
        q = p.rotate(r)
        if q.signs not in seen:
            seen.add(q.signs)
            out.append((r, q))
    return out


def random_pattern(t: int, rng: random.Random, style: str = "uniform", sinks: int | None = None) -> Pattern:
    """Random pattern generators used by experiments and tests.

    ``uniform`` draws i.i.d. signs.  ``blocks`` glues antidirected stretches
    to uniform ones.  ``few`` places ``sinks`` sink/source pairs at random
    gaps, so sigma is exactly ``sinks``.
    """
    if style == "uniform":
        return Pattern("".join(rng.choice("+-") for _ in range(t)))
    if style == "blocks":
        chunks: list[str] = []
        size = 0
        while size < t:
            length = rng.randint(10, max(10, t // 4))
            if rng.random() < 0.5:
                chunks.append(("+-" if rng.random() < 0.5 else "-+") * (length // 2))
            else:
                chunks.append("".join(rng.choice("+-") for _ in range(length)))
            size += len(chunks[-1])
        return Pattern("".join(chunks)[:t])
    if style == "few":
        j = rng.randint(0, max(0, t // 20)) if sinks is None else sinks
        if j == 0:
            return Pattern("+" * t)
        cuts = sorted(rng.sample(range(t), 2 * j))
        signs = ["+"] * t
        sign = "+"
        for a, b in zip(cuts, cuts[1:] + [cuts[0] + t]):
            for i in range(a, b):
                signs[i % t] = sign
            sign = "-" if sign == "+" else "+"
        return Pattern("".join(signs))
    raise InputError(f"unknown pattern style {style!r}")


@dataclass(frozen=True)
class Segment:
    """Consecutive cycle positions ``start, ..., start + length - 1`` (mod t)."""

    kind: str
    start: int
    length: int
    type: str | None = None

    def positions(self, t: int) -> list[int]:
        return [(self.start + j) % t for j in range(self.length)]

    def end(self, t: int) -> int:
        """Position right after the segment."""
        return (self.start + self.length) % t

    def to_json(self) -> dict:
        return {"kind": self.kind, "start": self.start, "len": self.length, "type": self.type}


def segments_to_json(segments: Iterable[Segment]) -> list[dict]:
    return [s.to_json() for s in segments]


def tiles_cycle(segments: Sequence[Segment], t: int) -> str | None:
    """Return a description of the first tiling defect, or ``None``."""
    if not segments:
        return "no segments"
    pos = segments[0].start % t
    total = 0
    for seg in segments:
        if seg.start % t != pos:
            return f"segment {seg.kind}@{seg.start} does not start where the previous one ended ({pos})"
        if seg.length < 0:
            return f"segment {seg.kind}@{seg.start} has negative length"
        pos = (pos + seg.length) % t
        total += seg.length
    if total != t:
        return f"segments cover {total} positions instead of {t}"
    return None


def iter_positions(segments: Iterable[Segment], t: int) -> Iterator[int]:
    for seg in segments:
        yield from seg.positions(t)
