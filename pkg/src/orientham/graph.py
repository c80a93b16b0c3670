"""Immutable oriented graphs and the basic generators built on them.

Adjacency is kept as packed bit rows: ``out_masks[v]`` has bit ``w`` set
iff ``v -> w``.  Edge queries are O(1) and neighbourhood intersections are
single integer operations, which the search kernels rely on.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import GenerationError, InputError


def bits(mask: int) -> Iterator[int]:
    """Yield the indices of the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


class OrientedGraph:
    """A loopless digraph with at most one edge between any two vertices."""

    __slots__ = ("_n", "_out", "_in", "_edges")

    def __init__(self, n: int, edges: Iterable[Sequence[int]] = ()):
        if not isinstance(n, (int, np.integer)) or n < 0:
            raise InputError(f"vertex count must be a non-negative integer, got {n!r}")
        n = int(n)
        out = [0] * n
        inn = [0] * n
        for edge in edges:
            if len(edge) != 2:
                raise InputError(f"edge {edge!r} is not a pair")
            u, v = int(edge[0]), int(edge[1])
            if not (0 <= u < n and 0 <= v < n):
                raise InputError(f"edge ({u},{v}) has an endpoint outside 0..{n - 1}")
            if u == v:
                raise InputError(f"loop at vertex {u}")
            if (out[v] >> u) & 1:
                raise InputError(f"2-cycle between {u} and {v}: both ({u},{v}) and ({v},{u}) present")
            out[u] |= 1 << v
            inn[v] |= 1 << u
        self._n = n
        self._out = tuple(out)
        self._in = tuple(inn)
        self._edges: tuple[tuple[int, int], ...] | None = None

    @classmethod
    def from_masks(cls, out_masks: Sequence[int]) -> "OrientedGraph":
        n = len(out_masks)
        return cls(n, ((u, v) for u in range(n) for v in bits(out_masks[u])))

    # basic queries

    @property
    def n(self) -> int:
        return self._n

    def __len__(self) -> int:
        return self._n

    @property
    def out_masks(self) -> tuple[int, ...]:
        return self._out

    @property
    def in_masks(self) -> tuple[int, ...]:
        return self._in

    def has_edge(self, u: int, v: int) -> bool:
        return bool((self._out[u] >> v) & 1)

    def adjacent(self, u: int, v: int) -> bool:
        return bool(((self._out[u] | self._in[u]) >> v) & 1)

    def out_neighbors(self, v: int) -> list[int]:
        return list(bits(self._out[v]))

    def in_neighbors(self, v: int) -> list[int]:
        return list(bits(self._in[v]))

    def out_degree(self, v: int, within: int | None = None) -> int:
        m = self._out[v] if within is None else self._out[v] & within
        return m.bit_count()

    def in_degree(self, v: int, within: int | None = None) -> int:
        m = self._in[v] if within is None else self._in[v] & within
        return m.bit_count()

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        if self._edges is None:
            self._edges = tuple((u, v) for u in range(self._n) for v in bits(self._out[u]))
        return self._edges

    def edge_count(self) -> int:
        return sum(m.bit_count() for m in self._out)

    def direction_matrix(self) -> np.ndarray:
        """Dense matrix with +1 for ``u -> v``, -1 for ``v -> u`` and 0 otherwise."""
        mat = np.zeros((self._n, self._n), dtype=np.int8)
        for u, v in self.edges:
            mat[u, v] = 1
            mat[v, u] = -1
        mat.setflags(write=False)
        return mat

    def with_edges(self, add: Iterable[Sequence[int]] = (), remove: Iterable[Sequence[int]] = ()) -> "OrientedGraph":
        """Return a copy with ``remove`` deleted first and then ``add`` inserted."""
        gone = {(int(u), int(v)) for u, v in remove}
        for e in gone:
            if not self.has_edge(*e):
                raise InputError(f"cannot remove missing edge {e}")
        kept = [e for e in self.edges if e not in gone]
        return OrientedGraph(self._n, kept + [tuple(e) for e in add])

    def __eq__(self, other: object) -> bool:
        return isinstance(other, OrientedGraph) and self._out == other._out

    def __hash__(self) -> int:
        return hash(self._out)

    def __repr__(self) -> str:
        return f"OrientedGraph(n={self._n}, edges={self.edge_count()})"

    # serialization

    def to_json(self) -> dict:
        return {"n": self._n, "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_json(cls, data: dict) -> "OrientedGraph":
        if not isinstance(data, dict) or "n" not in data or "edges" not in data:
            raise InputError('graph JSON must be an object with keys "n" and "edges"')
        return cls(data["n"], data["edges"])

    def to_dot(self, labels: dict[int, str] | None = None) -> str:
        lines = ["digraph G {"]
        for v in range(self._n):
            lab = f' [label="{labels[v]}"]' if labels and v in labels else ""
            lines.append(f"  {v}{lab};")
        lines.extend(f"  {u} -> {v};" for u, v in self.edges)
        lines.append("}")
        return "\n".join(lines) + "\n"


def load_graph(path: str | Path) -> OrientedGraph:
    try:
        data = json.loads(Path(path).read_text())
    except FileNotFoundError as exc:
        raise InputError(f"graph file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"graph file {path} is not valid JSON: {exc}") from exc
    return OrientedGraph.from_json(data)


@dataclass(frozen=True)
class DegreeSummary:
    out_degrees: tuple[int, ...]
    in_degrees: tuple[int, ...]

    @property
    def min_out(self) -> int:
        return min(self.out_degrees, default=0)

    @property
    def min_in(self) -> int:
        return min(self.in_degrees, default=0)

    @property
    def min_semidegree(self) -> int:
        return min(self.min_out, self.min_in)


def semidegree(g: OrientedGraph) -> DegreeSummary:
    return DegreeSummary(
        tuple(m.bit_count() for m in g.out_masks),
        tuple(m.bit_count() for m in g.in_masks),
    )


def induced(g: OrientedGraph, vertices: Iterable[int]) -> tuple[OrientedGraph, list[int]]:
    """Subgraph on ``vertices`` relabelled to 0..k-1.

    Returns the subgraph and ``index_map`` with ``index_map[new] == old``.
    """
    keep = sorted(set(int(v) for v in vertices))
    for v in keep:
        if not 0 <= v < g.n:
            raise InputError(f"vertex {v} is outside 0..{g.n - 1}")
    pos = {v: i for i, v in enumerate(keep)}
    edges = [(pos[u], pos[v]) for u, v in g.edges if u in pos and v in pos]
    return OrientedGraph(len(keep), edges), keep


def relabel(g: OrientedGraph, perm: Sequence[int]) -> OrientedGraph:
    """Graph with vertex ``v`` renamed ``perm[v]``."""
    if sorted(perm) != list(range(g.n)):
        raise InputError("relabelling must be a permutation of the vertices")
    return OrientedGraph(g.n, ((perm[u], perm[v]) for u, v in g.edges))


def reverse(g: OrientedGraph) -> OrientedGraph:
    return OrientedGraph(g.n, ((v, u) for u, v in g.edges))


def min_semidegree_threshold(n: int) -> int:
    """Smallest integer at least (3n - 1) / 8."""
    return -(-(3 * n - 1) // 8)


# generators


def rotational_tournament(n: int) -> OrientedGraph:
    """Regular tournament on odd ``n`` with ``i -> i + j`` for ``1 <= j <= (n-1)/2``."""
    if n < 1 or n % 2 == 0:
        raise InputError(f"rotational tournament needs odd n, got {n}")
    return OrientedGraph(n, ((i, (i + j) % n) for i in range(n) for j in range(1, (n - 1) // 2 + 1)))


def directed_cycle(n: int) -> OrientedGraph:
    if n < 3:
        raise InputError("a directed cycle needs at least 3 vertices")
    return OrientedGraph(n, ((i, (i + 1) % n) for i in range(n)))


def _reverse_random_triangles(out: list[int], inn: list[int], rounds: int, rng: random.Random) -> None:
    # Reversing a directed triangle keeps every in- and out-degree.
    n = len(out)
    for _ in range(rounds):
        a = rng.randrange(n)
        if not out[a]:
            continue
        b = rng.choice(list(bits(out[a])))
        closing = out[b] & inn[a]
        if not closing:
            continue
        c = rng.choice(list(bits(closing)))
        for x, y in ((a, b), (b, c), (c, a)):
            out[x] ^= 1 << y
            inn[y] ^= 1 << x
            out[y] ^= 1 << x
            inn[x] ^= 1 << y


def almost_regular_tournament(n: int, seed: int) -> OrientedGraph:
    """Seeded tournament in which every vertex has ``|d+ - d-| <= 1``."""
    if n < 0:
        raise InputError("vertex count must be non-negative")
    if n <= 1:
        return OrientedGraph(n)
    rng = random.Random(seed)
    odd = n if n % 2 else n - 1
    out = [0] * n
    inn = [0] * n
    for i in range(odd):
        for j in range(1, (odd - 1) // 2 + 1):
            k = (i + j) % odd
            out[i] |= 1 << k
            inn[k] |= 1 << i
    if odd < n:
        # The extra vertex beats half of the others.
        extra = n - 1
        for i in range(odd):
            if i % 2 == 0:
                out[extra] |= 1 << i
                inn[i] |= 1 << extra
            else:
                out[i] |= 1 << extra
                inn[extra] |= 1 << i
    _reverse_random_triangles(out, inn, 3 * n, rng)
    perm = list(range(n))
    rng.shuffle(perm)
    return relabel(OrientedGraph.from_masks(out), perm)


def random_tournament(n: int, seed: int) -> OrientedGraph:
    rng = random.Random(seed)
    return OrientedGraph(n, ((u, v) if rng.random() < 0.5 else (v, u) for u in range(n) for v in range(u + 1, n)))


def random_oriented_graph(
    n: int,
    min_semidegree: int,
    seed: int,
    max_attempts: int = 50,
    keep_fraction: float | None = None,
) -> OrientedGraph:
    """Random oriented graph with minimum semidegree at least ``min_semidegree``.

    Each attempt orients every pair at random, repairs low out-degrees by
    flipping edges, then deletes a random share of edges that are not needed
    for the degree bound.  ``keep_fraction`` fixes that share; by default it
    is drawn uniformly per attempt so densities vary.
    """
    if n < 1:
        raise InputError("vertex count must be positive")
    if min_semidegree < 0 or min_semidegree > (n - 1) // 2:
        raise InputError(
            f"minimum semidegree {min_semidegree} is impossible on {n} vertices "
            f"(at most {(n - 1) // 2})"
        )
    d = min_semidegree
    rng = random.Random(seed)
    for _ in range(max_attempts):
        out = [0] * n
        inn = [0] * n
        for u in range(n):
            for v in range(u + 1, n):
                a, b = (u, v) if rng.random() < 0.5 else (v, u)
                out[a] |= 1 << b
                inn[b] |= 1 << a
        if not _repair_tournament(out, inn, d, rng, 4 * n * n):
            continue
        share = rng.random() if keep_fraction is None else keep_fraction
        pairs = [(u, v) for u in range(n) for v in bits(out[u])]
        rng.shuffle(pairs)
        for u, v in pairs:
            if rng.random() < share:
                continue
            if out[u].bit_count() > d and inn[v].bit_count() > d:
                out[u] ^= 1 << v
                inn[v] ^= 1 << u
        return OrientedGraph.from_masks(out)
    raise GenerationError(
        f"no oriented graph with minimum semidegree {d} on {n} vertices after {max_attempts} attempts"
    )


def _repair_tournament(out: list[int], inn: list[int], d: int, rng: random.Random, steps: int) -> bool:
    # In a tournament d+(v) + d-(v) = n - 1 >= 2d, so at most one side is short.
    n = len(out)
    for _ in range(steps):
        short = [v for v in range(n) if out[v].bit_count() < d or inn[v].bit_count() < d]
        if not short:
            return True
        v = rng.choice(short)
        if out[v].bit_count() < d:
            donors = [u for u in bits(inn[v]) if out[u].bit_count() > d]
            if not donors:
                donors = list(bits(inn[v]))
            u = rng.choice(donors)
            a, b = u, v  # flip u -> v into v -> u
        else:
            donors = [u for u in bits(out[v]) if inn[u].bit_count() > d]
            if not donors:
                donors = list(bits(out[v]))
            u = rng.choice(donors)
            a, b = v, u  # flip v -> u into u -> v
        out[a] ^= 1 << b
        inn[b] ^= 1 << a
        out[b] |= 1 << a
        inn[a] |= 1 << b
    return False


def find_isomorphism(g: OrientedGraph, h: OrientedGraph) -> list[int] | None:
    """Backtracking isomorphism search with degree-signature pruning.

    Returns ``phi`` with ``u -> v`` in ``g`` iff ``phi[u] -> phi[v]`` in ``h``.
    """
    n = g.n
    if h.n != n or g.edge_count() != h.edge_count():
        return None
    sig_g = [(g.out_degree(v), g.in_degree(v)) for v in range(n)]
    sig_h = [(h.out_degree(v), h.in_degree(v)) for v in range(n)]
    if sorted(sig_g) != sorted(sig_h):
        return None
    order = sorted(range(n), key=lambda v: (-(g.out_masks[v] | g.in_masks[v]).bit_count(), v))
    phi = [-1] * n
    taken = 0

    def extend(i: int) -> bool:
        nonlocal taken
        if i == n:
            return True
        u = order[i]
        for w in range(n):
            if (taken >> w) & 1 or sig_h[w] != sig_g[u]:
                continue
            ok = True
            for j in range(i):
                x = order[j]
                if g.has_edge(u, x) != h.has_edge(w, phi[x]) or g.has_edge(x, u) != h.has_edge(phi[x], w):
                    ok = False
                    break
            if ok:
                phi[u] = w
                taken |= 1 << w
                if extend(i + 1):
                    return True
                taken ^= 1 << w
                phi[u] = -1
        return False

    return list(phi) if extend(0) else None
