"""Extremal graphs without antidirected Hamilton cycles, and tools around them.

The vertex set is split into W, X, Y, Z with all edges W->X, X->Y, Y->Z and
Z->W, almost regular tournaments inside W and Y, no edges inside X or Z,
none between W and Y, and a bipartite tournament between X and Z.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import CapacityError, ConstructionError, InputError
from .graph import OrientedGraph, almost_regular_tournament, bits, find_isomorphism, induced, min_semidegree_threshold, semidegree
from .partition import QuadPartition, special_edges

# residue r of n = 8s + r (1..8): (delta0, |W|, |X| = |Z|, |Y|) as offsets (a, b) meaning a*s + b
_TABLE = {
    1: ((3, 0), (2, 0), (2, 1), (2, -1)),
    2: ((3, 0), (2, 0), (2, 1), (2, 0)),
    3: ((3, 0), (2, 0), (2, 1), (2, 1)),
    4: ((3, 1), (2, 1), (2, 1), (2, 1)),
    5: ((3, 1), (2, 1), (2, 2), (2, 0)),
    6: ((3, 2), (2, 1), (2, 2), (2, 1)),
    7: ((3, 2), (2, 1), (2, 2), (2, 2)),
    8: ((3, 2), (2, 2), (2, 2), (2, 2)),
}
EXCEPTIONAL_MAX_VERTICES = 35


@dataclass(frozen=True)
class TableRow:
    n: int
    s: int
    residue: int
    min_semidegree: int
    W: int
    X: int
    Y: int

    @property
    def Z(self) -> int:
        return self.X

    def to_tsv(self) -> str:
        return f"{self.n}\t{self.min_semidegree}\t{self.W}\t{self.X}\t{self.Y}"


TSV_HEADER = "n\tdelta0\t|W|\t|X|=|Z|\t|Y|"


def table_row(n: int) -> TableRow:
    if n < 3:
        raise InputError(f"extremal graphs are defined for n >= 3, got {n}")
    s, r = (n - 1) // 8, (n - 1) % 8 + 1
    d, w, x, y = (a * s + b for a, b in _TABLE[r])
    return TableRow(n, s, r, d, w, x, y)


@dataclass(frozen=True)
class ExtremalInstance:
    graph: OrientedGraph
    partition: QuadPartition
    row: TableRow
    X1: frozenset[int]
    X2: frozenset[int]
    Z1: frozenset[int]
    Z2: frozenset[int]
    seed: int

    def to_json(self) -> dict:
        return {
            "graph": self.graph.to_json(),
            "partition": self.partition.to_json(),
            "table_row": {"n": self.row.n, "delta0": self.row.min_semidegree, "W": self.row.W, "X": self.row.X, "Z": self.row.Z, "Y": self.row.Y},
            "seed": self.seed,
        }


def _bipartite_xz(row: TableRow, X: list[int], Z: list[int]) -> tuple[list[tuple[int, int]], list[int], list[int], list[int], list[int]]:
    edges = []
    if row.residue == 1:
        size = len(X)
        for i, x in enumerate(X):
            ahead = {(i + j) % size for j in range(row.s + 1)}
            for j, z in enumerate(Z):
                edges.append((x, z) if j in ahead else (z, x))
        return edges, X, [], Z, []
    cut = row.s + 1
    X1, X2, Z1, Z2 = X[:cut], X[cut:], Z[:cut], Z[cut:]
    for a, b in ((X1, Z1), (Z1, X2), (X2, Z2), (Z2, X1)):
        edges.extend((u, v) for u in a for v in b)
    return edges, X1, X2, Z1, Z2


def _embed_tournament(vertices: Sequence[int], seed: int) -> list[tuple[int, int]]:
    t = almost_regular_tournament(len(vertices), seed)
    return [(vertices[u], vertices[v]) for u, v in t.edges]


def build_extremal(n: int, seed: int = 0) -> ExtremalInstance:
    """Extremal graph of order ``n`` with the part sizes of its residue class.

    Vertices are numbered W, X, Y, Z consecutively.  ``seed`` only affects the
    tournaments inside W and Y.
    """
    row = table_row(n)
    sizes = [row.W, row.X, row.Y, row.Z]
    blocks = []
    start = 0
    for size in sizes:
        blocks.append(list(range(start, start + size)))
        start += size
    W, X, Y, Z = blocks
    edges = [(u, v) for a, b in ((W, X), (X, Y), (Y, Z), (Z, W)) for u in a for v in b]
    rng = random.Random(seed)
    edges += _embed_tournament(W, rng.randrange(2**32))
    edges += _embed_tournament(Y, rng.randrange(2**32))
    xz, X1, X2, Z1, Z2 = _bipartite_xz(row, X, Z)
    edges += xz
    g = OrientedGraph(n, edges)
    part = QuadPartition.of(W, X, Y, Z, n=n)
    return ExtremalInstance(g, part, row, frozenset(X1), frozenset(X2), frozenset(Z1), frozenset(Z2), seed)


# confinement


@dataclass(frozen=True)
class ConfinementVerdict:
    classes: frozenset[str]
    parity_holds: bool

    @property
    def confined(self) -> bool:
        return bool(self.classes)


def _check_antidirected_path(g: OrientedGraph, path: Sequence[int]) -> list[bool]:
    """Return per-edge forward flags; raise if ``path`` is not an antidirected path of ``g``."""
    if len(set(path)) != len(path):
        raise InputError("path repeats a vertex")
    forward = []
    for u, v in zip(path, path[1:]):
        if g.has_edge(u, v):
            forward.append(True)
        elif g.has_edge(v, u):
            forward.append(False)
        else:
            raise InputError(f"vertices {u} and {v} are not adjacent")
    if any(a == b for a, b in zip(forward, forward[1:])):
        raise InputError("path is not antidirected")
    return forward


def confinement_check(inst: ExtremalInstance, path: Sequence[int]) -> ConfinementVerdict:
    """Which of ``W u X u Z`` and ``Y u X u Z`` contain the antidirected ``path``.

    Parity: in an antidirected path every vertex is a tail (both path edges
    leave it) or a head.  In the extremal graph tails lie in ``W u Z`` and
    heads in ``W u X``, or tails lie in ``X u Y`` and heads in ``Y u Z``.
    """
    g, part = inst.graph, inst.partition
    forward = _check_antidirected_path(g, path)
    vs = set(path)
    classes = set()
    if vs <= part.W | part.X | part.Z:
        classes.add("WXZ")
    if vs <= part.Y | part.X | part.Z:
        classes.add("YXZ")
    first_is_tail = forward[0] if forward else True
    tails = {v for i, v in enumerate(path) if (i % 2 == 0) == first_is_tail}
    heads = vs - tails
    parity = (tails <= part.W | part.Z and heads <= part.W | part.X) or (
        tails <= part.X | part.Y and heads <= part.Y | part.Z
    )
    return ConfinementVerdict(frozenset(classes), parity)


def antidirected_paths(g: OrientedGraph, max_order: int) -> Iterator[tuple[int, ...]]:
    """Every antidirected path with at most ``max_order`` vertices, in both directions."""
    out_m, in_m = g.out_masks, g.in_masks

    def grow(path: list[int], used: int, next_forward: bool):
        yield tuple(path)
        if len(path) == max_order:
            return
        last = path[-1]
        cand = (out_m[last] if next_forward else in_m[last]) & ~used
        for v in bits(cand):
            path.append(v)
            yield from grow(path, used | (1 << v), not next_forward)
            path.pop()

    for v in range(g.n):
        yield (v,)
        if max_order < 2:
            continue
        for first_forward in (True, False):
            cand = (out_m[v] if first_forward else in_m[v])
            for w in bits(cand):
                yield from grow([v, w], (1 << v) | (1 << w), not first_forward)


# special edges


@dataclass(frozen=True)
class SpecialMatching:
    count: int
    edges: tuple[tuple[int, int], ...]


def find_special_edges(g: OrientedGraph, part: QuadPartition) -> list[tuple[int, int]]:
    part.validate(g.n)
    return sorted(special_edges(g, part))


def disjoint_special_edges(g: OrientedGraph, part: QuadPartition) -> SpecialMatching:
    """Largest set of vertex-disjoint special edges, capped at two."""
    edges = find_special_edges(g, part)
    if not edges:
        return SpecialMatching(0, ())
    for i, (a, b) in enumerate(edges):
        for c, d in edges[i + 1:]:
            if len({a, b, c, d}) == 4:
                return SpecialMatching(2, ((a, b), (c, d)))
    return SpecialMatching(1, (edges[0],))


# exceptional graphs


def _complement_components(g: OrientedGraph) -> list[int]:
    full = (1 << g.n) - 1
    non_adj = [full & ~(g.out_masks[v] | g.in_masks[v] | (1 << v)) for v in range(g.n)]
    left = full
    comps = []
    while left:
        seed = left & -left
        comp = seed
        frontier = seed
        while frontier:
            nxt = 0
            for v in bits(frontier):
                nxt |= non_adj[v]
            frontier = nxt & ~comp
            comp |= frontier
        comps.append(comp)
        left &= ~comp
    return comps


def _is_almost_regular_tournament(g: OrientedGraph, vs: int) -> bool:
    k = vs.bit_count()
    for v in bits(vs):
        d_out = (g.out_masks[v] & vs).bit_count()
        d_in = (g.in_masks[v] & vs).bit_count()
        if d_out + d_in != k - 1 or abs(d_out - d_in) > 1:
            return False
    return True


def _all_edges(g: OrientedGraph, a: int, b: int) -> bool:
    return all((g.out_masks[u] & b) == b for u in bits(a))


def recover_even_class_partition(g: OrientedGraph) -> QuadPartition | None:
    """Partition witnessing that ``g`` belongs to the extremal class of order 8s+2."""
    n = g.n
    row = table_row(n) if n >= 3 else None
    if n == 2:
        return QuadPartition.of([], [0], [], [1], n=2) if g.has_edge(0, 1) else (
            QuadPartition.of([], [1], [], [0], n=2) if g.has_edge(1, 0) else None
        )
    if row is None or row.residue != 2:
        return None
    s = row.s
    # In the underlying graph the non-edges are exactly: inside X, inside Z, and W x Y.
    comps = _complement_components(g)
    cliques = [c for c in comps if c.bit_count() == 2 * s + 1]
    rest = [c for c in comps if c.bit_count() != 2 * s + 1]
    if len(comps) != 3 or len(cliques) != 2 or len(rest) != 1:
        return None
    wy = rest[0]
    for X, Z in ((cliques[0], cliques[1]), (cliques[1], cliques[0])):
        W = 0
        for v in bits(wy):
            if (g.out_masks[v] & X) == X:
                W |= 1 << v
        Y = wy & ~W
        if W.bit_count() != 2 * s or Y.bit_count() != 2 * s:
            continue
        if not (_all_edges(g, W, X) and _all_edges(g, X, Y) and _all_edges(g, Y, Z) and _all_edges(g, Z, W)):
            continue
        if any(g.adjacent(u, v) for u in bits(W) for v in bits(Y)):
            continue
        if not (_is_almost_regular_tournament(g, W) and _is_almost_regular_tournament(g, Y)):
            continue
        if not _xz_is_blown_up_cycle(g, X, Z, s):
            continue
        return QuadPartition.of(bits(W), bits(X), bits(Y), bits(Z), n=n)
    return None


def _xz_is_blown_up_cycle(g: OrientedGraph, X: int, Z: int, s: int) -> bool:
    vs = sorted(list(bits(X)) + list(bits(Z)))
    sub, index = induced(g, vs)
    pos = {v: i for i, v in enumerate(index)}
    xs = [pos[v] for v in bits(X)]
    zs = [pos[v] for v in bits(Z)]
    m = len(vs)
    # reference: blow-up of the directed 4-cycle X1 -> Z1 -> X2 -> Z2 -> X1
    X1, X2 = list(range(s + 1)), list(range(s + 1, 2 * s + 1))
    Z1, Z2 = [2 * s + 1 + i for i in range(s + 1)], [3 * s + 2 + i for i in range(s)]
    ref_edges = [(u, v) for a, b in ((X1, Z1), (Z1, X2), (X2, Z2), (Z2, X1)) for u in a for v in b]
    ref = OrientedGraph(m, ref_edges)
    phi = find_isomorphism(sub, ref)
    if phi is None:
        return False
    # the isomorphism must send X onto the X side
    return {phi[x] for x in xs} == set(X1 + X2) and {phi[z] for z in zs} == set(Z1 + Z2)


def is_exceptional(g: OrientedGraph, require_degree_condition: bool = True) -> int | None:
    """Vertex ``v`` with ``g - v`` in the extremal class of order 8s+2, else ``None``.

    Only graphs of order 8s+3 qualify.  By default ``g`` must also meet the
    semidegree threshold ``(3n - 1) / 8``.
    """
    n = g.n
    if n > EXCEPTIONAL_MAX_VERTICES:
        raise CapacityError(f"exceptional-graph test is capped at {EXCEPTIONAL_MAX_VERTICES} vertices")
    if n < 3 or n % 8 != 3:
        return None
    if require_degree_condition and semidegree(g).min_semidegree < min_semidegree_threshold(n):
        return None
    for v in range(n):
        h, _ = induced(g, [u for u in range(n) if u != v])
        if recover_even_class_partition(h) is not None:
            return v
    return None


def build_exceptional(s: int, seed: int = 0) -> tuple[OrientedGraph, int]:
    """Graph of order 8s+3 meeting the threshold whose removal of the last vertex is extremal.

    The extra vertex must be adjacent to every other vertex: each vertex of
    the order 8s+2 graph has exactly one semidegree equal to 3s and needs an
    edge to or from the new vertex on that side.  So the wiring is forced.
    """
    if s < 1:
        raise InputError("need s >= 1")
    inst = build_extremal(8 * s + 2, seed)
    h = inst.graph
    v = h.n
    edges = list(h.edges)
    for u in range(h.n):
        if h.out_degree(u) == 3 * s:
            edges.append((u, v))
        else:
            edges.append((v, u))
    return OrientedGraph(v + 1, edges), v


# proper paths


@dataclass(frozen=True)
class ProperPath:
    vertices: tuple[int, ...]
    form: str

    def to_json(self) -> dict:
        return {"vertices": list(self.vertices), "form": self.form}


def _greedy_fill(g: OrientedGraph, path: list[int | None], steps: list[tuple[int, int, str, int]], blocked: int, labels: list[str]) -> None:
    for pos, anchor, direction, allowed in steps:
        a = path[anchor]
        nbrs = g.out_masks[a] if direction == "out" else g.in_masks[a]
        cand = nbrs & allowed & ~blocked
        if not cand:
            raise ConstructionError(
                f"no admissible vertex for position {pos + 1} ({labels[pos]}, {direction}-neighbour of {a})",
                f"position {pos + 1} ({labels[pos]})",
            )
        v = (cand & -cand).bit_length() - 1
        path[pos] = v
        blocked |= 1 << v


def extend_to_proper_path(
    g: OrientedGraph,
    part: QuadPartition,
    edge: tuple[int, int],
    forbidden: Iterable[int] = (),
    bad: Iterable[int] = (),
) -> ProperPath:
    """Antidirected 13-vertex path from a W vertex to a Y vertex through ``edge``.

    For ``u -> v`` in ``E(X u Y, W u X)`` the form is ``W^3 v2 v1 v u u1 u2 Y^4``;
    for ``u -> v`` in ``E(W u Z, Y u Z)`` it is ``W^4 u2 u1 u v v1 v2 Y^3``.
    Vertices are picked greedily (smallest index first) avoiding ``forbidden``
    and ``bad``.
    """
    u, v = edge
    if not g.has_edge(u, v):
        raise InputError(f"{u}->{v} is not an edge")
    W, X, Y, Z = (part.mask(name) for name in "WXYZ")
    blocked = 0
    for x in list(forbidden) + list(bad):
        blocked |= 1 << x
    if (blocked >> u) & 1 or (blocked >> v) & 1:
        raise InputError("the special edge touches a forbidden vertex")
    blocked |= (1 << u) | (1 << v)
    path: list[int | None] = [None] * 13
    in_set = lambda x, m: (m >> x) & 1
    if in_set(u, X | Y) and in_set(v, W | X):
        path[5], path[6] = v, u
        labels = ["W", "W", "W", "W", "W|Z", "v", "u", "Y|Z", "Y", "Y", "Y", "Y", "Y"]
        steps = [
            (7, 6, "out", Y | Z),  # u1
            (4, 5, "in", W | Z),   # v1
            (8, 7, "in", Y),       # u2
            (3, 4, "out", W),      # v2
            (2, 3, "in", W),
            (1, 2, "out", W),
            (0, 1, "in", W),
            (9, 8, "out", Y),
            (10, 9, "in", Y),
            (11, 10, "out", Y),
            (12, 11, "in", Y),
        ]
        form = "W^3 v2 v1 v u u1 u2 Y^4"
    elif in_set(u, W | Z) and in_set(v, Y | Z):
        path[6], path[7] = u, v
        labels = ["W", "W", "W", "W", "W", "W|X", "u", "v", "X|Y", "Y", "Y", "Y", "Y"]
        steps = [
            (5, 6, "out", W | X),  # u1
            (8, 7, "in", X | Y),   # v1
            (4, 5, "in", W),       # u2
            (9, 8, "out", Y),      # v2
            (3, 4, "out", W),
            (2, 3, "in", W),
            (1, 2, "out", W),
            (0, 1, "in", W),
            (10, 9, "in", Y),
            (11, 10, "out", Y),
            (12, 11, "in", Y),
        ]
        form = "W^4 u2 u1 u v v1 v2 Y^3"
    else:
        raise InputError(f"{u}->{v} is not a special edge for this partition")
    _greedy_fill(g, path, steps, blocked, labels)
    return ProperPath(tuple(path), form)  # type: ignore[arg-type]


def is_proper_path(g: OrientedGraph, part: QuadPartition, path: Sequence[int]) -> bool:
    """Antidirected out-path on 13 vertices from W to Y."""
    if len(path) != 13 or path[0] not in part.W or path[-1] not in part.Y:
        return False
    try:
        forward = _check_antidirected_path(g, path)
    except InputError:
        return False
    return forward[0]
