"""Search for cycles with a prescribed orientation pattern.

``find_oriented_cycle`` runs a budgeted backtracking search through the
selected kernel.  ``oracle_enumerate`` is a separate brute force over vertex
orderings that shares no code with the search and serves as its check.
"""
from __future__ import annotations

import itertools
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

from . import kernels
from .errors import CapacityError, InputError
from .graph import OrientedGraph, min_semidegree_threshold, random_oriented_graph, semidegree
from .pattern import Pattern, canonical_patterns, canonical_signs, distinct_rotations

DEFAULT_BUDGET = 5_000_000
ORACLE_MAX_VERTICES = 11


class Verdict(str, Enum):
    FOUND = "found"
    NONE = "none"
    INDETERMINATE = "indeterminate"


@dataclass(frozen=True)
class SearchResult:
    verdict: Verdict
    pattern: Pattern
    embedding: tuple[int, ...] | None
    nodes: int
    budget: int

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "pattern": self.pattern.signs,
            "embedding": list(self.embedding) if self.embedding else None,
            "nodes": self.nodes,
            "budget": self.budget,
        }


def _signs(p: Pattern) -> list[int]:
    return [1 if c == "+" else -1 for c in p.signs]


def realized_signs(g: OrientedGraph, order: Sequence[int]) -> str | None:
    """Signs traced by the cyclic vertex order, or ``None`` if a pair is not adjacent."""
    t = len(order)
    out = []
    for i in range(t):
        u, v = order[i], order[(i + 1) % t]
        if g.has_edge(u, v):
            out.append("+")
        elif g.has_edge(v, u):
            out.append("-")
        else:
            return None
    return "".join(out)


def align_embedding(target: Pattern, order: Sequence[int], realized: str) -> tuple[int, ...]:
    """Re-index ``order`` (which traces ``realized``) so it traces ``target``."""
    t = len(order)
    for seq, s in ((list(order), realized), (list(reversed(order)), Pattern(realized).reversed_traversal().signs)):
        for r in range(t):
            if all(target.signs[i] == s[(i + r) % t] for i in range(t)):
                return tuple(seq[(i + r) % t] for i in range(t))
    raise InputError("realized signs are not a rotation or reversal of the target pattern")


def validate_embedding(g: OrientedGraph, p: Pattern | str, order: Sequence[int]) -> list[str]:
    """Problems with ``order`` as a cycle realizing ``p``; empty when valid."""
    p = Pattern.parse(p)
    t = len(p)
    problems = []
    if len(order) != t:
        problems.append(f"embedding has {len(order)} vertices, pattern has {t}")
        return problems
    if len(set(order)) != t:
        problems.append("embedding repeats a vertex")
    if any(not 0 <= v < g.n for v in order):
        problems.append("embedding uses a vertex outside the graph")
        return problems
    for i in range(t):
        u, v = order[i], order[(i + 1) % t]
        want = (u, v) if p.signs[i] == "+" else (v, u)
        if not g.has_edge(*want):
            problems.append(f"edge {want[0]}->{want[1]} required by sign {i} is missing")
    return problems


def find_oriented_cycle(
    g: OrientedGraph,
    pattern: Pattern | str,
    budget: int = DEFAULT_BUDGET,
    kernel: str | None = None,
) -> SearchResult:
    """Look for a cycle in ``g`` realizing ``pattern``.

    The cycle's smallest vertex is anchored at position 0 and every distinct
    rotation of the pattern is tried there, which covers each embedding
    exactly once per rotation class.  ``budget`` caps expanded search nodes.
    """
    p = Pattern.parse(pattern)
    t, n = len(p), g.n
    if not 3 <= t <= n:
        raise InputError(f"pattern length {t} must lie in 3..{n}")
    impl = kernels.get_kernel(kernel, n)
    hamilton = t == n
    anchors = [0] if hamilton else range(n - t + 1)
    remaining = budget
    out_m, in_m = list(g.out_masks), list(g.in_masks)
    rotations = [(rot, _signs(rot)) for _, rot in distinct_rotations(p)]
    for a in anchors:
        allowed = ((1 << n) - 1) & ~((1 << a) - 1)
        for rot, signs in rotations:
            status, nodes, seq = impl.cycle_search(out_m, in_m, signs, a, allowed, hamilton, remaining)
            remaining -= nodes
            if status == 0:
                emb = align_embedding(p, seq, rot.signs)
                return SearchResult(Verdict.FOUND, p, emb, budget - remaining, budget)
            if status == 2:
                return SearchResult(Verdict.INDETERMINATE, p, None, budget - remaining, budget)
    return SearchResult(Verdict.NONE, p, None, budget - remaining, budget)


def find_oriented_hamilton(g: OrientedGraph, pattern: Pattern | str, budget: int = DEFAULT_BUDGET, kernel: str | None = None) -> SearchResult:
    p = Pattern.parse(pattern)
    if len(p) != g.n:
        raise InputError(f"Hamilton pattern must have length {g.n}, got {len(p)}")
    return find_oriented_cycle(g, p, budget, kernel)


# brute force


def _check_oracle_size(g: OrientedGraph, max_n: int) -> None:
    if g.n > max_n:
        raise CapacityError(f"oracle enumeration is capped at {max_n} vertices, graph has {g.n}")


def _cyclic_orders(n: int, t: int):
    # Each cyclic arrangement is listed once per direction: smallest vertex first.
    for subset in itertools.combinations(range(n), t):
        head, rest = subset[0], subset[1:]
        for perm in itertools.permutations(rest):
            yield (head,) + perm


def _sign_table(g: OrientedGraph) -> list[list[str | None]]:
    table: list[list[str | None]] = [[None] * g.n for _ in range(g.n)]
    for u, v in g.edges:
        table[u][v] = "+"
        table[v][u] = "-"
    return table


def _trace(table, order) -> str | None:
    t = len(order)
    out = []
    for i in range(t):
        s = table[order[i]][order[(i + 1) % t]]
        if s is None:
            return None
        out.append(s)
    return "".join(out)


def oracle_enumerate(g: OrientedGraph, pattern: Pattern | str, max_n: int = ORACLE_MAX_VERTICES) -> tuple[int, ...] | None:
    """Embedding of ``pattern`` found by trying every cyclic vertex ordering."""
    p = Pattern.parse(pattern)
    _check_oracle_size(g, max_n)
    t = len(p)
    if not 3 <= t <= g.n:
        raise InputError(f"pattern length {t} must lie in 3..{g.n}")
    targets = {p.rotate(r).signs for r in range(t)} | {p.reversed_traversal().rotate(r).signs for r in range(t)}
    table = _sign_table(g)
    for order in _cyclic_orders(g.n, t):
        s = _trace(table, order)
        if s is not None and s in targets:
            return align_embedding(p, order, s)
    return None


def oracle_realized_patterns(g: OrientedGraph, t: int, max_n: int = ORACLE_MAX_VERTICES) -> dict[str, tuple[int, ...]]:
    """Every canonical pattern of length ``t`` realized in ``g``, with a witness."""
    _check_oracle_size(g, max_n)
    table = _sign_table(g)
    found: dict[str, tuple[int, ...]] = {}
    raw_seen: set[str] = set()
    for order in _cyclic_orders(g.n, t):
        s = _trace(table, order)
        if s is None or s in raw_seen:
            continue
        raw_seen.add(s)
        c = canonical_signs(s)
        if c not in found:
            found[c] = align_embedding(Pattern(c), order, s)
    return found


# sweeps


@dataclass(frozen=True)
class SweepCell:
    t: int
    pattern: str
    verdict: Verdict
    embedding: tuple[int, ...] | None
    nodes: int

    def to_json(self) -> dict:
        return {
            "t": self.t,
            "pattern": self.pattern,
            "verdict": self.verdict.value,
            "embedding": list(self.embedding) if self.embedding else None,
            "nodes": self.nodes,
        }


@dataclass(frozen=True)
class SweepReport:
    cells: tuple[SweepCell, ...]
    infeasible: tuple[dict, ...] = field(default=())

    def verdicts(self, t: int | None = None) -> dict[str, Verdict]:
        return {c.pattern: c.verdict for c in self.cells if t is None or c.t == t}

    def to_json(self) -> dict:
        return {"cells": [c.to_json() for c in self.cells], "infeasible": list(self.infeasible)}


def patterns_of_kind(t: int, kind: str) -> list[Pattern]:
    if kind == "all":
        return canonical_patterns(t)
    if kind == "directed":
        return [Pattern.directed(t)]
    if kind == "antidirected":
        return [Pattern.antidirected(t).canonical()] if t % 2 == 0 else []
    raise InputError(f"unknown pattern family {kind!r}")


def _sweep_task(args):
    g_json, signs, budget, kernel = args
    g = OrientedGraph.from_json(g_json)
    res = find_oriented_cycle(g, signs, budget, kernel)
    return SweepCell(len(signs), signs, res.verdict, res.embedding, res.nodes)


def pancyclicity_sweep(
    g: OrientedGraph,
    t_min: int = 3,
    t_max: int | None = None,
    budget: int = DEFAULT_BUDGET,
    kind: str = "all",
    workers: int = 1,
    kernel: str | None = None,
) -> SweepReport:
    """Search every canonical pattern of each length in ``t_min..t_max``.

    Odd lengths have no antidirected cycle; they are recorded as infeasible
    and never searched.
    """
    t_max = g.n if t_max is None else t_max
    if not 3 <= t_min <= t_max <= g.n:
        raise InputError(f"length range {t_min}..{t_max} must lie within 3..{g.n}")
    jobs = []
    infeasible = []
    for t in range(t_min, t_max + 1):
        if t % 2 and kind in ("all", "antidirected"):
            infeasible.append({"t": t, "kind": "antidirected", "status": "infeasible"})
        jobs.extend((g.to_json(), p.signs, budget, kernel) for p in patterns_of_kind(t, kind))
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            cells = list(pool.map(_sweep_task, jobs))
    else:
        cells = [_sweep_task(job) for job in jobs]
    return SweepReport(tuple(cells), tuple(infeasible))


@dataclass(frozen=True)
class ThresholdReport:
    n: int
    min_semidegree: int
    oracle_checked: bool
    rows: tuple[dict, ...]

    @property
    def label(self) -> str:
        return "verified by oracle" if self.oracle_checked else "unverified by oracle"

    def summary(self) -> dict:
        return {
            "n": self.n,
            "min_semidegree": self.min_semidegree,
            "trials": len(self.rows),
            "graphs_missing_a_pattern": sum(1 for r in self.rows if r["missing"]),
            "indeterminate_cells": sum(r["indeterminate"] for r in self.rows),
            "oracle_disagreements": sum(1 for r in self.rows if r["oracle_agrees"] is False),
            "label": self.label,
        }

    def to_json(self) -> dict:
        return {"summary": self.summary(), "rows": list(self.rows)}


def threshold_experiment(
    n: int,
    trials: int,
    seed: int,
    budget: int = DEFAULT_BUDGET,
    use_oracle: bool | None = None,
    kernel: str | None = None,
) -> ThresholdReport:
    """Sample graphs at the semidegree threshold and test every Hamilton pattern."""
    d = min_semidegree_threshold(n)
    if use_oracle is None:
        use_oracle = n <= ORACLE_MAX_VERTICES
    if use_oracle:
        _check_oracle_size(OrientedGraph(n), ORACLE_MAX_VERTICES)
    rng = random.Random(seed)
    patterns = canonical_patterns(n)
    rows = []
    for trial in range(trials):
        sub_seed = rng.randrange(2**32)
        g = random_oriented_graph(n, d, sub_seed)
        verdicts = {p.signs: find_oriented_hamilton(g, p, budget, kernel).verdict for p in patterns}
        missing = sorted(s for s, v in verdicts.items() if v is Verdict.NONE)
        agrees = None
        if use_oracle:
            realized = oracle_realized_patterns(g, n)
            agrees = all(
                (v is Verdict.FOUND) == (s in realized) for s, v in verdicts.items() if v is not Verdict.INDETERMINATE
            )
        rows.append({
            "trial": trial,
            "seed": sub_seed,
            "min_semidegree": semidegree(g).min_semidegree,
            "patterns": len(patterns),
            "found": sum(v is Verdict.FOUND for v in verdicts.values()),
            "none": sum(v is Verdict.NONE for v in verdicts.values()),
            "indeterminate": sum(v is Verdict.INDETERMINATE for v in verdicts.values()),
            "missing": missing,
            "oracle_agrees": agrees,
        })
    return ThresholdReport(n, d, use_oracle, tuple(rows))
