"""Robust out-expansion and the near-extremal partition checks."""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

import networkx as nx

from . import kernels
from .errors import CapacityError, ConstructionError, InputError
from .graph import OrientedGraph, bits, mask_of
from .partition import PARTS, PREDECESSOR, SUCCESSOR, QuadPartition, count_edges_between

EXHAUSTIVE_MAX_VERTICES = 22


def robust_threshold(nu: float, n: int) -> int:
    """In-degree needed to count as a robust out-neighbour: ``ceil(nu * n)``."""
    return max(0, math.ceil(nu * n - 1e-9))


def robust_outneighborhood(g: OrientedGraph, S: Iterable[int], nu: float) -> frozenset[int]:
    s_mask = mask_of(S)
    thr = robust_threshold(nu, g.n)
    return frozenset(v for v in range(g.n) if (g.in_masks[v] & s_mask).bit_count() >= thr)


def _size_range(n: int, tau: float) -> tuple[int, int]:
    # strict bounds tau n < |S| < (1 - tau) n
    lo = math.floor(tau * n + 1e-9) + 1
    hi = math.ceil((1 - tau) * n - 1e-9) - 1
    return lo, hi


@dataclass(frozen=True)
class ExpanderVerdict:
    is_expander: bool
    witness: frozenset[int] | None
    nu: float
    tau: float
    mode: str
    tested: int
    vacuous: bool = False

    @property
    def certified(self) -> bool:
        """Only exhaustive verdicts certify expansion; a sampled negative is still a proof."""
        return self.mode == "exhaustive" or not self.is_expander

    def to_json(self) -> dict:
        return {
            "is_expander": self.is_expander,
            "witness": sorted(self.witness) if self.witness is not None else None,
            "nu": self.nu,
            "tau": self.tau,
            "mode": self.mode,
            "tested": self.tested,
            "vacuous": self.vacuous,
            "certified": self.certified,
        }


def fails_expansion(g: OrientedGraph, S: Iterable[int], nu: float) -> bool:
    S = set(S)
    return len(robust_outneighborhood(g, S, nu)) < len(S) + nu * g.n - 1e-9


def is_robust_outexpander(
    g: OrientedGraph,
    nu: float,
    tau: float,
    mode: str = "exhaustive",
    samples: int = 1000,
    seed: int | None = None,
    partition: QuadPartition | None = None,
    kernel: str | None = None,
) -> ExpanderVerdict:
    """Check ``|RN_nu(S)| >= |S| + nu n`` for all ``S`` with ``tau n < |S| < (1 - tau) n``.

    ``exhaustive`` scans every such set (at most 22 vertices) and returns the
    first failure by size, then by Gosper order.  ``sampled`` tests random sets
    plus unions of partition parts when a partition is given.
    """
    n = g.n
    lo, hi = _size_range(n, tau)
    if mode == "exhaustive":
        if n > EXHAUSTIVE_MAX_VERTICES:
            raise CapacityError(f"exhaustive expansion check is capped at {EXHAUSTIVE_MAX_VERTICES} vertices")
        if lo > hi:
            return ExpanderVerdict(True, None, nu, tau, mode, 0, vacuous=True)
        impl = kernels.get_kernel(kernel, n)
        mask, tested = impl.expander_scan(list(g.in_masks), n, lo, hi, robust_threshold(nu, n), nu * n - 1e-9)
        if mask >= 0:
            return ExpanderVerdict(False, frozenset(bits(mask)), nu, tau, mode, tested)
        return ExpanderVerdict(True, None, nu, tau, mode, tested)
    if mode != "sampled":
        raise InputError(f"unknown mode {mode!r}")
    if seed is None:
        raise InputError("sampled mode needs an explicit seed")
    rng = random.Random(seed)
    candidates: list[frozenset[int]] = []
    if partition is not None:
        for r in (1, 2, 3):
            for names in combinations(PARTS, r):
                candidates.append(frozenset().union(*(partition[x] for x in names)))
    if lo <= hi:
        for _ in range(samples):
            k = rng.randint(lo, hi)
            candidates.append(frozenset(rng.sample(range(n), k)))
    tested = 0
    for S in candidates:
        if not lo <= len(S) <= hi:
            continue
        tested += 1
        if fails_expansion(g, S, nu):
            return ExpanderVerdict(False, S, nu, tau, mode, tested)
    return ExpanderVerdict(True, None, nu, tau, mode, tested, vacuous=tested == 0)


def max_expansion_nu(g: OrientedGraph, tau: float, kernel: str | None = None) -> float:
    """Largest ``nu`` on the grid ``j / n`` for which ``g`` is a robust outexpander."""
    best = 0.0
    for j in range(1, g.n + 1):
        if is_robust_outexpander(g, j / g.n, tau, kernel=kernel).is_expander:
            best = j / g.n
        else:
            break
    return best


def partition_from_witness(g: OrientedGraph, S: Iterable[int], nu: float) -> QuadPartition:
    S = frozenset(S)
    rn = robust_outneighborhood(g, S, nu)
    everything = frozenset(range(g.n))
    return QuadPartition.of(rn & S, rn - S, everything - (rn | S), S - rn, n=g.n)


# partition properties


@dataclass(frozen=True)
class PropertyResult:
    name: str
    passed: bool
    value: float
    bound: float
    required_C: float
    slack: float

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "value": self.value,
            "bound": self.bound,
            "required_C": self.required_C,
            "slack": self.slack,
        }


@dataclass(frozen=True)
class PartitionReport:
    delta: float
    C: float
    results: tuple[PropertyResult, ...]
    bad_vertices: frozenset[int] = field(default=frozenset())

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def __getitem__(self, name: str) -> PropertyResult:
        for r in self.results:
            if r.name == name:
                return r
        raise KeyError(name)

    def to_json(self) -> dict:
        return {
            "delta": self.delta,
            "C": self.C,
            "passed": self.passed,
            "properties": [r.to_json() for r in self.results],
            "bad_vertices": sorted(self.bad_vertices),
        }


def _degree_into(g: OrientedGraph, v: int, sign: str, target: int) -> int:
    m = g.out_masks[v] if sign == "+" else g.in_masks[v]
    return (m & target).bit_count()


def _min_allowance(deficits: Sequence[float]) -> float:
    """Smallest ``c`` with ``#{d > c} <= c``."""
    ds = sorted(deficits, reverse=True) + [0.0]
    return max(0.0, min(max(ds[k], k) for k in range(len(ds))))


def _vertex_deficits(g: OrientedGraph, part: QuadPartition) -> dict[str, list[tuple[int, float]]]:
    """Per condition group of EP3-EP5, the deficit of each vertex in its part."""
    n = g.n
    groups: dict[str, list[tuple[int, float]]] = {}
    for J in PARTS:
        for sign, nxt in (("+", SUCCESSOR[J]), ("-", PREDECESSOR[J])):
            tgt = part.mask(nxt)
            size = len(part[nxt])
            groups[f"EP3:{J}{sign}"] = [(v, size - _degree_into(g, v, sign, tgt)) for v in sorted(part[J])]
    for J in ("W", "Y"):
        tgt = part.mask(J)
        half = len(part[J]) / 2
        groups[f"EP4:{J}"] = [
            (v, max(half - _degree_into(g, v, "+", tgt), half - _degree_into(g, v, "-", tgt))) for v in sorted(part[J])
        ]
    tgt = part.mask("X")
    half = len(part.X) / 2
    groups["EP5:Z"] = [
        (v, max(half - _degree_into(g, v, "+", tgt), half - _degree_into(g, v, "-", tgt))) for v in sorted(part.Z)
    ]
    return groups


def bad_vertices(g: OrientedGraph, part: QuadPartition, delta: float, C: float) -> frozenset[int]:
    """Vertices missing one of their EP3-EP5 degree conditions."""
    allowance = C * delta * g.n
    bad = set()
    for rows in _vertex_deficits(g, part).values():
        bad.update(v for v, d in rows if d > allowance + 1e-9)
    return frozenset(bad)


def check_extremal_partition(g: OrientedGraph, part: QuadPartition, delta: float, C: float) -> PartitionReport:
    """Evaluate EP1-EP7 with every hidden constant set to ``C``.

    ``required_C`` is the smallest constant at which the property would pass
    and ``slack = C - required_C``.
    """
    part.validate(g.n)
    n = g.n
    if delta <= 0 or C <= 0:
        raise InputError("delta and C must be positive")
    dn, dn2 = delta * n, delta * n * n
    results = []

    def record(name: str, value: float, scale: float, needed: float):
        req = needed / scale
        results.append(PropertyResult(name, req <= C + 1e-9, value, C * scale, req, C - req))

    dev = max(abs(len(part[J]) - n / 4) for J in PARTS)
    record("EP1", dev, dn, dev)

    e = count_edges_between(g, part.mask("W", "Z"), part.mask("Y", "Z"))
    record("EP2", e, dn2, e)

    groups = _vertex_deficits(g, part)
    for prefix in ("EP3", "EP4", "EP5"):
        allow = max(
            (_min_allowance([d for _, d in rows]) for key, rows in groups.items() if key.startswith(prefix)),
            default=0.0,
        )
        record(prefix, allow, dn, allow)

    floor = n / 50
    for name, parts, targets in (
        ("EP6", ("W", "Y"), lambda J, s: (J, SUCCESSOR[J] if s == "+" else PREDECESSOR[J])),
        ("EP7", ("X", "Z"), lambda J, s: ((SUCCESSOR[J], SUCCESSOR[SUCCESSOR[J]]) if s == "+" else (PREDECESSOR[J], PREDECESSOR[PREDECESSOR[J]]))),
    ):
        worst = 0.0
        for J in parts:
            for sign in "+-":
                tgt = part.mask(*targets(J, sign))
                for v in part[J]:
                    worst = max(worst, floor - _degree_into(g, v, sign, tgt))
        record(name, worst, dn, worst)

    return PartitionReport(delta, C, tuple(results), bad_vertices(g, part, delta, C))


# matchings and path systems


@dataclass(frozen=True)
class MatchingReport:
    edges: tuple[tuple[int, int], ...]
    required: int

    @property
    def size(self) -> int:
        return len(self.edges)

    @property
    def sufficient(self) -> bool:
        return self.size >= self.required

    def to_json(self) -> dict:
        return {"edges": [list(e) for e in self.edges], "size": self.size, "required": self.required, "sufficient": self.sufficient}


def matching_candidate_edges(g: OrientedGraph, part: QuadPartition) -> list[tuple[int, int]]:
    """Edges of ``E(X u Y, W u X)``."""
    src, dst = part.mask("X", "Y"), part.mask("W", "X")
    return [(u, v) for u, v in g.edges if (src >> u) & 1 and (dst >> v) & 1]


def find_matching_XY_WX(g: OrientedGraph, part: QuadPartition) -> MatchingReport:
    """Maximum matching among edges from ``X u Y`` to ``W u X``."""
    part.validate(g.n)
    if len(part.X) < len(part.Z):
        raise InputError(
            f"|X| = {len(part.X)} < |Z| = {len(part.Z)}; apply the routine to the reversed graph "
            "with the roles of X and Z exchanged"
        )
    edges = matching_candidate_edges(g, part)
    ug = nx.Graph()
    ug.add_edges_from(edges)
    mate = nx.max_weight_matching(ug, maxcardinality=True)
    oriented = sorted((u, v) if g.has_edge(u, v) else (v, u) for u, v in mate)
    return MatchingReport(tuple(oriented), len(part.X) - len(part.Z))


# directed forms, read along the path; the first label is the matched vertex
_FORWARD_FORMS = {
    "W": ("WWXYZW", "WXYZWW"),
    "X": ("XYZWWW", "XZWWWW"),
}
# read backwards from the matched vertex
_BACKWARD_FORMS = {
    "X": ("XWZYXWW", "XZYXWWW"),
    "Y": ("YYXWWWW", "YXWZYXW"),
}


@dataclass(frozen=True)
class PathSystem:
    paths: tuple[tuple[int, ...], ...]

    def to_json(self) -> dict:
        return {"paths": [list(p) for p in self.paths]}


def _walk(g: OrientedGraph, part: QuadPartition, start: int, forms: Sequence[str], forward: bool, blocked: int) -> tuple[list[int], int]:
    last_error = None
    for form in forms:
        walk = [start]
        used = blocked
        ok = True
        for label in form[1:]:
            cur = walk[-1]
            nbrs = g.out_masks[cur] if forward else g.in_masks[cur]
            cand = nbrs & part.mask(label) & ~used
            if not cand:
                ok = False
                last_error = f"no {label} vertex {'after' if forward else 'before'} {cur} for form {form}"
                break
            v = (cand & -cand).bit_length() - 1
            walk.append(v)
            used |= 1 << v
        if ok:
            return walk, used
    raise ConstructionError(last_error or "no form applies", "path form")


def find_balanced_path_system(
    g: OrientedGraph, part: QuadPartition, matching: Sequence[tuple[int, int]], delta: float, C: float
) -> PathSystem:
    """One directed 13-vertex path per matching edge, W endpoints, one extra X each."""
    part.validate(g.n)
    matching = [tuple(e) for e in matching]
    ends = [x for e in matching for x in e]
    if len(set(ends)) != len(ends):
        raise InputError("matching edges share a vertex")
    allowed = set(matching_candidate_edges(g, part))
    for e in matching:
        if e not in allowed:
            raise InputError(f"{e[0]}->{e[1]} is not an edge from X u Y to W u X")
    if len(matching) != len(part.X) - len(part.Z):
        raise InputError(f"matching has {len(matching)} edges, need |X| - |Z| = {len(part.X) - len(part.Z)}")
    blocked = mask_of(bad_vertices(g, part, delta, C)) | mask_of(ends)
    paths = []
    for u, v in matching:
        pu, pv = part.part_of(u), part.part_of(v)
        tail, blocked = _walk(g, part, v, _FORWARD_FORMS[pv], True, blocked)
        head, blocked = _walk(g, part, u, _BACKWARD_FORMS[pu], False, blocked)
        paths.append(tuple(reversed(head)) + tuple(tail))
    return PathSystem(tuple(paths))


def check_path_system(g: OrientedGraph, part: QuadPartition, system: PathSystem, matching: Sequence[tuple[int, int]], delta: float, C: float) -> list[str]:
    problems = []
    bad = bad_vertices(g, part, delta, C)
    covered: set[int] = set()
    for path in system.paths:
        if len(path) != 13:
            problems.append(f"path {path} does not have 13 vertices")
        if any(not g.has_edge(a, b) for a, b in zip(path, path[1:])):
            problems.append(f"path {path} is not a directed path of the graph")
        for end in (path[0], path[-1]):
            if end not in part.W or end in bad:
                problems.append(f"endpoint {end} is not a good W vertex")
        if covered & set(path):
            problems.append("paths overlap")
        covered |= set(path)
        xs = len(set(path) & part.X)
        zs = len(set(path) & part.Z)
        if xs != zs + 1:
            problems.append(f"path {path} has {xs} X and {zs} Z vertices")
    if len(system.paths) != len(matching):
        problems.append("number of paths differs from the matching size")
    for u, v in matching:
        if not any(any(a == u and b == v for a, b in zip(p, p[1:])) for p in system.paths):
            problems.append(f"matching edge {u}->{v} is not used")
    if len(part.X - covered) != len(part.Z - covered):
        problems.append("uncovered X and Z differ in size")
    return problems
