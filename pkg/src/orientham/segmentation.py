"""Partitions of a cyclic pattern into segments used by the embedding argument.

Two regimes are covered.  With few sinks, the cycle is cut into segments
``L_1 R_1 ... L_l R_l`` where every ``R_i`` is a directed, all-normal stretch
of order 3 mod 4.  With many sinks, the cycle is cut into tuples
``(Q_{i-1}, P_i, Q_i)`` of three recognisable types which are then grouped
into families of prescribed total size.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

from .errors import ClassificationError, ConstructionError, ParameterError
from .pattern import NORMAL, SINK, SOURCE, Pattern, Segment, segments_to_json, tiles_cycle

BLOCK = 13
SHORT_R = 3


# few sinks


@dataclass(frozen=True)
class FewSinkPartition:
    t: int
    block13: int
    segments: tuple[Segment, ...]

    @property
    def L(self) -> list[Segment]:
        return [s for s in self.segments if s.kind == "L"]

    @property
    def R(self) -> list[Segment]:
        return [s for s in self.segments if s.kind == "R"]

    def to_json(self) -> list[dict]:
        return segments_to_json(self.segments)


def _split_normal_run(start: int, length: int, wanted: int, t: int) -> tuple[list[Segment], int]:
    """Lay ``R3 L13 R3 L13 ... R`` over a normal run, using at most ``wanted`` blocks."""
    capacity = length // (BLOCK + SHORT_R)
    used = min(capacity, wanted)
    segs: list[Segment] = []
    pos = 0
    for _ in range(used):
        segs.append(Segment("R", (start + pos) % t, SHORT_R))
        segs.append(Segment("L", (start + pos + SHORT_R) % t, BLOCK, "block"))
        pos += SHORT_R + BLOCK
    segs.append(Segment("R", (start + pos) % t, length - pos))
    return segs, used


def partition_few_sinks(p: Pattern, block13: int, gap: int = 10) -> FewSinkPartition:
    """Cut ``p`` into alternating ``L``/``R`` segments.

    Sinks and sources closer than ``gap`` share an ``L``.  Exactly ``block13``
    of the ``L`` segments are directed 13-vertex blocks carved from the normal
    stretches.
    """
    t = len(p)
    if gap < 9:
        raise ParameterError(f"gap must be at least 9 so every R keeps 3 vertices, got {gap}")
    if block13 < 0:
        raise ParameterError("block13 must be non-negative")
    special = [i for i in range(t) if p.role(i) != NORMAL]

    if not special:
        if block13 < 1:
            raise ConstructionError("a directed pattern needs at least one 13-block", "block13>=1")
        if t % 4:
            raise ConstructionError(f"directed pattern of length {t} is not 0 mod 4", "t%4==0")
        if t < 16 * block13:
            raise ConstructionError(f"length {t} cannot hold {block13} blocks of 16", "capacity")
        segs = []
        for j in range(block13):
            segs.append(Segment("L", 16 * j, BLOCK, "block"))
            last = j == block13 - 1
            segs.append(Segment("R", 16 * j + BLOCK, t - 16 * j - BLOCK if last else SHORT_R))
        return FewSinkPartition(t, block13, tuple(segs))

    m = len(special)
    dists = [(special[j] - special[j - 1]) % t for j in range(m)]
    try:
        first = next(j for j in range(m) if dists[j] >= gap)
    except StopIteration:
        raise ConstructionError(
            f"no two consecutive sinks/sources are at distance >= {gap}", "gap"
        ) from None
    order = special[first:] + special[:first]

    segments: list[Segment] = []
    remaining = block13
    cluster_start = order[0]
    for k in range(m):
        here, nxt = order[k], order[(k + 1) % m]
        gap_len = (nxt - here) % t
        if gap_len < gap:
            continue
        d = next(d for d in range(2, 6) if (gap_len - d) % 4 == 0)
        l_len = (here - cluster_start) % t + d + 1
        segments.append(Segment("L", cluster_start, l_len, "cluster"))
        run, used = _split_normal_run((here + d + 1) % t, gap_len - d - 1, remaining, t)
        segments.extend(run)
        remaining -= used
        cluster_start = nxt
    if remaining:
        raise ConstructionError(
            f"normal stretches hold only {block13 - remaining} of {block13} requested 13-blocks",
            "capacity",
        )
    return FewSinkPartition(t, block13, tuple(segments))


def check_few_sink_partition(p: Pattern, part: FewSinkPartition) -> list[str]:
    """List every violated invariant (empty when the partition is valid)."""
    t = len(p)
    problems: list[str] = []
    segs = list(part.segments)
    defect = tiles_cycle(segs, t)
    if defect:
        problems.append(defect)
    kinds = [s.kind for s in segs]
    if kinds != ["L", "R"] * (len(segs) // 2) or len(segs) % 2:
        problems.append("segments do not alternate L, R")
    covered = set()
    for s in segs:
        if s.length < 3:
            problems.append(f"{s.kind}@{s.start} has fewer than 3 vertices")
        if s.kind == "L":
            covered.update(s.positions(t))
        if s.kind == "R":
            if not p.path_is_directed(s.start, s.length):
                problems.append(f"R@{s.start} is not directed")
            if any(p.role(i) != NORMAL for i in s.positions(t)):
                problems.append(f"R@{s.start} contains a sink or source")
            if s.length % 4 != 3:
                problems.append(f"R@{s.start} has order {s.length}, not 3 mod 4")
    for i in range(t):
        if p.role(i) in (SINK, SOURCE) and i not in covered:
            problems.append(f"position {i} ({p.role(i)}) is not inside any L")
    blocks = sum(1 for s in segs if s.kind == "L" and s.length == BLOCK and p.path_is_directed(s.start, s.length))
    if blocks != part.block13:
        problems.append(f"{blocks} directed 13-blocks instead of {part.block13}")
    return problems


# tuple types


@dataclass(frozen=True)
class TupleBounds:
    min_I: int
    max_I: int
    len_II: int
    min_III: int
    max_III: int


def _extended_all_special_antidirected(p: Pattern, q: Segment) -> bool:
    """``v Q u``: one position either side of ``q``, antidirected and free of normal vertices."""
    start, order = q.start - 1, q.length + 2
    if not p.path_is_antidirected(start, order):
        return False
    return all(p.role(start + j) != NORMAL for j in range(order))


def classify_tuple(p: Pattern, q_prev: Segment, seg: Segment, q: Segment | None, bounds: TupleBounds) -> str:
    """Type of the tuple ``(q_prev, seg, q)`` read directly from the pattern."""
    q_prev_directed = q_prev.length >= 1 and p.path_is_directed(q_prev.start, q_prev.length)
    q_directed = q is not None and q.length >= 1 and p.path_is_directed(q.start, q.length)
    matches = []
    if q_prev_directed and q_directed and bounds.min_I <= seg.length <= bounds.max_I:
        matches.append("I")
    if (
        q_prev_directed
        and q is not None
        and q.length >= 1
        and _extended_all_special_antidirected(p, q)
        and seg.length == bounds.len_II
    ):
        matches.append("II")
    if (
        q_prev.length >= 1
        and _extended_all_special_antidirected(p, q_prev)
        and p.path_is_antidirected(seg.start, seg.length)
        and bounds.min_III <= seg.length <= bounds.max_III
    ):
        matches.append("III")
    if len(matches) != 1:
        what = "no type" if not matches else f"several types {matches}"
        raise ClassificationError(f"tuple with P@{seg.start} (order {seg.length}) matches {what}")
    return matches[0]


# many sinks


@dataclass(frozen=True)
class ManySinkParams:
    """Parameters of the many-sink partition.

    Length thresholds default to their asymptotic forms
    (``sqrt(xi) t``, ``1/eps``, ``2/eps``, ``t^(1/6)``, ``t^(1/3)``) and may be
    overridden for small instances.
    """

    k: int
    k_star: int
    m: int
    delta: float
    eps: float
    xi: float
    ly_length: int | None = None
    ly_min_sinks: int | None = None
    min_I: int | None = None
    len_II: int | None = None
    len_III: int | None = None
    long_threshold: int | None = None

    @classmethod
    def desk(cls, **overrides) -> "ManySinkParams":
        """Small-instance preset tuned for t = 400."""
        base = dict(k=4, k_star=3, m=15, delta=0.03, eps=0.25, xi=0.01, long_threshold=20)
        base.update(overrides)
        return cls(**base)

    def resolve(self, t: int) -> "ResolvedParams":
        ly = self.ly_length if self.ly_length is not None else round(math.sqrt(self.xi) * t)
        ly_sinks = self.ly_min_sinks if self.ly_min_sinks is not None else math.ceil(self.xi**2 * t - 1e-9)
        min_I = self.min_I if self.min_I is not None else math.ceil(1 / self.eps - 1e-9)
        len_II = self.len_II if self.len_II is not None else round(2 / self.eps)
        len_III = self.len_III if self.len_III is not None else math.ceil(t ** (1 / 6) - 1e-9)
        long_thr = self.long_threshold if self.long_threshold is not None else math.floor(t ** (1 / 3) + 1e-9)
        return ResolvedParams(
            t=t, k=self.k, k_star=self.k_star, m=self.m, delta_n=self.delta * t, xi=self.xi,
            ly_length=ly, ly_min_sinks=ly_sinks,
            bounds=TupleBounds(min_I, long_thr, len_II, len_III, 2 * len_III),
        )


@dataclass(frozen=True)
class ResolvedParams:
    t: int
    k: int
    k_star: int
    m: int
    delta_n: float
    xi: float
    ly_length: int
    ly_min_sinks: int
    bounds: TupleBounds

    def interval(self, kind: str, index: int) -> tuple[float, float]:
        if kind == "I":
            base = 3 * self.m
        else:
            base = 2 * self.m if index <= self.k_star else 4 * self.m
        return base - 2 * self.delta_n, base - self.delta_n

    def validate(self, p: Pattern) -> None:
        b = self.bounds
        t = self.t
        if not self.k / 2 <= self.k_star <= self.k:
            raise ParameterError(f"need k/2 <= k* <= k, got k={self.k}, k*={self.k_star}")
        if p.is_directed:
            raise ParameterError("pattern is directed; the many-sink partition needs sinks")
        if p.sigma < self.xi * t:
            raise ParameterError(f"sigma(C) = {p.sigma} is below xi * t = {self.xi * t:g}")
        if 2 * self.m - 2 * self.delta_n <= 0:
            raise ParameterError("family size intervals must be positive: need 2m > 2 delta n")
        if b.min_I < 1 or b.min_III < 2:
            raise ParameterError("need 1/eps >= 1 and a regular type III order of at least 2")
        if b.len_II < b.min_I + 2:
            raise ParameterError(f"type II order {b.len_II} must exceed 1/eps = {b.min_I} by at least 2")
        if b.max_I < b.len_II + 2 * b.min_III + 5:
            raise ParameterError(
                f"long threshold {b.max_I} is below len_II + 2 len_III + 5 = {b.len_II + 2 * b.min_III + 5}; "
                "long segments could not be split"
            )
        if self.ly_length + 13 >= t:
            raise ParameterError("L_Y is too long for this cycle")


@dataclass(frozen=True)
class TupleRecord:
    index: int
    q_prev: Segment
    p: Segment
    q: Segment | None
    type: str
    family: int  # 0 means the leftover bucket P_0


@dataclass(frozen=True)
class Family:
    index: int
    type: str
    members: tuple[int, ...]
    size: int


@dataclass(frozen=True)
class ManySinkPartition:
    t: int
    params: ResolvedParams
    ly: Segment
    q0: Segment
    tuples: tuple[TupleRecord, ...]
    tail: Segment
    families: tuple[Family, ...]
    p0: tuple[int, ...]
    leftover: int
    intended: tuple[str, ...] = field(default=())

    def segments(self) -> list[Segment]:
        segs = [self.ly, self.q0]
        for rec in self.tuples:
            segs.append(replace(rec.p, type=rec.type))
            segs.append(rec.q)
        if self.tail.length:
            segs.append(self.tail)
        return segs

    def p0_order(self) -> int:
        return sum(self.tuples[i - 1].p.length for i in self.p0)

    def to_json(self) -> dict:
        return {
            "segments": segments_to_json(self.segments()),
            "families": [
                {"index": f.index, "type": f.type, "members": list(f.members), "size": f.size}
                for f in self.families
            ],
            "p0": list(self.p0),
            "leftover": self.leftover,
        }


def _choose_ly(p: Pattern, rp: ResolvedParams) -> tuple[Segment, Segment]:
    t = len(p)
    anti = p.is_antidirected
    q0_len = 13 if anti else 3
    for start in range(t):
        if p.path_sink_count(start, rp.ly_length) < rp.ly_min_sinks:
            continue
        q_start = (start + rp.ly_length) % t
        if anti:
            ok = p.role(q_start) == SOURCE
        else:
            ok = p.path_is_directed(q_start, q0_len)
        if ok:
            return Segment("LY", start, rp.ly_length), Segment("Q", q_start, q0_len)
    raise ConstructionError("no position admits L_Y followed by a suitable Q_0", "L_Y")


def _primary_segments(p: Pattern, begin: int, span: int, min_I: int) -> list[tuple[int, int, bool]]:
    """Greedy ``L_j R_j`` split of ``span`` positions from ``begin``.

    Returns ``(offset, order, has_R)`` per ``L_j``; each ``R_j`` is the directed
    3-path right after it.
    """
    t = len(p)
    out = []
    off = 0
    while off < span:
        length = 0
        while True:
            length += 1
            end = off + length
            if end >= span:
                out.append((off, span - off, False))
                return out
            if length >= min_I and end + 3 <= span and p.path_is_directed((begin + end) % t, 3):
                out.append((off, length, True))
                break
        off = end + 3
    return out


def _split_long(order: int, prefix: bool, b: TupleBounds) -> tuple[list[tuple[str, int]], int]:
    """Pieces ``L' Q P Q P ... Q L''`` for a long segment; returns pieces and leftover."""
    pieces: list[tuple[str, int]] = []
    rest = order
    if prefix:
        pieces += [("P", b.len_II), ("Q", 3)]
        rest -= b.len_II + 3
    p3 = b.min_III
    r = (rest - p3) // (p3 + 3)
    last = rest - r * (p3 + 3)
    excess = max(0, last - b.max_III)
    for j in range(r):
        extra = excess if j == r - 1 else 0
        pieces += [("P", p3 + extra), ("Q", 3)]
    pieces.append(("P", last - excess))
    return pieces, excess


def partition_many_sinks(p: Pattern, params: ManySinkParams) -> ManySinkPartition:
    """Tuple partition with ``k`` families of prescribed sizes.

    Raises ``ParameterError`` when the preconditions fail and
    ``ConstructionError`` when the greedy grouping cannot finish.
    """
    t = len(p)
    rp = params.resolve(t)
    rp.validate(p)
    b = rp.bounds
    ly, q0 = _choose_ly(p, rp)

    begin = q0.end(t)
    span = t - ly.length - q0.length
    # flattened list of ("P"|"Q", absolute start, order) after Q_0, plus intended types
    pieces: list[tuple[str, int, int]] = []
    intended: list[str] = []
    leftover = 0
    prev_directed = not p.is_antidirected
    for off, order, has_r in _primary_segments(p, begin, span, b.min_I):
        start = (begin + off) % t
        if order <= b.max_I:
            pieces.append(("P", start, order))
            intended.append("I")
        else:
            parts, excess = _split_long(order, prev_directed, b)
            leftover += excess
            pos = start
            first = True
            for kind, size in parts:
                pieces.append((kind, pos, size))
                if kind == "P":
                    intended.append("II" if first and prev_directed else "III")
                    first = False
                pos = (pos + size) % t
        if has_r:
            pieces.append(("Q", (begin + off + order) % t, 3))
        prev_directed = True

    # pair every P with the Q right after it
    ps: list[tuple[Segment, Segment | None]] = []
    i = 0
    while i < len(pieces):
        kind, start, size = pieces[i]
        assert kind == "P"
        q = None
        if i + 1 < len(pieces) and pieces[i + 1][0] == "Q":
            q = Segment("Q", pieces[i + 1][1], pieces[i + 1][2])
            i += 1
        ps.append((Segment("P", start, size), q))
        i += 1

    records: list[TupleRecord] = []
    sizes: dict[int, int] = {}
    members: dict[int, list[int]] = {}
    kinds: dict[int, str] = {}
    p0: list[int] = []
    alpha, beta, gamma = 1, 2, 3
    q_prev = q0
    for idx, (seg, q) in enumerate(ps, start=1):
        if gamma > rp.k + 2:
            break
        if q is None:
            raise ConstructionError(
                f"reached the last segment before L_Y with only {gamma - 3} of {rp.k} families filled",
                "families",
            )
        typ = classify_tuple(p, q_prev, seg, q, b)
        if typ == "II":
            fam = 0
            p0.append(idx)
        else:
            fam = alpha if typ == "I" else beta
            sizes[fam] = sizes.get(fam, 0) + seg.length
            members.setdefault(fam, []).append(idx)
            kinds[fam] = typ
            lo, hi = rp.interval(typ, fam)
            if lo <= sizes[fam] <= hi:
                if typ == "I":
                    alpha = gamma
                else:
                    beta = gamma
                gamma += 1
        records.append(TupleRecord(idx, q_prev, seg, q, typ, fam))
        q_prev = q
    if gamma <= rp.k + 2:
        raise ConstructionError(
            f"ran out of tuples with only {gamma - 3} of {rp.k} families filled", "families"
        )

    saturated = [f for f in sorted(members) if f not in (alpha, beta)]
    for f in (alpha, beta):
        for idx in members.get(f, []):
            p0.append(idx)
    records = [replace(r, family=0) if r.family in (alpha, beta) else r for r in records]
    p0.sort()
    families = tuple(Family(f, kinds[f], tuple(members[f]), sizes[f]) for f in saturated)

    tail_start = records[-1].q.end(t)
    tail_len = (ly.start - tail_start) % t
    part = ManySinkPartition(
        t=t, params=rp, ly=ly, q0=q0, tuples=tuple(records),
        tail=Segment("TAIL", tail_start, tail_len), families=families,
        p0=tuple(p0), leftover=leftover, intended=tuple(intended[: len(records)]),
    )
    if part.p0_order() > 4 * rp.m:
        raise ConstructionError(
            f"P_0 holds {part.p0_order()} vertices, more than 4m = {4 * rp.m}", "P_0 size"
        )
    return part


def check_many_sink_partition(p: Pattern, part: ManySinkPartition) -> list[str]:
    """Independent re-check of the many-sink invariants."""
    t = len(p)
    rp = part.params
    b = rp.bounds
    problems: list[str] = []
    defect = tiles_cycle(part.segments(), t)
    if defect:
        problems.append(defect)
    if part.ly.length != rp.ly_length:
        problems.append("L_Y has the wrong order")
    if p.path_sink_count(part.ly.start, part.ly.length) < rp.ly_min_sinks:
        problems.append("L_Y carries too few sinks")
    if p.is_antidirected:
        if part.q0.length != 13 or p.role(part.q0.start) != SOURCE:
            problems.append("Q_0 must be an antidirected 13-path starting at a source")
    elif part.q0.length != 3 or not p.path_is_directed(part.q0.start, 3):
        problems.append("Q_0 must be a directed 3-path")
    if not rp.k / 2 <= rp.k_star <= rp.k:
        problems.append("k* outside [k/2, k]")

    seen_family: dict[int, str] = {}
    family_size: dict[int, int] = {}
    placed: list[int] = []
    for rec in part.tuples:
        if rec.q is None or rec.q.length != 3:
            problems.append(f"tuple {rec.index} lacks a 3-vertex Q after it")
            continue
        if not (p.path_is_directed(rec.q.start, 3) or _extended_all_special_antidirected(p, rec.q)):
            problems.append(f"Q after tuple {rec.index} is neither directed nor in an antidirected zone")
        try:
            typ = classify_tuple(p, rec.q_prev, rec.p, rec.q, b)
        except ClassificationError as exc:
            problems.append(str(exc))
            continue
        if typ != rec.type:
            problems.append(f"tuple {rec.index} recorded as {rec.type} but classifies as {typ}")
        if rec.family:
            if seen_family.setdefault(rec.family, typ) != typ:
                problems.append(f"family {rec.family} mixes types")
            family_size[rec.family] = family_size.get(rec.family, 0) + rec.p.length
        else:
            placed.append(rec.index)
    if sorted(placed) != sorted(part.p0):
        problems.append("P_0 does not match the unassigned tuples")
    if len(part.families) != rp.k:
        problems.append(f"{len(part.families)} families instead of k = {rp.k}")
    for fam in part.families:
        if family_size.get(fam.index) != fam.size:
            problems.append(f"family {fam.index} size mismatch")
        lo, hi = rp.interval(fam.type, fam.index)
        if not lo <= fam.size <= hi:
            problems.append(f"family {fam.index} ({fam.type}) has {fam.size} vertices, outside [{lo:g}, {hi:g}]")
        if not 1 <= fam.index <= rp.k + 1:
            problems.append(f"family index {fam.index} outside 1..k+1")
    if part.p0_order() > 4 * rp.m:
        problems.append("P_0 exceeds 4m vertices")
    return problems
