import random

import pytest
from hypothesis import given, settings, strategies as st

from orientham.errors import ClassificationError, ConstructionError, ParameterError
from orientham.pattern import NORMAL, Pattern, Segment, random_pattern
from orientham.segmentation import (
    ManySinkParams,
    TupleBounds,
    check_few_sink_partition,
    check_many_sink_partition,
    classify_tuple,
    partition_few_sinks,
    partition_many_sinks,
)


def coverage(segments, t):
    counts = [0] * t
    for s in segments:
        for j in range(s.length):
            counts[(s.start + j) % t] += 1
    return counts


class TestFewSinks:
    def test_directed_hundred_two_blocks(self):
        p = Pattern.directed(100)
        part = partition_few_sinks(p, block13=2)
        assert check_few_sink_partition(p, part) == []
        assert len(part.L) == 2
        assert all(s.length == 13 and p.path_is_directed(s.start, 13) for s in part.L)
        assert all(s.length % 4 == 3 and p.path_is_directed(s.start, s.length) for s in part.R)

    def test_one_pair_in_sixty(self):
        p = Pattern("+" * 20 + "-" * 20 + "+" * 20)
        assert p.sigma == 1
        part = partition_few_sinks(p, block13=1)
        assert check_few_sink_partition(p, part) == []
        in_L = {i for s in part.L for i in s.positions(60)}
        assert set(p.sinks() + p.sources()) <= in_L
        assert all(p.role(i) == NORMAL for s in part.R for i in s.positions(60))

    def test_alternating_eight_fails_on_gap(self):
        with pytest.raises(ConstructionError) as info:
            partition_few_sinks(Pattern.antidirected(8), block13=0)
        assert info.value.step == "gap"

    def test_too_many_blocks(self):
        with pytest.raises(ConstructionError) as info:
            partition_few_sinks(Pattern.directed(40), block13=3)
        assert info.value.step == "capacity"

    def test_small_gap_rejected(self):
        with pytest.raises(ParameterError):
            partition_few_sinks(Pattern.directed(40), block13=1, gap=8)

    @settings(max_examples=150)
    @given(st.integers(60, 400), st.integers(0, 8), st.integers(0, 4), st.integers(0, 10**6))
    def test_valid_or_construction_failure(self, t, sinks, blocks, seed):
        p = random_pattern(t, random.Random(seed), "few", sinks=sinks)
        try:
            part = partition_few_sinks(p, blocks)
        except ConstructionError:
            return
        assert coverage(part.segments, t) == [1] * t
        assert check_few_sink_partition(p, part) == []
        # distance from the end of one L to the start of the next is 0 mod 4
        segs = part.segments
        for i, s in enumerate(segs):
            if s.kind == "L":
                nxt = next(x for x in segs[i + 1:] + segs[: i + 1] if x.kind == "L")
                assert ((nxt.start - (s.start + s.length - 1)) % t) % 4 == 0

    def test_checker_catches_bad_R(self):
        p = Pattern.directed(100)
        part = partition_few_sinks(p, block13=2)
        segs = list(part.segments)
        segs[1] = Segment("R", segs[1].start, segs[1].length + 1)
        segs[2] = Segment("L", segs[2].start + 1, segs[2].length - 1, "block")
        broken = type(part)(part.t, part.block13, tuple(segs))
        assert check_few_sink_partition(p, broken) != []


BOUNDS = TupleBounds(min_I=4, max_I=20, len_II=8, min_III=3, max_III=6)


class TestClassifyTuple:
    def test_type_I(self):
        p = Pattern("+" * 30)
        assert classify_tuple(p, Segment("Q", 0, 3), Segment("P", 3, 5), Segment("Q", 8, 3), BOUNDS) == "I"

    def test_type_II(self):
        p = Pattern("+++" + "+" * 6 + "+-+-+-" + "+" * 15)
        q_prev, seg, q = Segment("Q", 0, 3), Segment("P", 3, 8), Segment("Q", 11, 3)
        assert classify_tuple(p, q_prev, seg, q, BOUNDS) == "II"

    def test_type_III(self):
        p = Pattern.antidirected(40)
        assert classify_tuple(p, Segment("Q", 1, 3), Segment("P", 4, 5), Segment("Q", 9, 3), BOUNDS) == "III"

    def test_no_type(self):
        p = Pattern("+" * 30)
        with pytest.raises(ClassificationError):
            classify_tuple(p, Segment("Q", 0, 3), Segment("P", 3, 25), Segment("Q", 28, 2), BOUNDS)


class TestManySinks:
    def test_antidirected_all_type_III(self):
        p = Pattern.antidirected(400)
        part = partition_many_sinks(p, ManySinkParams.desk())
        assert check_many_sink_partition(p, part) == []
        assert {r.type for r in part.tuples} == {"III"}
        assert not [f for f in part.families if f.type == "I"]

    def test_literal_m40_is_infeasible_at_t400(self):
        with pytest.raises(ConstructionError):
            partition_many_sinks(Pattern.antidirected(400), ManySinkParams.desk(m=40))

    def test_long_directed_runs_fill_type_I_intervals(self):
        params = ManySinkParams.desk()
        p = Pattern(("+" * 19 + "-") * 20)
        part = partition_many_sinks(p, params)
        assert check_many_sink_partition(p, part) == []
        rp = params.resolve(400)
        type_I = [f for f in part.families if f.type == "I"]
        assert type_I
        for f in type_I:
            lo, hi = rp.interval("I", f.index)
            assert (lo, hi) == (3 * rp.m - 2 * rp.delta_n, 3 * rp.m - rp.delta_n)
            assert lo <= f.size <= hi

    def test_directed_pattern_rejected(self):
        with pytest.raises(ParameterError):
            partition_many_sinks(Pattern.directed(400), ManySinkParams.desk())

    def test_k_star_range_rejected(self):
        with pytest.raises(ParameterError):
            partition_many_sinks(Pattern.antidirected(400), ManySinkParams.desk(k_star=1))

    @settings(max_examples=40)
    @given(st.integers(0, 10**6), st.sampled_from(["uniform", "blocks"]))
    def test_family_contents(self, seed, style):
        p = random_pattern(400, random.Random(seed), style)
        try:
            part = partition_many_sinks(p, ManySinkParams.desk())
        except ConstructionError:
            return
        assert check_many_sink_partition(p, part) == []
        assert coverage(part.segments(), 400) == [1] * 400
        by_index = {r.index: r for r in part.tuples}
        for fam in part.families:
            for i in fam.members:
                rec = by_index[i]
                if fam.type == "III":
                    assert p.path_is_antidirected(rec.p.start, rec.p.length)
                if fam.type == "I":
                    assert p.path_is_directed(rec.q_prev.start, rec.q_prev.length)
                    assert p.path_is_directed(rec.q.start, rec.q.length)
