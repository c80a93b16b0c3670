import random

import pytest
from hypothesis import given, settings, strategies as st

from orientham.errors import CapacityError, ConstructionError, InputError
from orientham.expander import bad_vertices
from orientham.extremal import (
    antidirected_paths,
    build_exceptional,
    build_extremal,
    confinement_check,
    disjoint_special_edges,
    extend_to_proper_path,
    find_special_edges,
    is_exceptional,
    is_proper_path,
    table_row,
)
from orientham.graph import OrientedGraph, directed_cycle, induced, min_semidegree_threshold, semidegree
from orientham.partition import QuadPartition


def between(g, A, B):
    return [(u, v) for u, v in g.edges if u in A and v in B]


class TestBuild:
    def test_nine(self):
        inst = build_extremal(9)
        assert inst.partition.sizes() == {"W": 2, "X": 3, "Y": 1, "Z": 3}
        assert semidegree(inst.graph).min_semidegree == 3

    def test_fourteen_is_regular(self):
        g = build_extremal(14).graph
        assert {g.out_degree(v) for v in range(14)} == {5}
        assert {g.in_degree(v) for v in range(14)} == {5}

    def test_eight(self):
        inst = build_extremal(8)
        assert inst.partition.sizes() == {"W": 2, "X": 2, "Y": 2, "Z": 2}
        assert semidegree(inst.graph).min_semidegree == 2

    def test_too_small(self):
        with pytest.raises(InputError):
            table_row(2)

    @pytest.mark.parametrize("n", range(3, 41))
    def test_structure(self, n):
        inst = build_extremal(n, seed=n)
        g, P = inst.graph, inst.partition
        W, X, Y, Z = P.W, P.X, P.Y, P.Z
        assert P.sizes()["X"] == P.sizes()["Z"]
        # complete blow-up of the 4-cycle W -> X -> Y -> Z -> W
        for A, B in ((W, X), (X, Y), (Y, Z), (Z, W)):
            assert len(between(g, A, B)) == len(A) * len(B)
            assert between(g, B, A) == []
        assert between(g, X, X) == between(g, Z, Z) == []
        assert between(g, W, Y) == between(g, Y, W) == []
        # tournaments inside W and Y, bipartite tournament between X and Z
        for A in (W, Y):
            assert len(between(g, A, A)) == len(A) * (len(A) - 1) // 2
        assert len(between(g, X, Z)) + len(between(g, Z, X)) == len(X) * len(Z)

    def test_seed_changes_only_internal_choices(self):
        a, b = build_extremal(24, 1), build_extremal(24, 2)
        assert a.partition == b.partition
        assert semidegree(a.graph).min_semidegree == semidegree(b.graph).min_semidegree


class TestConfinement:
    def test_single_W_vertex(self):
        inst = build_extremal(8)
        w = min(inst.partition.W)
        v = confinement_check(inst, [w])
        assert "WXZ" in v.classes and v.parity_holds

    def test_all_five_paths_in_eight(self):
        inst = build_extremal(8)
        paths = [p for p in antidirected_paths(inst.graph, 5) if len(p) == 5]
        assert paths
        assert all(confinement_check(inst, p).confined for p in paths)

    def test_no_path_joins_W_and_Y(self):
        inst = build_extremal(10)
        W, Y = inst.partition.W, inst.partition.Y
        for p in antidirected_paths(inst.graph, 10):
            assert not (set(p) & W and set(p) & Y)

    def test_not_a_path(self):
        inst = build_extremal(8)
        w, y = min(inst.partition.W), min(inst.partition.Y)
        with pytest.raises(InputError):
            confinement_check(inst, [w, y])

    def test_directed_path_rejected(self):
        inst = build_extremal(8)
        w, x, y = min(inst.partition.W), min(inst.partition.X), min(inst.partition.Y)
        with pytest.raises(InputError):
            confinement_check(inst, [w, x, y])


class TestSpecialEdges:
    def test_fourteen_has_none(self):
        inst = build_extremal(14)
        assert find_special_edges(inst.graph, inst.partition) == []
        assert disjoint_special_edges(inst.graph, inst.partition).count == 0

    def test_edge_inside_X(self):
        inst = build_extremal(14)
        a, b = sorted(inst.partition.X)[:2]
        g = inst.graph.with_edges(add=[(a, b)])
        assert (a, b) in find_special_edges(g, inst.partition)

    def test_nine_plus_Y_to_X(self):
        inst = build_extremal(9)
        y, x = min(inst.partition.Y), min(inst.partition.X)
        g = inst.graph.with_edges(add=[(y, x)], remove=[(x, y)])
        assert find_special_edges(g, inst.partition) == [(y, x)]

    def test_two_disjoint_inside_X(self):
        inst = build_extremal(14)
        a, b, c, d = sorted(inst.partition.X)[:4]
        g = inst.graph.with_edges(add=[(a, b), (c, d)])
        assert disjoint_special_edges(g, inst.partition).count == 2

    def test_star_counts_one(self):
        inst = build_extremal(22)
        xs = sorted(inst.partition.X)
        g = inst.graph.with_edges(add=[(xs[0], x) for x in xs[1:4]])
        res = disjoint_special_edges(g, inst.partition)
        assert res.count == 1 and len(res.edges) == 1

    @settings(max_examples=40)
    @given(st.integers(0, 10**6))
    def test_count_monotone_under_edge_addition(self, seed):
        rng = random.Random(seed)
        inst = build_extremal(rng.choice([14, 22]), seed=seed)
        g = inst.graph
        for _ in range(4):
            free = [(u, v) for u in range(g.n) for v in range(u + 1, g.n) if not g.adjacent(u, v)]
            u, v = rng.choice(free)
            before = disjoint_special_edges(g, inst.partition).count
            g = g.with_edges(add=[(u, v) if rng.random() < 0.5 else (v, u)])
            assert disjoint_special_edges(g, inst.partition).count >= before


class TestExceptional:
    @pytest.mark.parametrize("s", [1, 2, 3])
    def test_detects_constructed_vertex(self, s):
        g, v = build_exceptional(s, seed=s)
        assert semidegree(g).min_semidegree >= min_semidegree_threshold(g.n)
        assert is_exceptional(g) == v

    def test_extremal_eleven_fails_degree_condition(self):
        g = build_extremal(11).graph
        assert is_exceptional(g) is None

    def test_directed_eleven_cycle(self):
        assert is_exceptional(directed_cycle(11)) is None

    def test_wrong_order(self):
        assert is_exceptional(build_extremal(12).graph) is None

    def test_capacity(self):
        with pytest.raises(CapacityError):
            is_exceptional(directed_cycle(43))

    def test_exceptional_minus_vertex_is_extremal(self):
        g, v = build_exceptional(1)
        h, _ = induced(g, [u for u in range(g.n) if u != v])
        assert semidegree(h).min_semidegree == semidegree(build_extremal(10).graph).min_semidegree


def planted_forty():
    inst = build_extremal(40, seed=3)
    x, y = min(inst.partition.X), min(inst.partition.Y)
    g = inst.graph.with_edges(add=[(y, x)], remove=[(x, y)])
    return inst.partition, g, (y, x)


class TestProperPath:
    def test_planted_Y_to_X(self):
        part, g, edge = planted_forty()
        path = extend_to_proper_path(g, part, edge)
        assert path.form == "W^3 v2 v1 v u u1 u2 Y^4"
        vs = path.vertices
        assert len(set(vs)) == 13
        assert (vs[6], vs[5]) == edge
        assert all(v in part.W for v in vs[:3]) and all(v in part.Y for v in vs[9:])
        assert is_proper_path(g, part, vs)

    def test_avoids_bad_vertices(self):
        part, g, edge = planted_forty()
        bad = bad_vertices(g, part, 0.05, 2)
        path = extend_to_proper_path(g, part, edge, bad=bad - set(edge))
        assert not set(path.vertices) & bad - set(edge)

    def test_forbidding_most_of_W(self):
        part, g, edge = planted_forty()
        forbidden = sorted(part.W)[2:]
        with pytest.raises(ConstructionError) as info:
            extend_to_proper_path(g, part, edge, forbidden)
        assert "W" in info.value.step

    def test_non_special_edge(self):
        inst = build_extremal(40)
        w, x = min(inst.partition.W), min(inst.partition.X)
        with pytest.raises(InputError):
            extend_to_proper_path(inst.graph, inst.partition, (w, x))

    def test_other_orientation(self):
        inst = build_extremal(40, seed=1)
        z1, z2 = sorted(inst.partition.Z)[:2]
        g = inst.graph.with_edges(add=[(z1, z2)])
        path = extend_to_proper_path(g, inst.partition, (z1, z2))
        assert path.form == "W^4 u2 u1 u v v1 v2 Y^3"
        assert is_proper_path(g, inst.partition, path.vertices)
