"""The compiled and pure-Python kernels must return identical results."""
import random

import pytest
from hypothesis import given, settings, strategies as st

from orientham import kernels
from orientham.extremal import build_extremal
from orientham.pattern import Pattern, canonical_patterns
from orientham.solver import find_oriented_cycle

from conftest import oriented_graphs, random_graph

needs_compiled = pytest.mark.skipif("cython" not in kernels.available(), reason="compiled kernel not built")


def test_python_always_available():
    assert "python" in kernels.available()
    assert kernels.get_kernel("python").FOUND == 0


def test_unknown_kernel():
    with pytest.raises(ValueError):
        kernels.get_kernel("fortran")


def test_large_graphs_fall_back_to_python():
    assert kernels.get_kernel(None, 200) is kernels.get_kernel("python")


@needs_compiled
@settings(max_examples=150)
@given(oriented_graphs(min_n=3, max_n=9), st.data())
def test_cycle_search_parity(g, data):
    t = data.draw(st.integers(3, g.n))
    signs = [1 if c == "+" else -1 for c in data.draw(st.text("+-", min_size=t, max_size=t))]
    anchor = data.draw(st.integers(0, g.n - t))
    allowed = ((1 << g.n) - 1) & ~((1 << anchor) - 1)
    hamilton = t == g.n and anchor == 0
    budget = data.draw(st.sampled_from([3, 50, 10**6]))
    args = (list(g.out_masks), list(g.in_masks), signs, anchor, allowed, hamilton, budget)
    assert kernels.get_kernel("python").cycle_search(*args) == kernels.get_kernel("cython").cycle_search(*args)


@needs_compiled
@settings(max_examples=100)
@given(oriented_graphs(min_n=2, max_n=12), st.integers(1, 4), st.integers(0, 3))
def test_expander_scan_parity(g, threshold, extra):
    args = (list(g.in_masks), g.n, 1, g.n - 1, threshold, extra)
    assert kernels.get_kernel("python").expander_scan(*args) == kernels.get_kernel("cython").expander_scan(*args)


@needs_compiled
def test_solver_verdicts_match_on_extremal_graphs():
    for n in (8, 10, 12):
        g = build_extremal(n, seed=n).graph
        for p in [Pattern.antidirected(n)] + canonical_patterns(6)[:10]:
            a = find_oriented_cycle(g, p, kernel="python")
            b = find_oriented_cycle(g, p, kernel="cython")
            assert (a.verdict, a.embedding, a.nodes) == (b.verdict, b.embedding, b.nodes)


@needs_compiled
def test_wide_graph_parity():
    g = random_graph(40, random.Random(1), density=0.5)
    p = Pattern("++-+--+-++")
    a = find_oriented_cycle(g, p, kernel="python")
    b = find_oriented_cycle(g, p, kernel="cython")
    assert (a.verdict, a.embedding, a.nodes) == (b.verdict, b.embedding, b.nodes)
