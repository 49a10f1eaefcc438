import math
import random
from itertools import combinations, permutations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cherrylab.constructions import build_tree
from cherrylab.graphs import (GraphError, PatternGraph, cherry_stats, complete, count_cherries, cycle,
                              degree_order, extremal_edge_check, leaf_cherry_count, matching, path,
                              random_graph, random_tree, star)


def paths_on_three(G):
    """Oracle: every unordered 3-vertex path, by brute force over vertex triples."""
    found = set()
    for a, b, c in permutations(range(1, G.n + 1), 3):
        if G.has_edge(a, b) and G.has_edge(b, c):
            found.add((min(a, c), b, max(a, c)))
    return found


@st.composite
def graphs(draw, max_n=12):
    n = draw(st.integers(1, max_n))
    pairs = list(combinations(range(1, n + 1), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return PatternGraph(n, chosen)


class TestPatternGraph:
    def test_rejects_loops_duplicates_and_range(self):
        with pytest.raises(GraphError):
            PatternGraph(3, [(1, 1)])
        with pytest.raises(GraphError):
            PatternGraph(3, [(1, 2), (2, 1)])
        with pytest.raises(GraphError):
            PatternGraph(3, [(1, 4)])

    def test_adjacency_matches_edges(self):
        G = PatternGraph(4, [(3, 1), (1, 2), (4, 2)])
        assert G.edges == ((1, 2), (1, 3), (2, 4))
        assert G.neighbors(1) == (2, 3)
        assert G.neighbors(2) == (1, 4)
        assert G.deg(3) == 1

    def test_from_labeled_edges_remaps(self):
        G, labels = PatternGraph.from_labeled_edges([("a", "b"), ("b", "c")])
        assert G.n == 3 and G.num_edges == 2
        assert sorted(labels) == ["a", "b", "c"]

    def test_diameter(self):
        assert path(5).diameter() == 4
        assert complete(4).diameter() == 1
        assert matching(2).diameter() == math.inf


class TestCherries:
    def test_triangle(self):
        assert count_cherries(complete(3)) == 3

    def test_star(self):
        assert count_cherries(star(4)) == 6

    def test_tree_T8(self):
        T = build_tree("T", 8)
        assert T.n == 13
        assert len(paths_on_three(T)) == 18
        assert count_cherries(T) == 18

    @settings(max_examples=150, deadline=None)
    @given(graphs())
    def test_formula_matches_enumeration(self, G):
        assert count_cherries(G) == len(paths_on_three(G))
        assert sum(1 for _ in G.cherries()) == count_cherries(G)

    def test_leaf_cherries_examples(self):
        assert leaf_cherry_count(path(3), 1) == 1
        assert leaf_cherry_count(star(4), 2) == 3
        assert all(leaf_cherry_count(complete(3), u) == 2 for u in (1, 2, 3))

    def test_leaf_cherries_invalid_vertex(self):
        with pytest.raises(GraphError):
            leaf_cherry_count(path(3), 4)

    @settings(max_examples=150, deadline=None)
    @given(graphs())
    def test_leaf_count_matches_enumeration(self, G):
        cherries = paths_on_three(G)
        stats = cherry_stats(G)
        assert stats.r == sum(stats.per_vertex_middle)
        for u in range(1, G.n + 1):
            as_leaf = sum(1 for a, _, c in cherries if u in (a, c))
            assert leaf_cherry_count(G, u) == as_leaf == stats.per_vertex_leaf[u - 1]

    @settings(max_examples=200, deadline=None)
    @given(graphs(max_n=14))
    def test_max_degree_bound(self, G):
        d = G.max_degree()
        assert d * (d - 1) <= 2 * count_cherries(G)


class TestDegreeOrder:
    def test_star(self):
        # delta_S is the largest degree in G among S, so the leaves give 1
        d = degree_order(star(4), 1)
        assert d.L == (1,) and d.delta_S == 1

    def test_triangle_empty_L(self):
        d = degree_order(complete(3), 0)
        assert d.L == () and d.delta_S == 2

    def test_tree_T8(self):
        T = build_tree("T", 8)
        d = degree_order(T, 3)
        assert d.L == (1, 2, 3)
        assert [T.deg(v) for v in d.L] == [4, 3, 3]
        assert d.delta_S == 3

    def test_ell_too_big(self):
        with pytest.raises(GraphError):
            degree_order(path(3), 4)

    @settings(max_examples=100, deadline=None)
    @given(graphs(), st.data())
    def test_sorted_partition_and_deterministic(self, G, data):
        ell = data.draw(st.integers(0, G.n))
        d = degree_order(G, ell)
        degs = [G.deg(v) for v in d.order]
        assert degs == sorted(degs, reverse=True)
        assert sorted(d.L + d.S) == list(range(1, G.n + 1))
        assert len(d.L) == ell
        assert degree_order(G, ell) == d


class TestExtremalEdges:
    def test_triangle(self):
        chk = extremal_edge_check(complete(3), "all")
        assert chk.bound == 3 and chk.actual == 3 and chk.holds

    def test_star_center(self):
        chk = extremal_edge_check(star(4), [1])
        assert chk.actual == 4
        assert chk.bound == pytest.approx(2 * math.sqrt(6))
        assert chk.holds

    def test_bad_subset(self):
        with pytest.raises(GraphError):
            extremal_edge_check(path(3), [5])

    @settings(max_examples=200, deadline=None)
    @given(graphs(max_n=14), st.data())
    def test_always_holds(self, G, data):
        assert extremal_edge_check(G, "all").holds
        T = data.draw(st.lists(st.integers(1, G.n), unique=True))
        chk = extremal_edge_check(G, T)
        assert chk.holds
        assert chk.actual == sum(1 for u, v in G.edges if u in T or v in T)


def test_generators_are_valid():
    rng = random.Random(1)
    for _ in range(20):
        T = random_tree(40, 3, rng)
        assert T.num_edges == 39 and T.max_degree() <= 3 and len(T.components()) == 1
    assert random_graph(10, 1.0, rng).num_edges == 45
    assert cycle(5).num_edges == 5 and all(cycle(5).deg(v) == 2 for v in range(1, 6))
    assert count_cherries(matching(4)) == 0


def test_relabel_and_induced():
    G = path(4)
    H = G.relabel([2, 3, 1, 4])
    assert H.num_edges == 3 and count_cherries(H) == count_cherries(G)
    assert G.induced([2, 3, 4]).edges == ((1, 2), (2, 3))
