import math
import random
from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, settings

from commonpairs import _backend
from commonpairs.errors import GraphError, ParseError
from commonpairs.graphs import (
    Graph,
    aut_count,
    canonical_form,
    complement,
    complete,
    contains_k4,
    cycle,
    cycle_count,
    disjoint_union,
    edge_subgraph,
    empty,
    enumerate_classes,
    girth,
    hom_inj_count,
    is_isomorphic,
    multiple,
    parse_graph,
    path,
    relabel,
    star,
    strip_isolated,
    t_inj,
)
from tests import oracles
from tests.strategies import graphs

C5 = cycle(5)
K3K2 = parse_graph("K3+K2")


def shuffled(g, rng):
    perm = list(range(1, g.n + 1))
    rng.shuffle(perm)
    return relabel(g, perm)


class TestConstruction:
    def test_from_edges_and_edges(self):
        g = Graph.from_edges(4, [(1, 2), (3, 4)])
        assert g.edges == [(1, 2), (3, 4)]
        assert (g.v, g.e) == (4, 2)

    @pytest.mark.parametrize("edges", [[(1, 1)], [(0, 1)], [(1, 5)]])
    def test_bad_edges(self, edges):
        with pytest.raises(GraphError):
            Graph.from_edges(4, edges)

    def test_vertex_cap(self):
        with pytest.raises(GraphError):
            Graph(11, 0)

    def test_parse_shorthands(self):
        assert parse_graph("K3+K2") == disjoint_union(complete(3), complete(2))
        assert parse_graph("2*C3").e == 6
        assert parse_graph("P3") == path(3)
        assert parse_graph("E4") == empty(4)
        assert parse_graph("S3") == star(3)
        assert parse_graph({"n": 3, "edges": [[1, 2]]}) == Graph.from_edges(3, [(1, 2)])

    @pytest.mark.parametrize("bad", ["Q4", "K", {"edges": []}, {"n": 3, "edges": [[2, 1]]}, 3.0])
    def test_parse_errors(self, bad):
        with pytest.raises(ParseError):
            parse_graph(bad)

    def test_json_roundtrip(self):
        assert parse_graph(K3K2.to_json()) == K3K2


class TestCanonical:
    def test_c5_relabelling(self):
        other = Graph.from_edges(5, [(1, 3), (3, 5), (5, 2), (2, 4), (4, 1)])
        assert canonical_form(C5) == canonical_form(other)

    def test_k5_fixed(self):
        assert canonical_form(complete(5)) == complete(5)

    def test_path_relabel(self):
        a = Graph.from_edges(3, [(1, 2), (2, 3)])
        b = Graph.from_edges(3, [(2, 1), (1, 3)])
        assert canonical_form(a) == canonical_form(b)

    def test_random_relabellings_agree(self, backend):
        rng = random.Random(7)
        for _ in range(200):
            n = rng.randint(2, 7)
            g = Graph(n, rng.getrandbits(n * (n - 1) // 2))
            assert canonical_form(g) == canonical_form(shuffled(g, rng))

    def test_different_degree_sequences_differ(self, backend):
        rng = random.Random(8)
        checked = 0
        while checked < 200:
            n = rng.randint(2, 7)
            g = Graph(n, rng.getrandbits(n * (n - 1) // 2))
            h = Graph(n, rng.getrandbits(n * (n - 1) // 2))
            if sorted(g.degree(x) for x in range(1, n + 1)) == sorted(h.degree(x) for x in range(1, n + 1)):
                continue
            assert canonical_form(g) != canonical_form(h)
            checked += 1

    @settings(max_examples=50, deadline=None)
    @given(graphs(max_n=5), graphs(max_n=5))
    def test_isomorphism_matches_brute_force(self, g, h):
        if g.n != h.n:
            return
        assert is_isomorphic(g, h) == oracles.isomorphic(g.n, g.edges, h.edges)

    def test_canonical_is_minimal_relabelling(self):
        rng = random.Random(3)
        for _ in range(30):
            g = Graph(5, rng.getrandbits(10))
            from itertools import permutations

            best = min(relabel(g, p).mask for p in permutations(range(1, 6)))
            assert canonical_form(g).mask == best


class TestAutomorphisms:
    @pytest.mark.parametrize("g, expected", [(complete(5), 120), (C5, 10), (K3K2, 12)])
    def test_anchors(self, g, expected):
        assert aut_count(g) == expected

    @settings(max_examples=50, deadline=None)
    @given(graphs(max_n=6))
    def test_matches_brute_force(self, g):
        assert aut_count(g) == oracles.automorphisms(g.n, g.edges)

    def test_backends_agree(self, backend):
        assert aut_count(K3K2) == 12
        assert aut_count(Graph(7, 0b1011001110)) == oracles.automorphisms(7, Graph(7, 0b1011001110).edges)


class TestEnumeration:
    @pytest.mark.parametrize("n, count", [(1, 1), (2, 2), (3, 4), (4, 11), (5, 34), (6, 156)])
    def test_counts(self, n, count):
        assert len(enumerate_classes(n)) == count

    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_counts_match_oracle(self, n):
        assert len(enumerate_classes(n)) == oracles.class_count(n)

    @pytest.mark.parametrize("n", range(1, 7))
    def test_orbit_sum(self, n):
        table = enumerate_classes(n)
        assert sum(factorial(n) // aut for _, aut in table) == 2 ** (n * (n - 1) // 2)

    def test_ordered_and_distinct(self):
        table = enumerate_classes(5)
        masks = [g.mask for g in table.graphs()]
        assert masks == sorted(set(masks))
        assert all(canonical_form(g) == g for g in table.graphs())
        assert table.position(C5) == table.index[canonical_form(C5).mask]

    def test_out_of_range(self):
        with pytest.raises(GraphError):
            enumerate_classes(0)
        with pytest.raises(GraphError):
            enumerate_classes(8)

    @pytest.mark.parametrize("n", range(1, 7))
    def test_orbit_sweep_backends(self, n, backend):
        sweep = _backend.orbit_sweep(n)
        assert sum(size for _, size in sweep) == 2 ** (n * (n - 1) // 2)
        assert [m for m, _ in sweep] == [g.mask for g in enumerate_classes(n).graphs()]


class TestStructure:
    def test_complement(self):
        assert complement(complete(5)) == empty(5)
        assert is_isomorphic(complement(C5), C5)
        assert complement(empty(3)) == complete(3)

    @settings(max_examples=50, deadline=None)
    @given(graphs(max_n=6))
    def test_complement_involution(self, g):
        assert complement(complement(g)) == g

    def test_disjoint_union(self):
        m = disjoint_union(complete(2), complete(2))
        assert m.edges == [(1, 2), (3, 4)]
        assert K3K2.edges == [(1, 2), (1, 3), (2, 3), (4, 5)]
        two = multiple(complete(3), 2)
        assert (two.n, two.e, cycle_count(two, 3)) == (6, 6, 2)
        with pytest.raises(GraphError):
            disjoint_union(complete(6), complete(5))

    def test_edge_subgraph(self):
        assert edge_subgraph(complete(3), []) == empty(3)
        one = edge_subgraph(cycle(4), [(1, 2)])
        assert (one.n, one.e) == (4, 1)
        tri = edge_subgraph(complete(4), [(1, 2), (1, 3), (2, 3)])
        assert strip_isolated(tri) == complete(3) and tri.n == 4
        with pytest.raises(GraphError):
            edge_subgraph(cycle(4), [(1, 3)])

    def test_strip_isolated(self):
        g = Graph.from_edges(5, [(2, 4)])
        assert strip_isolated(g) == complete(2)
        assert strip_isolated(complete(4)) == complete(4)
        matching = edge_subgraph(C5, [(1, 2), (3, 4)])
        assert is_isomorphic(strip_isolated(matching), parse_graph("K2+K2"))
        assert strip_isolated(empty(3)).n == 0

    def test_girth_and_cycles(self):
        assert girth(C5) == 5
        assert girth(star(4)) == math.inf
        assert girth(complete(4)) == 3
        assert cycle_count(complete(4), 3) == 4
        assert cycle_count(C5, 5) == 1
        assert cycle_count(C5, 3) == 0
        with pytest.raises(GraphError):
            cycle_count(C5, 2)

    @settings(max_examples=50, deadline=None)
    @given(graphs(max_n=6))
    def test_girth_consistency(self, g):
        k = girth(g)
        if k != math.inf:
            assert cycle_count(g, k) >= 1
            assert all(cycle_count(g, j) == 0 for j in range(3, k))

    def test_cycle_count_brute(self):
        # K5 has 10 triangles, 15 four-cycles and 12 five-cycles
        assert [cycle_count(complete(5), k) for k in (3, 4, 5)] == [10, 15, 12]

    def test_contains_k4(self):
        assert contains_k4(complete(4))
        assert not contains_k4(C5)
        k5e = Graph(5, complete(5).mask & ~1)
        assert contains_k4(k5e)


class TestInjective:
    def test_anchors(self, backend):
        assert hom_inj_count(complete(2), complete(2)) == 2
        assert hom_inj_count(C5, C5) == 10
        assert hom_inj_count(cycle(4), complete(5)) == 120
        assert t_inj(cycle(4), complete(5)) == 1
        assert t_inj(C5, empty(5)) == 0
        assert t_inj(C5, C5) == Fraction(1, 12)
        with pytest.raises(GraphError):
            t_inj(C5, complete(4))

    @settings(max_examples=50, deadline=None)
    @given(graphs(max_n=4), graphs(min_n=4, max_n=5))
    def test_matches_brute_force(self, h, j):
        assert hom_inj_count(h, j) == oracles.hom_inj(h.n, h.edges, j.n, j.edges)
        t = t_inj(h, j)
        assert 0 <= t <= 1
        assert hom_inj_count(h, j) % aut_count(h) == 0

    @settings(max_examples=50, deadline=None)
    @given(graphs(max_n=5))
    def test_complete_target(self, h):
        assert t_inj(h, complete(h.n)) == 1
