from fractions import Fraction

import networkx as nx
import pytest
from hypothesis import given, strategies as st

from cubedual.coarse_geometry import (Graph, bottleneck_delta, circuits_through, geometry_report,
                                      hyperbolicity_bound, hyperbolicity_delta)
from cubedual.dual_complex import build_dual
from cubedual.errors import InputError, ResourceError

from gen import crossing, random_wallspace
from oracles import bottleneck_bruteforce, circuits_bruteforce, four_point_bruteforce


def cycle(n):
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def tree(seed, n=12):
    return Graph.from_networkx(nx.random_labeled_tree(n, seed=seed))


@pytest.mark.parametrize("seed", range(5))
def test_trees_are_zero(seed):
    t = tree(seed)
    assert bottleneck_delta(t) == 0
    assert hyperbolicity_delta(t) == 0
    for e in t.edges:
        assert circuits_through(t, e, 5) == 0


def test_frozen_values():
    # frozen from the brute-force oracles
    assert bottleneck_delta(cycle(4)) == 1
    assert hyperbolicity_delta(cycle(6)) == 1
    assert hyperbolicity_delta(cycle(4)) == 1
    assert hyperbolicity_delta(cycle(5)) == Fraction(1, 2)
    cube = build_dual(crossing(3)).graph
    assert hyperbolicity_delta(cube) == 1 == Fraction(four_point_bruteforce(cube), 2)
    assert circuits_through(cycle(4), (0, 1), 4) == 1
    square = build_dual(crossing(2)).graph
    assert circuits_through(square, square.edges[0], 4) == 1


def test_oracles_agree_on_frozen_values():
    assert bottleneck_bruteforce(cycle(4)) == 1
    assert four_point_bruteforce(cycle(6)) == 2


@given(st.integers(0, 10_000))
def test_bottleneck_matches_definition(seed):
    X = build_dual(random_wallspace(seed, max_points=7, max_walls=5, cores=True))
    assert bottleneck_delta(X.graph) == bottleneck_bruteforce(X.graph)


@given(st.integers(3, 9), st.integers(0, 10_000))
def test_bottleneck_on_random_graphs(n, seed):
    G = nx.connected_watts_strogatz_graph(n + 3, 2, 0.4, seed=seed)
    g = Graph.from_networkx(G)
    assert bottleneck_delta(g) == bottleneck_bruteforce(g)


@given(st.integers(0, 10_000))
def test_four_point_matches_exhaustive_scan(seed):
    G = nx.connected_watts_strogatz_graph(10, 3, 0.5, seed=seed)
    g = Graph.from_networkx(G)
    assert 2 * hyperbolicity_delta(g) == four_point_bruteforce(g)


@given(st.integers(0, 10_000))
def test_hyperbolicity_within_bottleneck_bound(seed):
    X = build_dual(random_wallspace(seed, max_points=9, max_walls=7, cores=True))
    assert hyperbolicity_delta(X.graph) <= hyperbolicity_bound(bottleneck_delta(X.graph))


@given(st.integers(0, 10_000), st.integers(3, 8))
def test_circuits_match_enumeration(seed, r):
    G = nx.connected_watts_strogatz_graph(9, 4, 0.3, seed=seed)
    g = Graph.from_networkx(G)
    for e in g.edges[:4]:
        assert circuits_through(g, e, r) == circuits_bruteforce(g, e, r)


def test_relabeling_invariance():
    G = nx.connected_watts_strogatz_graph(12, 4, 0.3, seed=4)
    g = Graph.from_networkx(G)
    perm = {v: (5 * v + 3) % 12 for v in range(12)}
    h = Graph(12, [(perm[u], perm[v]) for u, v in g.edges])
    assert bottleneck_delta(g) == bottleneck_delta(h)
    assert hyperbolicity_delta(g) == hyperbolicity_delta(h)


def test_errors():
    with pytest.raises(InputError):
        bottleneck_delta(Graph(3, [(0, 1)]))
    with pytest.raises(InputError):
        circuits_through(cycle(4), (0, 1), 2)
    with pytest.raises(ResourceError):
        circuits_through(cycle(4), (0, 1), 13)
    with pytest.raises(InputError):
        circuits_through(cycle(4), (0, 2), 4)
    with pytest.raises(ResourceError):
        bottleneck_delta(cycle(6), max_vertices=5)


def test_report_fields():
    rep = geometry_report(cycle(6), "c6")
    assert rep["bottleneck_delta"] == "1" and rep["hyperbolicity_delta"] == "1"
    assert rep["within_bound"] and rep["circuit_profile"]["6"] == 1
