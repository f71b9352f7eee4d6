from fractions import Fraction

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from graphfair.graph import GraphError, block_tree, complete_graph, cycle_graph, path_graph, vertex_connectivity
from graphfair.instances import (
    CATALOG,
    catalog,
    efk_test_graphs,
    l5_graph,
    random_additive,
    random_graph,
    random_tabulated,
    small_connected_graphs,
)
from graphfair.oracles import exact_gmms, exact_mms, poc_ratio
from graphfair.valuation import validate


@pytest.mark.parametrize("name", sorted(CATALOG))
def test_catalog_defaults_validate(name):
    assert validate(catalog(name)) == []


def test_wheel_as_drawn():
    # the rim values read cyclically off the drawing; the hub is worth nothing
    inst = catalog("fig2_wheel")
    g = inst.graph
    assert g.m == 9 and g.degree(8) == 8
    assert inst.valuations[0].values == tuple(Fraction(x) for x in (3, 2, 1, 0, 0, 0, 0, 2, 0))
    assert inst.valuations[0] == inst.valuations[1]


def test_star_catalog():
    inst = catalog("thm12_star", n=2, m=4)
    assert inst.graph.star_center() == 0
    assert inst.valuations[0].values == (3, 1, 1, 1)


def test_k2b_catalog():
    inst = catalog("fig7_k2b", b=5)
    g = inst.graph
    assert sorted(map(len, g.bipartite_sides())) == [2, 5]
    assert inst.valuations[0].values == (2, 2, 1, 1, 1, 1, 0)
    assert inst.n == 3


def test_l5():
    inst = catalog("fig3_L5")
    assert inst.graph == l5_graph()
    assert vertex_connectivity(inst.graph) == 3
    u = inst.valuations[0]
    assert exact_mms(u, 2).value == 4 and exact_gmms(inst.graph, u, 2).value == 3


@pytest.mark.parametrize("m", [4, 6, 8])
def test_thm9_ratio(m):
    inst = catalog("thm9_matching", m=m)
    assert poc_ratio(inst.graph, inst.valuations[0], 2) == Fraction(2 * m - 5, 2 * m - 4)


def test_pairs_and_linked_ratios():
    for name in ("prop7_pairs", "prop9_linked"):
        inst = catalog(name)
        assert poc_ratio(inst.graph, inst.valuations[0], 2) == Fraction(3, 4)


def test_thm21_uses_lowest_missing_edge():
    inst = catalog("thm21_efx", g=cycle_graph(5))
    u = inst.valuations[0]
    assert u.values[0] == u.values[2] == 2
    assert min(u.values) == Fraction(1, 10)


@pytest.mark.parametrize("name, params", [
    ("nope", {}),
    ("thm12_star", {"n": 5, "m": 3}),
    ("fig7_k2b", {"b": 3}),
    ("thm21_efx", {"g": complete_graph(4)}),
])
def test_bad_params(name, params):
    with pytest.raises((KeyError, ValueError, GraphError)):
        catalog(name, **params)


class TestRandomGraph:
    def test_single_vertex_tree(self):
        assert random_graph("tree", 1, 0).m == 1

    def test_biconnected_seed7(self):
        assert vertex_connectivity(random_graph("biconnected", 8, 7)) >= 2

    def test_path(self):
        g = random_graph("path", 5, 3)
        assert len(g.edges) == 4 and g.is_path()

    def test_bad_size(self):
        with pytest.raises(ValueError):
            random_graph("biconnected", 2, 0)

    def test_deterministic(self):
        assert random_graph("connected", 9, 42) == random_graph("connected", 9, 42)
        assert random_additive(6, 1) == random_additive(6, 1)

    @settings(max_examples=100)
    @given(st.sampled_from(["tree", "path", "star", "connected", "biconnected"]), st.integers(3, 12),
           st.integers(0, 10**6))
    def test_kind_predicates(self, kind, m, seed):
        g = random_graph(kind, m, seed)
        assert g.m == m and g.is_connected()
        check = {
            "tree": g.is_tree(),
            "path": g.is_path(),
            "star": g.star_center() is not None,
            "connected": True,
            "biconnected": vertex_connectivity(g) >= 2,
        }
        assert check[kind]

    def test_complete_bipartite(self):
        g = random_graph("complete_bipartite", (2, 3), 0)
        assert sorted(map(len, g.bipartite_sides())) == [2, 3] and len(g.edges) == 6


@settings(max_examples=50)
@given(st.integers(1, 6), st.integers(0, 10**6))
def test_random_tabulated_monotone(m, seed):
    u = random_tabulated(m, seed)
    for mask in range(1 << m):
        for g in range(m):
            assert u.value({x for x in range(m) if mask >> x & 1}) <= u.value(
                {x for x in range(m) if (mask | 1 << g) >> x & 1})


def test_efk_test_set():
    graphs = efk_test_graphs()
    assert len(graphs) >= 30
    assert all(g.is_connected() and g.m <= 7 for _, g in graphs)
    assert any(not block_tree(g).is_path() for _, g in graphs)


def test_small_graphs_distinct():
    graphs = small_connected_graphs(5)
    nxs = [g.to_networkx() for g in graphs]
    assert all(nx.is_connected(h) for h in nxs)
    assert not any(nx.is_isomorphic(a, b) for i, a in enumerate(nxs) for b in nxs[i + 1:])
    # connected graphs on 3, 4 and 5 vertices: 2 + 6 + 21
    assert len(graphs) == 29
    assert any(nx.is_isomorphic(h, path_graph(3).to_networkx()) for h in nxs)
