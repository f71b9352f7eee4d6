import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from graphfair.checkers import is_connected_allocation, is_ef, is_efk
from graphfair.envy import (
    _smallest_cycle,
    double_round_robin,
    efk_two_allocate,
    ef1_two_on_bipolar,
    envy_cycle_bipartite,
    envy_graph,
    optimal_efk_two,
)
from graphfair.graph import (
    GraphError,
    block_tree,
    complete_bipartite_graph,
    cycle_graph,
    is_connected_subset,
    merge_vertices,
    bipolar_if_exists,
    path_graph,
    star_graph,
)
from graphfair.instances import efk_test_graphs, fig4_graph, random_additive, random_graph, random_tabulated
from graphfair.oracles import guaranteed_efk_bruteforce
from graphfair.valuation import AdditiveValuation, Instance

from .strategies import any_connected_graph


class TestEf1Bipolar:
    def test_two_goods(self):
        u = AdditiveValuation((1, 1))
        alloc = ef1_two_on_bipolar([0, 1], u, u)
        assert alloc.bundles == (frozenset({0}), frozenset({1}))

    def test_121(self):
        u = AdditiveValuation((1, 2, 1))
        inst = Instance(2, path_graph(3), (u, u))
        alloc = ef1_two_on_bipolar([0, 1, 2], u, u)
        assert is_efk(inst, alloc, 1) and is_connected_allocation(inst.graph, alloc)

    def test_c5(self):
        g = cycle_graph(5)
        u = AdditiveValuation((1,) * 5)
        alloc = ef1_two_on_bipolar(bipolar_if_exists(g), u, u)
        assert sorted(len(b) for b in alloc.bundles) == [2, 3]

    def test_single_good(self):
        u = AdditiveValuation((4,))
        alloc = ef1_two_on_bipolar([0], u, u)
        assert is_efk(Instance(2, path_graph(1), (u, u)), alloc, 1)


class TestOptimalEfk:
    @pytest.mark.parametrize("g", [path_graph(5), cycle_graph(6), complete_bipartite_graph(2, 3)])
    def test_path_block_tree(self, g):
        assert block_tree(g).is_path()
        assert optimal_efk_two(g).k_star == 1

    @pytest.mark.parametrize("b", [3, 4, 5, 6])
    def test_star(self, b):
        assert optimal_efk_two(star_graph(b)).k_star == b - 1

    def test_fig4(self):
        plan = optimal_efk_two(fig4_graph())
        assert plan.k_star == guaranteed_efk_bruteforce(fig4_graph()) == 2

    @pytest.mark.parametrize("name, g", efk_test_graphs(), ids=lambda x: x if isinstance(x, str) else "")
    def test_matches_bruteforce(self, name, g):
        assert optimal_efk_two(g).k_star == guaranteed_efk_bruteforce(g)

    @settings(max_examples=60)
    @given(any_connected_graph(1, 9))
    def test_plan_invariants(self, g):
        plan = optimal_efk_two(g)
        assert frozenset().union(*plan.merge_sets) == frozenset(g.vertices)
        assert sum(len(s) for s in plan.merge_sets) == g.m
        for s in plan.merge_sets:
            assert is_connected_subset(g, s) and len(s) <= plan.k_star
        merged, _ = merge_vertices(g, plan.merge_sets)
        assert bipolar_if_exists(merged) is not None


class TestEfkAllocate:
    def test_path(self):
        inst = Instance.identical(path_graph(4), [1, 3, 2, 1], 2)
        alloc, k = efk_two_allocate(inst)
        assert k == 1 and is_efk(inst, alloc, 1)

    def test_k13(self):
        inst = Instance.identical(star_graph(3), [1] * 4, 2)
        alloc, k = efk_two_allocate(inst)
        assert k == 2 and is_efk(inst, alloc, 2)
        assert sorted(len(b) for b in alloc.bundles) == [1, 3]

    def test_needs_two(self):
        with pytest.raises(ValueError):
            efk_two_allocate(Instance.identical(path_graph(3), [1] * 3, 3))

    @settings(max_examples=60, deadline=None)
    @given(any_connected_graph(1, 8), st.integers(0, 10**6))
    def test_sweep(self, g, seed):
        inst = Instance(2, g, (random_tabulated(g.m, seed), random_tabulated(g.m, seed + 1)))
        alloc, k = efk_two_allocate(inst)
        assert is_connected_allocation(g, alloc)
        assert is_efk(inst, alloc, k)


def _bipartite_instance(a, b, n, seed, tabulated):
    g = complete_bipartite_graph(a, b)
    make = random_tabulated if tabulated else random_additive
    return Instance(n, g, tuple(make(a + b, seed + i, 5) for i in range(n)))


class TestEnvyCycle:
    def test_k33_ones(self):
        inst = Instance.identical(complete_bipartite_graph(3, 3), [1] * 6, 3)
        alloc = envy_cycle_bipartite(inst)
        assert [len(b) for b in alloc.bundles] == [2, 2, 2]
        assert is_efk(inst, alloc, 1)

    def test_zero(self):
        inst = Instance.identical(complete_bipartite_graph(2, 2), [0] * 4, 2)
        assert is_ef(inst, envy_cycle_bipartite(inst))

    def test_rejects_small_side(self):
        with pytest.raises(GraphError):
            envy_cycle_bipartite(Instance.identical(complete_bipartite_graph(2, 4), [1] * 6, 3))

    def test_smallest_cycle(self):
        assert _smallest_cycle({0: [2], 1: [0], 2: [1]}) == [0, 2, 1]
        assert _smallest_cycle({0: [1], 1: [], 2: [0]}) is None

    @settings(max_examples=50, deadline=None)
    @given(st.integers(2, 4), st.integers(0, 2), st.integers(0, 2), st.integers(0, 10**6))
    def test_trace_invariants(self, n, da, db, seed):
        a, b = n + da, n + db
        inst = _bipartite_instance(a, b, n, seed, tabulated=True)
        left = frozenset(next(side for side in inst.graph.bipartite_sides() if 0 in side))
        trace = []
        alloc = envy_cycle_bipartite(inst, trace)
        assert len(trace) == a + b - n
        for bundles, agent, _good in trace:
            assert _smallest_cycle(envy_graph(inst, bundles)) is None
            assert not any(agent in t for t in envy_graph(inst, bundles).values())
            for bundle in bundles:
                assert len(bundle & left) < 2 or bundle - left
        assert is_connected_allocation(inst.graph, alloc)
        assert is_efk(inst, alloc, 1)


class TestDoubleRoundRobin:
    def test_k22_trace(self):
        g = complete_bipartite_graph(2, 2)
        sides = g.bipartite_sides()
        left, right = sorted(sides[0]), sorted(sides[1])
        if 0 not in left:
            left, right = right, left
        values = [0] * 4
        for v, x in zip(left, [3, 1]):
            values[v] = x
        for v, x in zip(right, [1, 3]):
            values[v] = x
        inst = Instance.identical(g, values, 2)
        alloc = double_round_robin(inst)
        assert alloc.bundles[0] == frozenset({left[0], right[0]})
        assert alloc.bundles[1] == frozenset({left[1], right[1]})
        assert is_efk(inst, alloc, 1)

    def test_identical(self):
        inst = Instance.identical(complete_bipartite_graph(3, 3), [5, 1, 2, 2, 4, 1], 3)
        alloc = double_round_robin(inst)
        assert all(len(b) == 2 for b in alloc.bundles) and is_efk(inst, alloc, 1)

    def test_zero(self):
        inst = Instance.identical(complete_bipartite_graph(2, 3), [0] * 5, 2)
        assert is_ef(inst, double_round_robin(inst))

    @settings(max_examples=50, deadline=None)
    @given(st.integers(2, 4), st.integers(0, 3), st.integers(0, 3), st.integers(0, 10**6))
    def test_sweep(self, n, da, db, seed):
        inst = _bipartite_instance(n + da, n + db, n, seed, tabulated=False)
        alloc = double_round_robin(inst)
        left, right = inst.graph.bipartite_sides()
        for b in alloc.bundles:
            assert b & left and b & right
        assert is_connected_allocation(inst.graph, alloc)
        assert is_efk(inst, alloc, 1)


def test_random_graph_kinds_feed_efk():
    g = random_graph("biconnected", 7, 7)
    assert optimal_efk_two(g).k_star == 1
