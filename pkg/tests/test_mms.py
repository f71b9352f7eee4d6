import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from graphfair.caps import CapExceeded
from graphfair.checkers import is_connected_allocation, is_ips_allocation, mms_ratio_report
from graphfair.graph import (
    GraphError,
    complete_graph,
    cycle_graph,
    is_connected_subset,
    max_components_single_deletion,
    path_graph,
    star_graph,
    vertex_connectivity,
)
from graphfair.instances import catalog, random_additive, random_graph
from graphfair.mms import (
    allocate_any_graph,
    allocate_path_ips,
    allocate_star,
    allocate_tree_gmms,
    bipartition_biconnected,
    bipartition_cut_vertex,
    cut_and_choose,
    ips_threshold,
    is_ips_bundle,
    subset_window,
)
from graphfair.oracles import exact_gmms, exact_mms
from graphfair.valuation import AdditiveValuation, Instance


def _min_part(u, parts):
    return min(u.value(p) for p in parts)


class TestIps:
    @pytest.mark.parametrize("n, m, expected", [
        (3, 5, Fraction(1, 3)), (4, 5, Fraction(1, 2)), (5, 3, 0), (1, 1, 1), (2, 2, 1),
    ])
    def test_threshold(self, n, m, expected):
        assert ips_threshold(n, m) == expected

    def test_whole_set(self):
        u = AdditiveValuation((1, 2, 1))
        cert = is_ips_bundle(u, {0, 1, 2}, 2, 3)
        assert cert is not None and cert.removed == frozenset()

    def test_remove_middle(self):
        u = AdditiveValuation((1, 2, 1))
        cert = is_ips_bundle(u, {0}, 2, 3)
        assert cert.removed == frozenset({1}) and cert.threshold == Fraction(1, 2)

    def test_empty(self):
        assert is_ips_bundle(AdditiveValuation((1, 2, 1)), set(), 2, 3) is None

    @settings(max_examples=100)
    @given(st.lists(st.integers(0, 6), min_size=1, max_size=7), st.integers(1, 4), st.data())
    def test_greedy_removal_is_optimal(self, values, n, data):
        u = AdditiveValuation(tuple(values))
        m = len(values)
        a = data.draw(st.sets(st.integers(0, m - 1)))
        t = ips_threshold(n, m)
        outside = [g for g in range(m) if g not in a]
        any_b = any(
            u.value(a) >= t * (u.total() - u.value(b))
            for r in range(min(n - 1, len(outside)) + 1)
            for b in itertools.combinations(outside, r)
        )
        assert (is_ips_bundle(u, a, n, m) is not None) == any_b


class TestPathIps:
    def test_two_agents(self):
        inst = Instance.identical(path_graph(3), [1, 2, 1], 2)
        alloc, certs = allocate_path_ips(inst)
        assert is_ips_allocation(inst, alloc) and all(certs)

    def test_single_agent(self):
        inst = Instance.identical(path_graph(4), [1, 2, 3, 4], 1)
        alloc, _ = allocate_path_ips(inst)
        assert alloc.bundles == (frozenset(range(4)),)

    def test_few_goods(self):
        inst = Instance.identical(path_graph(2), [3, 1], 4)
        alloc, certs = allocate_path_ips(inst)
        assert is_ips_allocation(inst, alloc) and all(c is not None for c in certs)

    def test_rejects_cycle(self):
        with pytest.raises(GraphError):
            allocate_path_ips(Instance.identical(cycle_graph(4), [1] * 4, 2))

    @settings(max_examples=80)
    @given(st.integers(1, 10), st.integers(1, 5), st.integers(0, 10**6))
    def test_random(self, m, n, seed):
        g = random_graph("path", m, seed)
        inst = Instance(n, g, tuple(random_additive(m, seed + i) for i in range(n)))
        alloc, certs = allocate_path_ips(inst)
        assert is_connected_allocation(g, alloc)
        assert all(c is not None and c.agent == i for i, c in enumerate(certs))
        for c, b in zip(certs, alloc.bundles):
            assert len(c.removed) <= n - 1 and not c.removed & b


class TestStar:
    def test_lower_bound_instance(self):
        inst = catalog("thm12_star", n=3, m=7)
        ratios = mms_ratio_report(inst, allocate_star(inst))
        assert min(ratios) == Fraction(1, 5)

    def test_single_edge(self):
        inst = Instance.identical(star_graph(1), [1, 1], 2)
        assert allocate_star(inst).bundles == (frozenset({1}), frozenset({0}))

    @settings(max_examples=40)
    @given(st.integers(2, 3), st.integers(0, 4), st.integers(0, 10**6))
    def test_ratio(self, n, extra, seed):
        m = n + extra
        inst = Instance(n, star_graph(m - 1), tuple(random_additive(m, seed + i) for i in range(n)))
        alloc = allocate_star(inst)
        assert is_connected_allocation(inst.graph, alloc)
        assert min(mms_ratio_report(inst, alloc)) >= Fraction(1, m - n + 1)

    def test_rejects_path(self):
        with pytest.raises(GraphError):
            allocate_star(Instance.identical(path_graph(4), [1] * 4, 2))


class TestCutVertex:
    @pytest.mark.parametrize("k", [2, 3, 5])
    def test_star_tight(self, k):
        inst = catalog("thm3_cut", k=k)
        u = inst.valuations[0]
        parts = bipartition_cut_vertex(inst.graph, u)
        assert _min_part(u, parts) == 1 == exact_mms(u, 2).value / k

    def test_edge(self):
        parts = bipartition_cut_vertex(path_graph(2), AdditiveValuation((1, 1)))
        assert set(parts) == {frozenset({0}), frozenset({1})}

    def test_rejects_biconnected(self):
        with pytest.raises(GraphError):
            bipartition_cut_vertex(cycle_graph(4), AdditiveValuation((1,) * 4))

    @settings(max_examples=80)
    @given(st.sampled_from(["tree", "connected"]), st.integers(2, 10), st.integers(0, 10**6))
    def test_bound(self, kind, m, seed):
        g = random_graph(kind, m, seed)
        if vertex_connectivity(g) != 1:
            return
        u = random_additive(m, seed)
        parts = bipartition_cut_vertex(g, u)
        k, _ = max_components_single_deletion(g)
        assert all(is_connected_subset(g, p) and p for p in parts)
        assert parts[0] | parts[1] == frozenset(range(m))
        assert k * _min_part(u, parts) >= exact_mms(u, 2).value


class TestBiconnected:
    def test_wheel(self):
        inst = catalog("fig2_wheel")
        assert _min_part(inst.valuations[0], bipartition_biconnected(inst.graph, inst.valuations[0])) == 3

    def test_c4_ones(self):
        assert _min_part(AdditiveValuation((1,) * 4), bipartition_biconnected(cycle_graph(4), AdditiveValuation((1,) * 4))) == 2

    def test_rejects_tree(self):
        with pytest.raises(GraphError):
            bipartition_biconnected(path_graph(3), AdditiveValuation((1,) * 3))

    @settings(max_examples=60, deadline=None)
    @given(st.integers(3, 9), st.integers(0, 10**6))
    def test_bound(self, m, seed):
        g = random_graph("biconnected", m, seed)
        u = random_additive(m, seed)
        parts = bipartition_biconnected(g, u)
        assert all(is_connected_subset(g, p) for p in parts)
        assert 4 * _min_part(u, parts) >= 3 * exact_mms(u, 2).value


class TestCutAndChoose:
    def test_tie_goes_to_first(self):
        parts = (frozenset({0}), frozenset({1}))
        assert cut_and_choose(parts, AdditiveValuation((1, 1))).bundles[1] == frozenset({0})

    def test_wheel_identical(self):
        inst = catalog("fig2_wheel")
        parts = bipartition_biconnected(inst.graph, inst.valuations[0])
        alloc = cut_and_choose(parts, inst.valuations[1])
        assert all(u.value(b) >= 3 for u, b in zip(inst.valuations, alloc.bundles))

    @settings(max_examples=50)
    @given(st.lists(st.integers(0, 5), min_size=2, max_size=8), st.integers(1, 7))
    def test_chooser_gets_half(self, values, cut):
        u = AdditiveValuation(tuple(values))
        m = len(values)
        cut = min(cut, m - 1)
        alloc = cut_and_choose((frozenset(range(cut)), frozenset(range(cut, m))), u)
        assert 2 * u.value(alloc.bundles[1]) >= u.total()


class TestTrees:
    @settings(max_examples=60, deadline=None)
    @given(st.integers(1, 9), st.integers(1, 3), st.integers(0, 10**6))
    def test_each_gets_own_gmms(self, m, n, seed):
        tree = random_graph("tree", m, seed)
        inst = Instance(n, tree, tuple(random_additive(m, seed + i) for i in range(n)))
        alloc = allocate_tree_gmms(inst)
        assert is_connected_allocation(tree, alloc)
        for u, b in zip(inst.valuations, alloc.bundles):
            assert u.value(b) >= exact_gmms(tree, u, n).value

    def test_identical(self):
        tree = random_graph("tree", 8, 3)
        u = random_additive(8, 4)
        inst = Instance(3, tree, (u, u, u))
        alloc = allocate_tree_gmms(inst)
        assert min(u.value(b) for b in alloc.bundles) == exact_gmms(tree, u, 3).value

    def test_cap(self, monkeypatch):
        monkeypatch.setenv("GRAPHFAIR_CAP", "tree_assignments=10")
        inst = Instance.identical(path_graph(6), [1] * 6, 3)
        with pytest.raises(CapExceeded):
            allocate_tree_gmms(inst)


class TestAnyGraph:
    def test_wheel(self):
        inst = catalog("fig2_wheel")
        alloc = allocate_any_graph(inst)
        assert is_connected_allocation(inst.graph, alloc)
        assert min(u.value(b) for u, b in zip(inst.valuations, alloc.bundles)) >= 3

    def test_fewer_goods(self):
        inst = Instance.identical(complete_graph(2), [1, 1], 3)
        alloc = allocate_any_graph(inst)
        assert sum(len(b) for b in alloc.bundles) == 2

    @settings(max_examples=25, deadline=None)
    @given(st.integers(3, 8), st.integers(0, 10**6))
    def test_bound(self, m, seed):
        g = random_graph("connected", m, seed)
        inst = Instance(3, g, tuple(random_additive(m, seed + i) for i in range(3)))
        alloc = allocate_any_graph(inst)
        assert is_connected_allocation(g, alloc)
        assert min(mms_ratio_report(inst, alloc)) >= Fraction(1, m - 2)


class TestSubsetWindow:
    def test_base(self):
        assert subset_window([2], 0) == frozenset({0})

    def test_example(self):
        j = subset_window([1, 1, 3], 2)
        assert 2 <= sum([1, 1, 3][i] for i in j) <= 4

    def test_empty(self):
        assert subset_window([1, 1], 0) == frozenset()

    def test_preconditions(self):
        with pytest.raises(ValueError):
            subset_window([Fraction(1, 2), 3], 0)
        with pytest.raises(ValueError):
            subset_window([1, 1], 1)

    @settings(max_examples=200)
    @given(st.data())
    def test_window(self, data):
        k = data.draw(st.integers(1, 12))
        # each x_j >= 1 and the total at most 2k: spread the k spare units as fractions
        extra = data.draw(st.lists(st.fractions(0, 3, max_denominator=4), min_size=k, max_size=k))
        x = [1 + e for e in extra]
        s = sum(x)
        if s > 2 * k:
            scale = Fraction(k, sum(extra))
            x = [1 + e * scale for e in extra]
            s = sum(x)
        if s < 2:
            x[0] += 2 - s
            s = 2
        r = (s - 2) * data.draw(st.fractions(0, 1, max_denominator=6))
        j = subset_window(x, r)
        assert r <= sum(x[i] for i in j) <= r + 2
        # exhaustive enumeration agrees that a window subset exists at all
        assert any(r <= sum(c) <= r + 2 for t in range(k + 1) for c in itertools.combinations(x, t))
