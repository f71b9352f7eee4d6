import itertools
import random
from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from graphfair.checkers import (
    Criterion,
    check,
    envy_up_to,
    envy_up_to_bruteforce,
    is_connected_allocation,
    is_ef,
    is_efk,
    is_efx,
    is_ips_allocation,
    mms_ratio_report,
)
from graphfair.graph import cycle_graph, path_graph
from graphfair.instances import catalog, random_tabulated
from graphfair.mms import allocate_path_ips, bipartition_biconnected, bipartition_cut_vertex
from graphfair.oracles import exact_gmms, exact_mms
from graphfair.valuation import AdditiveValuation, Allocation, Instance, TabulatedValuation


def A(*bundles):
    return Allocation(tuple(frozenset(b) for b in bundles))


class TestConnected:
    def test_singletons(self):
        assert is_connected_allocation(path_graph(3), A({0}, {1}, {2}))

    def test_split_ends(self):
        assert not is_connected_allocation(path_graph(3), A({0, 2}, {1}))


class TestEnvyUpTo:
    def test_remove_everything(self):
        u = AdditiveValuation((5, 5, 5))
        assert envy_up_to(u, set(), {0, 1, 2}, 3)

    def test_k2b_third_agent(self):
        # one unit right-side good against {v1, v3, v4}: 2 + 1 + 1 minus the best good is 2 > 1
        u = catalog("fig7_k2b", b=4).valuations[0]
        assert not envy_up_to(u, {2}, {0, 3, 4}, 1)

    @settings(max_examples=200)
    @given(st.lists(st.integers(0, 9), min_size=2, max_size=10), st.integers(0, 10**6), st.integers(0, 4))
    def test_fast_path_matches_enumeration(self, values, seed, k):
        u = AdditiveValuation(tuple(values))
        rng = random.Random(seed)
        owner = [rng.randrange(3) for _ in values]
        own = {g for g, o in enumerate(owner) if o == 0}
        other = {g for g, o in enumerate(owner) if o == 1}
        assert envy_up_to(u, own, other, k) == envy_up_to_bruteforce(u, own, other, k)


class TestEFX:
    def test_thm21_allocation(self):
        inst = catalog("thm21_efx", g=cycle_graph(4))
        # agent 0 holds only the 3; dropping the tiny good still leaves 2 + 2 > 3
        assert not is_efx(inst, A({1}, {0, 2, 3}))
        assert is_efk(inst, A({1}, {0, 2, 3}), 1)

    def test_zero_valuations_are_ef(self):
        inst = Instance.identical(path_graph(4), [0] * 4, 2)
        for split in range(5):
            assert is_ef(inst, A(range(split), range(split, 4)))

    @settings(max_examples=100)
    @given(st.integers(0, 10**6))
    def test_implication_chain(self, seed):
        rng = random.Random(seed)
        m, n = rng.randint(1, 6), rng.randint(1, 3)
        inst = Instance(n, path_graph(m), tuple(random_tabulated(m, seed + i, 4) for i in range(n)))
        alloc = A(*[{g for g in range(m) if g % n == i} for i in range(n)])
        chain = [is_ef(inst, alloc), is_efx(inst, alloc)] + [is_efk(inst, alloc, k) for k in range(1, m + 1)]
        for stronger, weaker in zip(chain, chain[1:]):
            assert not stronger or weaker
        assert chain[-1]


class TestMmsReport:
    def test_mms_witness_identical(self):
        inst = catalog("fig2_wheel")
        w = exact_mms(inst.valuations[0], 2)
        assert min(mms_ratio_report(inst, Allocation(w.partition))) >= 1

    def test_wheel_best_connected(self):
        inst = catalog("fig2_wheel")
        w = exact_gmms(inst.graph, inst.valuations[0], 2)
        assert min(mms_ratio_report(inst, Allocation(w.partition))) == Fraction(3, 4)

    def test_thm3_star(self):
        inst = catalog("thm3_cut", k=4)
        parts = bipartition_cut_vertex(inst.graph, inst.valuations[0])
        assert min(mms_ratio_report(inst, Allocation(parts))) == Fraction(1, 4)

    @settings(max_examples=50)
    @given(st.integers(0, 10**6))
    def test_proportional_implies_mms(self, seed):
        rng = random.Random(seed)
        m = rng.randint(1, 7)
        inst = Instance.additive_from(path_graph(m), [[rng.randint(0, 5) for _ in range(m)] for _ in range(2)])
        alloc = A(range(m // 2), range(m // 2, m))
        ratios = mms_ratio_report(inst, alloc)
        for i, u in enumerate(inst.valuations):
            if 2 * u.value(alloc.bundles[i]) >= u.total():
                assert ratios[i] >= 1


class TestIps:
    def test_path_allocator_outputs(self):
        inst = Instance.additive_from(path_graph(5), [[1, 2, 1, 0, 3], [2, 2, 2, 2, 2], [0, 0, 5, 1, 1]])
        alloc, _ = allocate_path_ips(inst)
        assert is_ips_allocation(inst, alloc)

    def test_empty_bundle_fails(self):
        inst = Instance.identical(path_graph(3), [1, 2, 1], 2)
        assert not is_ips_allocation(inst, A(set(), {0, 1, 2}))

    def test_fewer_goods_than_agents(self):
        inst = Instance.identical(path_graph(2), [1, 1], 3)
        for a in itertools.permutations([{0}, {1}, set()]):
            assert is_ips_allocation(inst, A(*a))


class TestCriterion:
    def test_parse(self):
        assert Criterion.parse("ef1") == Criterion("efk", k=1)
        assert Criterion.parse("efk:3") == Criterion("efk", k=3)
        assert Criterion.parse("mms:3/4") == Criterion("mms", alpha=Fraction(3, 4))
        assert str(Criterion.parse("efx")) == "efx"

    def test_check_witness(self):
        inst = catalog("fig2_wheel")
        parts = bipartition_biconnected(inst.graph, inst.valuations[0])
        alloc = Allocation(parts)
        assert check(inst, alloc, Criterion.parse("mms:3/4")).passed
        res = check(inst, alloc, Criterion.parse("mms"))
        assert not res.passed and "MMS" in res.witness
        assert check(inst, A(set(range(9)) - {3}, {3}), Criterion("connected")).passed
        res = check(inst, A({0, 2, 4, 6, 8}, {1, 3, 5, 7}), Criterion("connected"))
        assert res.witness == "bundle of agent 1 [1, 3, 5, 7] is not connected"

    def test_tabulated_agrees_with_additive(self):
        u = AdditiveValuation((3, 1, 4, 1, 5))
        t = TabulatedValuation.from_additive(u)
        for k in range(4):
            assert envy_up_to(u, {0}, {2, 3, 4}, k) == envy_up_to(t, {0}, {2, 3, 4}, k)
