"""Three agents: where connected EF1 breaks, and where it survives.

Exhaustive search over connected allocations shows EF1 failing on a small
tree and on K(2,b) for b >= 4, while envy-cycle elimination always finds one
on complete bipartite graphs with both sides at least 3.
"""

from graphfair import (
    Criterion,
    Instance,
    catalog,
    complete_bipartite_graph,
    envy_cycle_bipartite,
    exists_connected_allocation,
    is_efk,
    random_tabulated,
)

ef1 = Criterion("efk", k=1)
for name, params in (("fig6_tree", {}), ("thm22_deg4", {}), ("fig7_k2b", {"b": 4})):
    inst = catalog(name, **params)
    found = exists_connected_allocation(inst, ef1)
    print(f"{name} ({inst.m} goods): {'EF1 exists' if found else 'no connected EF1 allocation'}")

g = complete_bipartite_graph(3, 4)
trace: list = []
inst = Instance(3, g, tuple(random_tabulated(g.m, seed, max_value=5) for seed in range(3)))
alloc = envy_cycle_bipartite(inst, trace)
for bundles, agent, good in trace:
    print(f"  agent {agent} takes good {good}; bundles before: {[sorted(b) for b in bundles]}")
print("K(3,4) result:", [sorted(b) for b in alloc.bundles], "EF1:", is_efk(inst, alloc, 1))
