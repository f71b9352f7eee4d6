"""How much does connectivity cost two agents on a wheel?

Unconstrained, the goods on the rim split 4/4.  Forcing both bundles to be
connected drops the best guaranteed share to 3, and the biconnected
bipartition scan finds a split that attains it.
"""

from graphfair import (
    bipartition_biconnected,
    catalog,
    cut_and_choose,
    exact_gmms,
    exact_mms,
    poc_ratio,
    poc_search,
    wheel_graph,
)

inst = catalog("fig2_wheel")
u = inst.valuations[0]
print("rim values:", [int(x) for x in u.values[:8]], "hub:", int(u.values[8]))

mms = exact_mms(u, 2)
gmms = exact_gmms(inst.graph, u, 2)
print(f"MMS   = {mms.value}, e.g. {[sorted(p) for p in mms.partition]}")
print(f"G-MMS = {gmms.value}, e.g. {[sorted(p) for p in gmms.partition]}")
print(f"ratio = {poc_ratio(inst.graph, u, 2)}")

parts = bipartition_biconnected(inst.graph, u)
alloc = cut_and_choose(parts, inst.valuations[1])
for i, bundle in enumerate(alloc.bundles):
    print(f"agent {i} gets {sorted(bundle)} worth {inst.valuations[i].value(bundle)}")

# smaller wheels: is 3/4 already forced with tiny integer values?
for rim in (4, 5, 6):
    res = poc_search(wheel_graph(rim), 2, max_value=3, budget=10**6)
    print(f"wheel with {rim} rim vertices: best ratio found {res.ratio} "
          f"({'whole grid' if res.exhaustive else 'local search'})")
