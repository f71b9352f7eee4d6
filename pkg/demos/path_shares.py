"""Sweeping a path: every agent gets an indivisible proportional share.

Goods are added left to right until some agent still waiting accepts the
bundle; that agent leaves with it.  Each bundle ships with the set of goods
whose removal makes the share work out.
"""

from graphfair import Instance, allocate_path_ips, ips_threshold, path_graph, random_additive

n, m = 3, 9
inst = Instance(n, path_graph(m), tuple(random_additive(m, seed, max_value=6) for seed in range(n)))
for i, u in enumerate(inst.valuations):
    print(f"agent {i} values: {[int(x) for x in u.values]}")
print(f"threshold with {n} agents and {m} goods: {ips_threshold(n, m)}")

alloc, certs = allocate_path_ips(inst)
for i, (bundle, cert) in enumerate(zip(alloc.bundles, certs)):
    u = inst.valuations[i]
    rest = u.total() - u.value(cert.removed)
    print(f"agent {i}: {sorted(bundle)} worth {u.value(bundle)}; "
          f"ignoring {sorted(cert.removed)} the rest is {rest}, share {cert.threshold * rest}")
