"""Two agents, one tree of blocks: the best EFk a graph can promise.

Vertices hanging off the chosen block-tree path are merged into their
guardian cut vertex.  The merged graph has a bipolar ordering, so some
prefix/suffix split is EF1 there, which is EF(k*) back in the original.
"""

from graphfair import (
    Instance,
    block_tree,
    efk_two_allocate,
    fig4_graph,
    guaranteed_efk_bruteforce,
    is_efk,
    optimal_efk_two,
    random_tabulated,
)

g = fig4_graph()
bt = block_tree(g)
print("blocks:", [sorted(b) for b in bt.blocks])
print("cut vertices:", sorted(bt.cut_vertices))

plan = optimal_efk_two(g)
print(f"k* = {plan.k_star}")
print("merge sets:", [sorted(s) for s in plan.merge_sets])
print("brute force over all binary identical valuations:", guaranteed_efk_bruteforce(g))

for seed in range(3):
    inst = Instance(2, g, (random_tabulated(g.m, seed), random_tabulated(g.m, seed + 100)))
    alloc, k = efk_two_allocate(inst)
    ok = "EF1" if is_efk(inst, alloc, 1) else f"EF{k}"
    print(f"seed {seed}: {[sorted(b) for b in alloc.bundles]} -> {ok}")
