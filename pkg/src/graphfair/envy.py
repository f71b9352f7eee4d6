"""Connected allocators with envy guarantees.

Two agents get EF1 on any graph with a bipolar ordering, and the best
possible EFk on any other graph by merging hanging vertices into their
guardians first.  On complete bipartite graphs with both sides at least
``n``, envy-cycle elimination (monotone valuations) and a double
round-robin (additive valuations) give connected EF1 allocations.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Sequence

from .checkers import envy_up_to
from .graph import BlockTree, Graph, GraphError, bipolar_if_exists, block_tree, merge_vertices
from .valuation import AdditiveValuation, Allocation, Instance, MergedValuation

__all__ = [
    "EfkPlan",
    "ef1_two_on_bipolar",
    "optimal_efk_two",
    "efk_two_allocate",
    "envy_graph",
    "envy_cycle_bipartite",
    "double_round_robin",
]


def ef1_two_on_bipolar(order: Sequence[int], u1, u2) -> Allocation:
    """First prefix/suffix split along ``order`` that is EF1 for both agents.

    Cuts are tried from the left; at each cut agent 0 takes the prefix
    before the swapped assignment is tried.
    """
    m = len(order)
    vals = (u1, u2)

    def ef1(bundles) -> bool:
        return all(envy_up_to(vals[i], bundles[i], bundles[1 - i], 1) for i in (0, 1))

    splits = [(frozenset(order[:c]), frozenset(order[c:])) for c in range(1, m)]
    # with fewer than two goods only the all-or-nothing splits exist
    splits += [(frozenset(), frozenset(order)), (frozenset(order), frozenset())]
    for prefix, suffix in splits:
        for bundles in ((prefix, suffix), (suffix, prefix)):
            if ef1(bundles):
                return Allocation(bundles)
    raise AssertionError("no EF1 cut along a bipolar ordering; this is a bug")


# -- best EFk for two agents ------------------------------------------------------


@dataclass(frozen=True)
class EfkPlan:
    """Chosen block-tree path, the EFk level it certifies and the merge sets
    (each cut vertex on the path's blocks with its dependents, plus singletons)."""

    k_star: int
    path: tuple[tuple[str, int], ...]
    merge_sets: tuple[frozenset[int], ...]


def _dependents(g: Graph, bt: BlockTree, path: Sequence[tuple[str, int]]) -> dict[int, set[int]]:
    """Map each cut vertex in the blocks of ``path`` to its dependents."""
    nbrs = bt.neighbors()
    on_path_blocks = [bt.blocks[x] for kind, x in path if kind == "B"]
    covered = frozenset().union(*on_path_blocks)
    guards = {c for c in bt.cut_vertices if c in covered}
    deps: dict[int, set[int]] = {c: set() for c in guards}
    for v in g.vertices:
        if v in covered:
            continue
        start = ("C", v) if v in bt.cut_vertices else ("B", bt.blocks_of(v)[0])
        seen = {start}
        queue = deque([start])
        while queue:
            node = queue.popleft()
            if node[0] == "C" and node[1] in guards:
                deps[node[1]].add(v)
                break
            for nxt in nbrs[node]:
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
    return deps


def optimal_efk_two(g: Graph) -> EfkPlan:
    """Smallest ``k`` such that two agents are always guaranteed a connected
    EFk allocation on ``g``, with the merge plan that achieves it.

    Every maximal path of the block tree (between two leaf blocks) is
    scored by one plus the largest number of dependents of a cut vertex
    lying in its blocks; the lowest score wins, first leaf pair on ties.
    """
    if not g.is_connected():
        raise GraphError("optimal_efk_two needs a connected graph")
    bt = block_tree(g)
    singletons = tuple(frozenset({v}) for v in g.vertices)
    if len(bt.blocks) <= 1:
        return EfkPlan(1, (("B", 0),) if bt.blocks else (), singletons)
    leaves = sorted(bt.leaves())
    best = None
    for i, a in enumerate(leaves):
        for b in leaves[i + 1:]:
            path = tuple(bt.tree_path(a, b))
            deps = _dependents(g, bt, path)
            k = 1 + max((len(d) for d in deps.values()), default=0)
            if best is None or k < best[0]:
                best = (k, path, deps)
    k, path, deps = best
    grouped = {v for c, d in deps.items() if d for v in d | {c}}
    sets = [frozenset(d | {c}) for c, d in deps.items() if d]
    sets += [frozenset({v}) for v in g.vertices if v not in grouped]
    return EfkPlan(k, path, tuple(sorted(sets, key=min)))


def efk_two_allocate(inst: Instance) -> tuple[Allocation, int]:
    """Connected EF(k*) allocation for two agents with monotone valuations.

    Merge each guardian with its dependents, find an EF1 split of the merged
    graph along a bipolar ordering (each agent values a merged vertex as its
    parts together) and expand the bundles back.
    """
    if inst.n != 2:
        raise ValueError("efk_two_allocate is for two agents")
    plan = optimal_efk_two(inst.graph)
    merged, parts = merge_vertices(inst.graph, plan.merge_sets)
    order = bipolar_if_exists(merged)
    if order is None:
        raise AssertionError("merged graph has no bipolar ordering; this is a bug")
    lifted = [MergedValuation(u, parts) for u in inst.valuations]
    small = ef1_two_on_bipolar(order, lifted[0], lifted[1])
    bundles = tuple(frozenset().union(*(parts[x] for x in b)) for b in small.bundles)
    return Allocation(bundles), plan.k_star


# -- complete bipartite graphs ----------------------------------------------------


def _bipartite_sides(inst: Instance) -> tuple[list[int], list[int]]:
    g = inst.graph
    sides = g.bipartite_sides()
    if sides is None:
        raise GraphError("graph is not bipartite")
    left, right = sorted(sides[0]), sorted(sides[1])
    if len(g.edges) != len(left) * len(right):
        raise GraphError("graph is not complete bipartite")
    if min(len(left), len(right)) < inst.n:
        raise GraphError("both sides need at least n vertices")
    return left, right


def envy_graph(inst: Instance, bundles: Sequence) -> dict[int, list[int]]:
    """``i -> j`` whenever agent ``i`` strictly prefers ``j``'s bundle to her own."""
    out = {}
    for i, u in enumerate(inst.valuations):
        own = u.value(bundles[i])
        out[i] = [j for j in range(inst.n) if j != i and u.value(bundles[j]) > own]
    return out


def _smallest_cycle(edges: dict[int, list[int]]) -> list[int] | None:
    """Lexicographically smallest envy cycle, written from its lowest agent."""
    for start in sorted(edges):
        path = [start]

        def extend() -> bool:
            tail = path[-1]
            if start in edges[tail] and len(path) > 1:
                return True
            for nxt in edges[tail]:
                if nxt > start and nxt not in path:
                    path.append(nxt)
                    if extend():
                        return True
                    path.pop()
            return False

        if extend():
            return path
    return None


def envy_cycle_bipartite(inst: Instance, trace: list | None = None) -> Allocation:
    """Envy-cycle elimination steering goods so every bundle stays connected.

    Each agent first gets one good from the side ``L`` holding vertex 0.
    Afterwards the lowest-index unenvied agent takes an ``L`` good if her
    bundle already holds an ``R`` good (an ``R`` good once ``L`` runs out),
    and an ``R`` good otherwise (an ``L`` good once ``R`` runs out).  Envy
    cycles are removed by passing bundles backwards along the cycle.

    ``trace``, if given, receives ``(bundles_before, agent, good)`` per step.
    """
    left, right = _bipartite_sides(inst)
    right_set = frozenset(right)
    bundles = [frozenset({left[i]}) for i in range(inst.n)]
    left = left[inst.n:]
    while left or right:
        while (cycle := _smallest_cycle(envy_graph(inst, bundles))) is not None:
            rotated = list(bundles)
            for pos, i in enumerate(cycle):
                rotated[i] = bundles[cycle[(pos + 1) % len(cycle)]]
            bundles = rotated
        edges = envy_graph(inst, bundles)
        envied = {j for targets in edges.values() for j in targets}
        agent = min(i for i in range(inst.n) if i not in envied)
        has_right = bool(bundles[agent] & right_set)
        if has_right:
            pool = left if left else right
        else:
            pool = right if right else left
        good = pool.pop(0)
        if trace is not None:
            trace.append((tuple(bundles), agent, good))
        bundles[agent] = bundles[agent] | {good}
    return Allocation(tuple(bundles))


def double_round_robin(inst: Instance) -> Allocation:
    """Round-robin over ``L`` in agent order ``0..n-1``, then over ``R`` in
    order ``n-1..0``; each pick is the picker's most valuable remaining good."""
    if not inst.additive:
        raise TypeError("double_round_robin needs additive valuations")
    left, right = _bipartite_sides(inst)
    bundles = [set() for _ in range(inst.n)]
    for pool, agents in ((left, list(range(inst.n))), (right, list(range(inst.n - 1, -1, -1)))):
        pool = list(pool)
        turn = 0
        while pool:
            agent = agents[turn % inst.n]
            u: AdditiveValuation = inst.valuations[agent]
            pick = max(pool, key=lambda g: (u.values[g], -g))
            pool.remove(pick)
            bundles[agent].add(pick)
            turn += 1
    return Allocation(tuple(frozenset(b) for b in bundles))
