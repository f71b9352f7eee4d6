"""Connected allocators with maximin-share guarantees.

Two agents: a spanning-tree bipartition for graphs with a cut vertex and an
all-pairs bipolar-ordering scan for biconnected graphs, finished by
cut-and-choose.  Any number of agents: favourite-leaf picking on stars,
the IPS sweep on paths and exhaustive edge-cut search on (spanning) trees.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .caps import CapExceeded, get_cap
from .graph import (
    Graph,
    GraphError,
    bfs_spanning_tree,
    bipolar_between,
    max_components_single_deletion,
    tree_edge_cut_partitions,
    vertex_connectivity,
)
from .valuation import AdditiveValuation, Allocation, Instance

__all__ = [
    "IpsCertificate",
    "ips_threshold",
    "is_ips_bundle",
    "allocate_path_ips",
    "allocate_star",
    "bipartition_cut_vertex",
    "bipartition_biconnected",
    "cut_and_choose",
    "allocate_tree_gmms",
    "allocate_any_graph",
    "subset_window",
]


# -- indivisible proportional share ---------------------------------------------


@dataclass(frozen=True)
class IpsCertificate:
    """``u(bundle) >= threshold * u(M - removed)`` for the named agent."""

    agent: int | None
    removed: frozenset[int]
    threshold: Fraction


def ips_threshold(n: int, m: int) -> Fraction:
    if n < 1 or m < 0:
        raise ValueError("need n >= 1 and m >= 0")
    if m >= 2 * n - 1:
        return Fraction(1, n)
    if m >= n:
        return Fraction(1, m - n + 1)
    return Fraction(0)


def is_ips_bundle(
    u: AdditiveValuation, a, n: int, m: int, agent: int | None = None
) -> IpsCertificate | None:
    """Certificate that ``a`` is IPS for ``u``, or ``None``.

    Removing more value only helps, so the best ``B`` is the ``n - 1`` most
    valuable goods outside ``a``.
    """
    if not isinstance(u, AdditiveValuation):
        raise TypeError("IPS is defined here for additive valuations")
    a = frozenset(a)
    t = ips_threshold(n, m)
    outside = sorted((g for g in range(m) if g not in a), key=lambda g: (-u.values[g], g))
    removed = frozenset(outside[: n - 1])
    if u.value(a) >= t * (u.total() - u.value(removed)):
        return IpsCertificate(agent, removed, t)
    return None


def _path_sequence(g: Graph) -> list[int]:
    if g.m == 1:
        return [0]
    start = min(v for v in g.vertices if g.degree(v) == 1)
    seq, prev = [start], None
    while len(seq) < g.m:
        nxt = next(w for w in g.adjacency[seq[-1]] if w != prev)
        prev = seq[-1]
        seq.append(nxt)
    return seq


def allocate_path_ips(inst: Instance) -> tuple[Allocation, list[IpsCertificate | None]]:
    """Sweep the path from its lowest-index end, closing a bundle as soon as
    some remaining agent finds it IPS; the last agent takes what is left."""
    g = inst.graph
    if not g.is_path():
        raise GraphError("allocate_path_ips needs a path")
    if not inst.additive:
        raise TypeError("allocate_path_ips needs additive valuations")
    n, m = inst.n, inst.m
    seq = _path_sequence(g)
    bundles: list[frozenset[int]] = [frozenset()] * n
    remaining = list(range(n))
    pos = 0
    while len(remaining) > 1:
        current: list[int] = []
        while True:
            taker = next(
                (
                    i
                    for i in remaining
                    if is_ips_bundle(inst.valuations[i], current, n, m) is not None
                ),
                None,
            )
            if taker is not None or pos == m:
                break
            current.append(seq[pos])
            pos += 1
        if taker is None:
            # out of goods; the leftovers rule below then reports the failure
            taker = remaining[0]
        bundles[taker] = frozenset(current)
        remaining.remove(taker)
    bundles[remaining[0]] = frozenset(seq[pos:])
    alloc = Allocation(tuple(bundles))
    certs = [is_ips_bundle(u, alloc.bundles[i], n, m, agent=i) for i, u in enumerate(inst.valuations)]
    return alloc, certs


# -- stars ----------------------------------------------------------------------


def allocate_star(inst: Instance) -> Allocation:
    """Agents ``0..n-2`` each take their favourite remaining leaf; the last
    agent gets the centre and every leaf left over."""
    g = inst.graph
    center = g.star_center()
    if center is None:
        raise GraphError("allocate_star needs a star")
    if inst.n < 2 or inst.m < inst.n:
        raise ValueError("allocate_star needs n >= 2 and m >= n")
    if not inst.additive:
        raise TypeError("allocate_star needs additive valuations")
    leaves = [v for v in g.vertices if v != center]
    bundles = []
    for u in inst.valuations[:-1]:
        pick = max(leaves, key=lambda v: (u.values[v], -v))
        leaves.remove(pick)
        bundles.append(frozenset({pick}))
    bundles.append(frozenset([center, *leaves]))
    return Allocation(tuple(bundles))


# -- two agents -----------------------------------------------------------------


def _subtree(adj, start: int, removed: int) -> frozenset[int]:
    seen = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y != removed and y not in seen:
                seen.add(y)
                stack.append(y)
    return frozenset(seen)


def bipartition_cut_vertex(g: Graph, u: AdditiveValuation) -> tuple[frozenset[int], frozenset[int]]:
    """Connected bipartition whose poorer part is worth at least ``MMS(u, 2) / k``,
    where ``k`` is the most components one vertex deletion can create.

    Walk a BFS spanning tree towards its value centroid ``v``, then try the
    subtrees hanging off ``v``, then unions of subtrees joined by non-tree
    edges.  If nothing reaches ``u(M) / 2k``, ``v`` itself is heavy and the
    most valuable component of ``g - v`` is split off.
    """
    if g.m < 2:
        raise GraphError("need at least two vertices to bipartition")
    if vertex_connectivity(g) != 1:
        raise GraphError("bipartition_cut_vertex needs connectivity 1; use bipartition_biconnected")
    total = u.total()
    k, _ = max_components_single_deletion(g)
    target = total / (2 * k)
    everything = frozenset(g.vertices)
    tree = bfs_spanning_tree(g, 0)
    adj = tree.adjacency

    v, came_from = 0, None
    while True:
        heavy = None
        for w in adj[v]:
            if w != came_from and u.value(_subtree(adj, w, v)) > total / 2:
                heavy = w
                break
        if heavy is None:
            break
        v, came_from = heavy, v

    def good(part: frozenset[int]) -> bool:
        value = u.value(part)
        return min(value, total - value) >= target

    subtrees = [_subtree(adj, w, v) for w in adj[v]]
    subtrees.sort(key=min)
    for part in subtrees:
        if good(part):
            return part, everything - part

    group = {x: i for i, part in enumerate(subtrees) for x in part}
    members = {i: set(part) for i, part in enumerate(subtrees)}
    for a, b in g.sorted_edges():
        if a == v or b == v or tree.has_edge(a, b):
            continue
        ga, gb = group[a], group[b]
        if ga == gb:
            continue
        keep, drop = min(ga, gb), max(ga, gb)
        for x in members[drop]:
            group[x] = keep
        members[keep] |= members.pop(drop)
        merged = frozenset(members[keep])
        if good(merged):
            return merged, everything - merged

    # heavy centre: the remaining groups are the components of g - v
    best = max(members.values(), key=lambda s: (u.value(s), -min(s)))
    part = frozenset(best)
    return part, everything - part


def bipartition_biconnected(g: Graph, u: AdditiveValuation) -> tuple[frozenset[int], frozenset[int]]:
    """Best prefix/suffix split over bipolar orderings between every ordered
    pair of goods.  The poorer part is worth at least ``3/4 * MMS(u, 2)``."""
    if g.m < 3 or vertex_connectivity(g) < 2:
        raise GraphError("bipartition_biconnected needs a biconnected graph with m >= 3")
    best_value, best_split = None, None
    for g1, g2 in itertools.permutations(g.vertices, 2):
        order = bipolar_between(g, g1, g2)
        prefix = Fraction(0)
        total = u.total()
        for cut in range(1, g.m):
            prefix += u.values[order[cut - 1]]
            value = min(prefix, total - prefix)
            if best_value is None or value > best_value:
                best_value = value
                best_split = (frozenset(order[:cut]), frozenset(order[cut:]))
    return best_split


def cut_and_choose(parts: tuple, u2) -> Allocation:
    """Agent 1 (index 1) takes the part she weakly prefers, ``parts[0]`` on ties."""
    first, second = (frozenset(p) for p in parts)
    if u2.value(first) >= u2.value(second):
        return Allocation((second, first))
    return Allocation((first, second))


# -- trees and spanning trees ----------------------------------------------------


def allocate_tree_gmms(inst: Instance) -> Allocation:
    """Connected allocation giving every agent at least her own G-MMS on a tree.

    Exhaustive: every choice of ``n - 1`` cut edges, then a backtracking
    assignment of the resulting parts to agents.
    """
    tree = inst.graph
    if not tree.is_tree():
        raise GraphError("allocate_tree_gmms needs a tree")
    n, m = inst.n, inst.m
    if m < n:
        return Allocation(tuple(frozenset({i}) if i < m else frozenset() for i in range(n)))
    work = math.comb(m - 1, n - 1) * math.factorial(n)
    cap = get_cap("tree_assignments")
    if work > cap:
        raise CapExceeded("allocate_tree_gmms", work, cap)
    partitions = tree_edge_cut_partitions(tree, n)
    values = [[[u.value(p) for p in parts] for parts in partitions] for u in inst.valuations]
    shares = [max(min(row) for row in per_agent) for per_agent in values]

    for idx, parts in enumerate(partitions):
        chosen: list[int] = []

        def assign(agent: int) -> bool:
            if agent == n:
                return True
            for p in range(n):
                if p not in chosen and values[agent][idx][p] >= shares[agent]:
                    chosen.append(p)
                    if assign(agent + 1):
                        return True
                    chosen.pop()
            return False

        if assign(0):
            return Allocation(tuple(parts[p] for p in chosen))
    raise AssertionError("no tree allocation meets every agent's G-MMS; this is a bug")


def allocate_any_graph(inst: Instance) -> Allocation:
    """Run the tree allocator on the BFS spanning tree rooted at vertex 0.

    Every agent gets at least ``MMS / (m - n + 1)``.
    """
    tree = bfs_spanning_tree(inst.graph, 0)
    return allocate_tree_gmms(Instance(inst.n, tree, inst.valuations))


# -- subset sums ------------------------------------------------------------------


def subset_window(x: Sequence, r) -> frozenset[int]:
    """Indices ``J`` with ``r <= sum(x[j] for j in J) <= r + 2``.

    Requires every ``x[j] >= 1``, ``2 <= sum(x) <= 2 * len(x)`` and
    ``0 <= r <= sum(x) - 2``.
    """
    x = [Fraction(v) for v in x]
    r = Fraction(r)
    k, s = len(x), sum(x, Fraction(0))
    if k < 1 or any(v < 1 for v in x) or not 2 <= s <= 2 * k or not 0 <= r <= s - 2:
        raise ValueError("subset_window preconditions violated")
    return frozenset(_window(x, list(range(k)), r))


def _window(x: list[Fraction], idx: list[int], r: Fraction) -> set[int]:
    if len(idx) == 1:
        return {idx[0]}
    s = sum((x[i] for i in idx), Fraction(0))
    top = max(idx, key=lambda i: (x[i], -i))
    if x[top] <= 2:
        # consecutive prefix sums step by at most 2, so one lands in the window
        walk = [top] + [i for i in idx if i != top]
        acc, taken = Fraction(0), []
        for i in [None] + walk:
            if i is not None:
                acc += x[i]
                taken.append(i)
            if r <= acc <= r + 2:
                return set(taken)
        raise AssertionError("prefix walk missed the window")
    if r >= s / 2 - 1:
        if x[top] >= r:
            return {top}
        rest = [i for i in idx if i != top]
        return _window(x, rest, r - x[top]) | {top}
    return set(idx) - _window(x, idx, s - r - 2)
