"""Undirected simple graphs over goods and the structural algorithms built on them.

Vertices are the integers ``0..m-1``.  Vertex sets cross the public API as
``frozenset`` objects; hot loops use integer bitmasks (bit ``v`` set iff
vertex ``v`` is in the set).
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import networkx as nx

from .caps import CapExceeded, get_cap

__all__ = [
    "Graph",
    "GraphError",
    "BlockTree",
    "EarDecomposition",
    "bits",
    "to_mask",
    "path_graph",
    "cycle_graph",
    "star_graph",
    "complete_graph",
    "complete_bipartite_graph",
    "wheel_graph",
    "is_connected_subset",
    "components",
    "vertex_connectivity",
    "vertex_connectivity_bruteforce",
    "block_tree",
    "max_components_single_deletion",
    "open_ear_decomposition",
    "bipolar_between",
    "bipolar_if_exists",
    "is_bipolar_order",
    "find_unlinked_sets",
    "is_ab_linked",
    "merge_vertices",
    "induced_subgraph",
    "bfs_spanning_tree",
    "tree_edge_cut_partitions",
    "connected_sets_containing",
]


class GraphError(ValueError):
    """Raised when a graph or vertex set violates an operation's precondition."""


def bits(mask: int) -> Iterator[int]:
    """Yield the indices of the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def to_mask(vertices: Iterable[int]) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices ``0..m-1``.

    Edges are stored as sorted pairs ``(i, j)`` with ``i < j``.  Loops,
    duplicate edges and out-of-range endpoints are rejected.  Connectivity is
    not enforced here (``validate`` reports it) so that malformed inputs can
    still be represented and diagnosed.
    """

    m: int
    edges: frozenset[tuple[int, int]] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        if self.m < 0:
            raise GraphError(f"vertex count must be nonnegative, got {self.m}")
        normalized = set()
        for e in self.edges:
            i, j = e
            if i == j:
                raise GraphError(f"loop at vertex {i}")
            if not (0 <= i < self.m and 0 <= j < self.m):
                raise GraphError(f"edge {e} has an endpoint outside 0..{self.m - 1}")
            normalized.add((min(i, j), max(i, j)))
        object.__setattr__(self, "edges", frozenset(normalized))

    @classmethod
    def from_edges(cls, m: int, edges: Iterable[Sequence[int]]) -> "Graph":
        """Build a graph, rejecting duplicate edges (in either orientation)."""
        seen: set[tuple[int, int]] = set()
        for e in edges:
            i, j = int(e[0]), int(e[1])
            key = (min(i, j), max(i, j))
            if i == j:
                raise GraphError(f"loop at vertex {i}")
            if key in seen:
                raise GraphError(f"duplicate edge {key}")
            seen.add(key)
        return cls(m, frozenset(seen))

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        nbrs: list[list[int]] = [[] for _ in range(self.m)]
        for i, j in self.edges:
            nbrs[i].append(j)
            nbrs[j].append(i)
        return tuple(tuple(sorted(n)) for n in nbrs)

    @cached_property
    def adj_masks(self) -> tuple[int, ...]:
        return tuple(to_mask(n) for n in self.adjacency)

    @property
    def full_mask(self) -> int:
        return (1 << self.m) - 1

    @property
    def vertices(self) -> range:
        return range(self.m)

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def has_edge(self, i: int, j: int) -> bool:
        return (min(i, j), max(i, j)) in self.edges

    def is_connected(self) -> bool:
        return is_connected_subset(self, range(self.m))

    def is_complete(self) -> bool:
        return len(self.edges) == self.m * (self.m - 1) // 2

    def is_tree(self) -> bool:
        return self.m >= 1 and len(self.edges) == self.m - 1 and self.is_connected()

    def is_path(self) -> bool:
        if not self.is_tree():
            return False
        return all(self.degree(v) <= 2 for v in self.vertices)

    def star_center(self) -> int | None:
        """Center of a star (a tree with a vertex adjacent to all others), else None."""
        if not self.is_tree() or self.m < 2:
            return None
        for v in self.vertices:
            if self.degree(v) == self.m - 1:
                return v
        return None

    def is_star(self) -> bool:
        return self.star_center() is not None

    def bipartite_sides(self) -> tuple[frozenset[int], frozenset[int]] | None:
        """Sides ``(L, R)`` of a complete bipartite graph, L holding vertex 0; else None."""
        if self.m < 2 or not self.is_connected():
            return None
        color = {0: 0}
        queue = deque([0])
        while queue:
            v = queue.popleft()
            for w in self.adjacency[v]:
                if w not in color:
                    color[w] = 1 - color[v]
                    queue.append(w)
                elif color[w] == color[v]:
                    return None
        left = frozenset(v for v in self.vertices if color[v] == 0)
        right = frozenset(v for v in self.vertices if color[v] == 1)
        if len(self.edges) != len(left) * len(right):
            return None
        return left, right

    def to_networkx(self) -> nx.Graph:
        h = nx.Graph()
        h.add_nodes_from(range(self.m))
        h.add_edges_from(self.edges)
        return h

    def __repr__(self) -> str:
        return f"Graph(m={self.m}, edges={self.sorted_edges()})"


# -- constructors -----------------------------------------------------------


def path_graph(m: int) -> Graph:
    return Graph(m, frozenset((i, i + 1) for i in range(m - 1)))


def cycle_graph(m: int) -> Graph:
    if m < 3:
        raise GraphError("a cycle needs at least 3 vertices")
    return Graph(m, frozenset((i, (i + 1) % m) for i in range(m)))


def star_graph(leaves: int) -> Graph:
    """Star with center 0 and leaves ``1..leaves``."""
    return Graph(leaves + 1, frozenset((0, i) for i in range(1, leaves + 1)))


def complete_graph(m: int) -> Graph:
    return Graph(m, frozenset(itertools.combinations(range(m), 2)))


def complete_bipartite_graph(a: int, b: int) -> Graph:
    """``K_{a,b}`` with left side ``0..a-1`` and right side ``a..a+b-1``."""
    return Graph(a + b, frozenset((i, a + j) for i in range(a) for j in range(b)))


def wheel_graph(rim: int) -> Graph:
    """Rim vertices ``0..rim-1`` in cyclic order, hub ``rim``."""
    edges = {(i, (i + 1) % rim) for i in range(rim)}
    edges |= {(i, rim) for i in range(rim)}
    return Graph(rim + 1, frozenset(edges))


# -- connectivity primitives ------------------------------------------------


def _mask_connected(adj: Sequence[int], mask: int) -> bool:
    if mask == 0:
        return True
    start = mask & -mask
    seen = start
    frontier = start
    while frontier:
        low = frontier & -frontier
        frontier ^= low
        new = adj[low.bit_length() - 1] & mask & ~seen
        seen |= new
        frontier |= new
    return seen == mask


def _mask_components(adj: Sequence[int], mask: int) -> list[int]:
    comps = []
    rest = mask
    while rest:
        start = rest & -rest
        seen = start
        frontier = start
        while frontier:
            low = frontier & -frontier
            frontier ^= low
            new = adj[low.bit_length() - 1] & mask & ~seen
            seen |= new
            frontier |= new
        comps.append(seen)
        rest &= ~seen
    return comps


def is_connected_subset(g: Graph, s: Iterable[int]) -> bool:
    """True iff the subgraph induced by ``s`` is connected (empty set counts)."""
    return _mask_connected(g.adj_masks, to_mask(s))


def components(g: Graph, within: Iterable[int] | None = None) -> list[frozenset[int]]:
    """Connected components of the subgraph induced by ``within`` (default: all)."""
    mask = g.full_mask if within is None else to_mask(within)
    return [frozenset(bits(c)) for c in _mask_components(g.adj_masks, mask)]


def connected_sets_containing(
    adj: Sequence[int], root_mask: int, allowed: int, stop=None
) -> Iterator[int]:
    """Enumerate connected vertex sets (as masks) that contain ``root_mask``.

    ``root_mask`` must itself be connected.  Only vertices in ``allowed`` are
    added.  If ``stop(mask)`` is true the set is yielded and not extended.
    Every set is produced exactly once: each branch fixes the next extension
    vertex and excludes it from all later sibling branches.
    """
    ext0 = 0
    for v in bits(root_mask):
        ext0 |= adj[v]
    ext0 &= allowed & ~root_mask

    stack = [(root_mask, ext0, root_mask)]
    while stack:
        current, ext, excluded = stack.pop()
        yield current
        if stop is not None and stop(current):
            continue
        children = []
        while ext:
            low = ext & -ext
            ext ^= low
            v = low.bit_length() - 1
            new_ext = (ext | (adj[v] & allowed)) & ~excluded & ~current & ~low
            children.append((current | low, new_ext, excluded | low))
            excluded |= low
        # reversed so that the lowest-index branch is explored first
        stack.extend(reversed(children))


# -- vertex connectivity ----------------------------------------------------


def vertex_connectivity(g: Graph) -> int:
    """Minimum number of vertices whose deletion disconnects ``g``.

    Complete graphs on ``m`` vertices return ``m - 1``.  Other graphs use
    networkx's Menger/max-flow routine between non-adjacent pairs.
    """
    if not g.is_connected():
        return 0
    if g.is_complete():
        return max(g.m - 1, 0)
    return nx.node_connectivity(g.to_networkx())


def vertex_connectivity_bruteforce(g: Graph) -> int:
    """Exhaustive deletion oracle for ``vertex_connectivity`` (small graphs only)."""
    if g.m > get_cap("connectivity_bruteforce"):
        raise CapExceeded("vertex_connectivity_bruteforce", g.m, get_cap("connectivity_bruteforce"))
    if not g.is_connected():
        return 0
    if g.is_complete():
        return max(g.m - 1, 0)
    full = g.full_mask
    for size in range(1, g.m - 1):
        for cut in itertools.combinations(range(g.m), size):
            rest = full & ~to_mask(cut)
            if not _mask_connected(g.adj_masks, rest):
                return size
    return g.m - 1


# -- block decomposition ----------------------------------------------------


@dataclass(frozen=True)
class BlockTree:
    """Blocks and cut vertices of a connected graph.

    ``blocks`` are sorted by their sorted vertex tuples.  ``adjacency`` holds
    ``(block index, cut vertex)`` pairs, one per membership of a cut vertex
    in a block.
    """

    blocks: tuple[frozenset[int], ...]
    cut_vertices: frozenset[int]
    adjacency: tuple[tuple[int, int], ...]

    def nodes(self) -> list[tuple[str, int]]:
        return [("B", i) for i in range(len(self.blocks))] + [
            ("C", v) for v in sorted(self.cut_vertices)
        ]

    def neighbors(self) -> dict[tuple[str, int], list[tuple[str, int]]]:
        nbrs: dict[tuple[str, int], list[tuple[str, int]]] = {node: [] for node in self.nodes()}
        for b, c in self.adjacency:
            nbrs[("B", b)].append(("C", c))
            nbrs[("C", c)].append(("B", b))
        for node in nbrs:
            nbrs[node].sort()
        return nbrs

    def is_path(self) -> bool:
        nbrs = self.neighbors()
        return all(len(v) <= 2 for v in nbrs.values())

    def leaves(self) -> list[tuple[str, int]]:
        nbrs = self.neighbors()
        if len(nbrs) == 1:
            return list(nbrs)
        return [node for node, ns in nbrs.items() if len(ns) == 1]

    def tree_path(self, src: tuple[str, int], dst: tuple[str, int]) -> list[tuple[str, int]]:
        nbrs = self.neighbors()
        parent = {src: None}
        queue = deque([src])
        while queue:
            x = queue.popleft()
            if x == dst:
                break
            for y in nbrs[x]:
                if y not in parent:
                    parent[y] = x
                    queue.append(y)
        path = [dst]
        while parent[path[-1]] is not None:
            path.append(parent[path[-1]])
        return path[::-1]

    def blocks_of(self, v: int) -> list[int]:
        return [i for i, b in enumerate(self.blocks) if v in b]


def block_tree(g: Graph) -> BlockTree:
    """Block/cut-vertex decomposition via the Hopcroft-Tarjan edge-stack DFS."""
    if g.m == 0:
        return BlockTree((), frozenset(), ())
    if not g.is_connected():
        raise GraphError("block_tree requires a connected graph")
    if g.m == 1:
        return BlockTree((frozenset({0}),), frozenset(), ())

    adj = g.adjacency
    disc = [-1] * g.m
    low = [0] * g.m
    counter = 0
    edge_stack: list[tuple[int, int]] = []
    found: list[frozenset[int]] = []

    disc[0] = low[0] = counter
    counter += 1
    # frames: (vertex, parent, neighbor iterator)
    stack = [(0, -1, iter(adj[0]))]
    while stack:
        v, parent, it = stack[-1]
        advanced = False
        for w in it:
            if disc[w] == -1:
                edge_stack.append((v, w))
                disc[w] = low[w] = counter
                counter += 1
                stack.append((w, v, iter(adj[w])))
                advanced = True
                break
            if w != parent and disc[w] < disc[v]:
                edge_stack.append((v, w))
                low[v] = min(low[v], disc[w])
        if advanced:
            continue
        stack.pop()
        if parent >= 0:
            low[parent] = min(low[parent], low[v])
            if low[v] >= disc[parent]:
                comp: set[int] = set()
                while True:
                    a, b = edge_stack.pop()
                    comp.update((a, b))
                    if (a, b) == (parent, v):
                        break
                found.append(frozenset(comp))

    blocks = tuple(sorted(found, key=lambda b: tuple(sorted(b))))
    count = {}
    for b in blocks:
        for v in b:
            count[v] = count.get(v, 0) + 1
    cuts = frozenset(v for v, c in count.items() if c > 1)
    adjacency = tuple(
        (i, c) for i, b in enumerate(blocks) for c in sorted(b & cuts)
    )
    return BlockTree(blocks, cuts, adjacency)


def max_components_single_deletion(g: Graph) -> tuple[int, int]:
    """``(k, v)``: the most components left by deleting one vertex, and the lowest such vertex."""
    if g.m < 2:
        raise GraphError("need at least two vertices")
    best_k, best_v = 0, -1
    full = g.full_mask
    for v in g.vertices:
        k = len(_mask_components(g.adj_masks, full & ~(1 << v)))
        if k > best_k:
            best_k, best_v = k, v
    return best_k, best_v


# -- ear decompositions and bipolar orderings -------------------------------


@dataclass(frozen=True)
class EarDecomposition:
    """``ears[0]`` is a cycle (listed without repeating its start vertex);
    every later ear is a path whose two endpoints, and only those, lie on
    earlier ears."""

    ears: tuple[tuple[int, ...], ...]

    def is_valid_for(self, g: Graph) -> bool:
        if not self.ears:
            return False
        cycle = self.ears[0]
        if len(cycle) < 3 or len(set(cycle)) != len(cycle):
            return False
        used_edges: set[tuple[int, int]] = set()

        def take(a: int, b: int) -> bool:
            e = (min(a, b), max(a, b))
            if e not in g.edges or e in used_edges:
                return False
            used_edges.add(e)
            return True

        for a, b in zip(cycle, cycle[1:] + cycle[:1]):
            if not take(a, b):
                return False
        covered = set(cycle)
        for ear in self.ears[1:]:
            if len(ear) < 2 or ear[0] == ear[-1]:
                return False
            if ear[0] not in covered or ear[-1] not in covered:
                return False
            inner = ear[1:-1]
            if any(v in covered for v in inner) or len(set(inner)) != len(inner):
                return False
            for a, b in zip(ear, ear[1:]):
                if not take(a, b):
                    return False
            covered.update(inner)
        return covered == set(g.vertices) and used_edges == set(g.edges)


def _check_cycle(g: Graph, cycle: Sequence[int]) -> None:
    if len(cycle) < 3 or len(set(cycle)) != len(cycle):
        raise GraphError(f"{list(cycle)} is not a simple cycle")
    for a, b in zip(cycle, list(cycle[1:]) + [cycle[0]]):
        if not (0 <= a < g.m and 0 <= b < g.m) or not g.has_edge(a, b):
            raise GraphError(f"{list(cycle)} is not a cycle of the graph (missing edge {a}-{b})")


def _require_biconnected(g: Graph, what: str) -> None:
    if g.m < 3 or vertex_connectivity(g) < 2:
        raise GraphError(f"{what} requires a biconnected graph with at least 3 vertices")


def open_ear_decomposition(g: Graph, first_cycle: Sequence[int]) -> EarDecomposition:
    """Open ear decomposition of a biconnected graph starting from ``first_cycle``.

    Repeatedly takes the lowest uncovered edge incident to the covered part;
    if its far end is new, the ear continues along a BFS-shortest path of
    new vertices to the first covered vertex other than its start.
    """
    _require_biconnected(g, "open_ear_decomposition")
    _check_cycle(g, first_cycle)
    adj = g.adjacency
    covered = set(first_cycle)
    used = {
        (min(a, b), max(a, b))
        for a, b in zip(first_cycle, list(first_cycle[1:]) + [first_cycle[0]])
    }
    ears: list[tuple[int, ...]] = [tuple(first_cycle)]
    remaining = sorted(g.edges - used)
    while remaining:
        start, nxt = None, None
        for i, j in remaining:
            if i in covered:
                start, nxt = i, j
                break
            if j in covered:
                start, nxt = j, i
                break
        assert start is not None, "graph is connected, so some edge touches the covered part"
        if nxt in covered:
            ear = (start, nxt)
        else:
            parent = {nxt: None}
            queue = deque([nxt])
            end = None
            while queue and end is None:
                x = queue.popleft()
                for y in adj[x]:
                    if y in covered:
                        if y != start:
                            end = (x, y)
                            break
                    elif y not in parent:
                        parent[y] = x
                        queue.append(y)
            if end is None:
                raise GraphError("graph is not biconnected")
            x, y = end
            inner = [x]
            while parent[inner[-1]] is not None:
                inner.append(parent[inner[-1]])
            ear = (start, *reversed(inner), y)
        ears.append(ear)
        for a, b in zip(ear, ear[1:]):
            used.add((min(a, b), max(a, b)))
        covered.update(ear)
        remaining = [e for e in remaining if e not in used]
    return EarDecomposition(tuple(ears))


def _two_disjoint_paths(g: Graph, s: int, t: int) -> tuple[list[int], list[int]]:
    """Two internally vertex-disjoint s-t paths via unit-capacity augmenting paths.

    Each vertex ``v`` is split into ``(v, 0) -> (v, 1)`` with capacity 1
    (unbounded for ``s`` and ``t``); BFS explores neighbors lowest-index first.
    """
    cap: dict[tuple, dict[tuple, int]] = {}

    def add(a, b, c):
        cap.setdefault(a, {})[b] = cap.setdefault(a, {}).get(b, 0) + c
        cap.setdefault(b, {}).setdefault(a, 0)

    for v in g.vertices:
        add((v, 0), (v, 1), 2 if v in (s, t) else 1)
    for i, j in g.sorted_edges():
        add((i, 1), (j, 0), 1)
        add((j, 1), (i, 0), 1)
    source, sink = (s, 0), (t, 1)
    flow = 0
    while flow < 2:
        parent = {source: None}
        queue = deque([source])
        while queue and sink not in parent:
            x = queue.popleft()
            for y in sorted(cap[x]):
                if cap[x][y] > 0 and y not in parent:
                    parent[y] = x
                    queue.append(y)
        if sink not in parent:
            raise GraphError(f"no two disjoint paths between {s} and {t}")
        y = sink
        while parent[y] is not None:
            x = parent[y]
            cap[x][y] -= 1
            cap[y][x] += 1
            y = x
        flow += 1

    # flow on edge (i,1)->(j,0) is 1 iff the residual capacity dropped to 0
    succ: dict[int, list[int]] = {}
    for i, j in g.edges:
        for a, b in ((i, j), (j, i)):
            if cap[(a, 1)][(b, 0)] == 0:
                succ.setdefault(a, []).append(b)
    # cancel flow in opposite directions on the same edge
    for a in list(succ):
        for b in list(succ[a]):
            if a in succ.get(b, []):
                succ[a].remove(b)
                succ[b].remove(a)
    paths = []
    for first in sorted(succ.get(s, [])):
        path = [s, first]
        while path[-1] != t:
            path.append(succ[path[-1]][0])
        paths.append(path)
    if len(paths) != 2:
        raise GraphError(f"no two disjoint paths between {s} and {t}")
    return paths[0], paths[1]


def cycle_through(g: Graph, g1: int, g2: int) -> list[int]:
    """A cycle through ``g1`` and ``g2`` listed starting at ``g1``."""
    p1, p2 = _two_disjoint_paths(g, g1, g2)
    if len(p1) > len(p2):
        p1, p2 = p2, p1
    # g1 .. g2 along p1, then back to g1 along p2 reversed
    return p1 + p2[-2:0:-1]


def bipolar_between(g: Graph, g1: int, g2: int) -> list[int]:
    """Bipolar ordering of a biconnected graph beginning at ``g1`` and ending at ``g2``.

    The first ear is a cycle ``g1, h_1..h_i, g2, h_{i+1}..h_j`` arranged as
    ``g1, h_1..h_i, h_j..h_{i+1}, g2``; the inner vertices of each later ear
    are inserted right after whichever endpoint currently comes first, in
    path order from that endpoint.
    """
    if g1 == g2:
        raise GraphError("endpoints must differ")
    _require_biconnected(g, "bipolar_between")
    cycle = cycle_through(g, g1, g2)
    pos = cycle.index(g2)
    order = cycle[:pos] + cycle[:pos:-1] + [g2]
    ears = open_ear_decomposition(g, cycle).ears[1:]
    for ear in ears:
        if len(ear) == 2:
            continue
        a, b = ear[0], ear[-1]
        path = list(ear)
        if order.index(a) > order.index(b):
            path.reverse()
        at = order.index(path[0])
        order[at + 1 : at + 1] = path[1:-1]
    return order


def is_bipolar_order(g: Graph, order: Sequence[int]) -> bool:
    if sorted(order) != list(g.vertices):
        return False
    adj = g.adj_masks
    prefix = 0
    for v in order:
        prefix |= 1 << v
        if not _mask_connected(adj, prefix):
            return False
    suffix = 0
    for v in reversed(order):
        suffix |= 1 << v
        if not _mask_connected(adj, suffix):
            return False
    return True


def induced_subgraph(g: Graph, vertices: Iterable[int]) -> tuple[Graph, list[int]]:
    """Induced subgraph relabelled to ``0..k-1``; ``labels[i]`` is the original vertex."""
    labels = sorted(set(vertices))
    index = {v: i for i, v in enumerate(labels)}
    edges = frozenset(
        (index[i], index[j]) for i, j in g.edges if i in index and j in index
    )
    return Graph(len(labels), edges), labels


def _block_order(g: Graph, block: frozenset[int], first: int, last: int) -> list[int]:
    if len(block) == 1:
        return [first]
    if len(block) == 2:
        return [first, last]
    sub, labels = induced_subgraph(g, block)
    local = bipolar_between(sub, labels.index(first), labels.index(last))
    return [labels[i] for i in local]


def bipolar_if_exists(g: Graph) -> list[int] | None:
    """A bipolar ordering of ``g`` if its block tree is a path, else ``None``."""
    if not g.is_connected():
        raise GraphError("bipolar_if_exists requires a connected graph")
    if g.m <= 2:
        return list(g.vertices)
    bt = block_tree(g)
    if not bt.is_path():
        return None
    if len(bt.blocks) == 1:
        return bipolar_between(g, 0, 1)
    leaves = sorted(node for node in bt.leaves() if node[0] == "B")
    chain = bt.tree_path(leaves[0], leaves[-1])
    block_ids = [x for kind, x in chain if kind == "B"]
    cuts = [x for kind, x in chain if kind == "C"]
    order: list[int] = []
    for pos, b in enumerate(block_ids):
        block = bt.blocks[b]
        entry = cuts[pos - 1] if pos > 0 else min(block - {cuts[0]})
        exit_ = cuts[pos] if pos < len(cuts) else min(block - {cuts[-1]})
        part = _block_order(g, block, entry, exit_)
        order.extend(part if pos == 0 else part[1:])
    return order


# -- linkedness ---------------------------------------------------------------


def find_unlinked_sets(
    g: Graph, a: int, b: int
) -> tuple[frozenset[int], frozenset[int]] | None:
    """First pair ``(M1, M2)`` with ``|M1| = a``, ``|M2| = b`` that cannot be
    separated into disjoint connected subgraphs, or ``None`` if ``g`` is
    ``(a, b)``-linked.

    For each ``M1`` the minimal connected supersets ``C1`` are enumerated
    once (extension stops as soon as ``C1`` covers ``M1``); ``M2`` is then
    served iff some ``C1`` avoids it and leaves it inside one component of
    ``g - C1``.
    """
    if a < 1 or b < 1 or a + b > g.m:
        raise GraphError(f"need a, b >= 1 and a + b <= m (got a={a}, b={b}, m={g.m})")
    cap = get_cap("linked")
    if g.m > cap:
        raise CapExceeded("is_ab_linked", g.m, cap)
    adj = g.adj_masks
    full = g.full_mask
    for m1 in itertools.combinations(range(g.m), a):
        m1_mask = to_mask(m1)
        root = 1 << m1[0]
        covers = [
            c
            for c in connected_sets_containing(
                adj, root, full, stop=lambda s, t=m1_mask: s & t == t
            )
            if c & m1_mask == m1_mask
        ]
        others = [v for v in g.vertices if not m1_mask >> v & 1]
        for m2 in itertools.combinations(others, b):
            m2_mask = to_mask(m2)
            ok = False
            for c in covers:
                if c & m2_mask:
                    continue
                rest = full & ~c
                if any(comp & m2_mask == m2_mask for comp in _mask_components(adj, rest)):
                    ok = True
                    break
            if not ok:
                return frozenset(m1), frozenset(m2)
    return None


def is_ab_linked(g: Graph, a: int, b: int) -> bool:
    return find_unlinked_sets(g, a, b) is None


# -- merges and spanning trees ----------------------------------------------


def merge_vertices(
    g: Graph, parts: Sequence[Iterable[int]]
) -> tuple[Graph, tuple[frozenset[int], ...]]:
    """Contract each part to one vertex (vertex ``i`` of the result is ``parts[i]``)."""
    sets = tuple(frozenset(p) for p in parts)
    owner: dict[int, int] = {}
    for idx, part in enumerate(sets):
        if not part:
            raise GraphError("merge parts must be nonempty")
        if not is_connected_subset(g, part):
            raise GraphError(f"merge part {sorted(part)} is not connected")
        for v in part:
            if v in owner:
                raise GraphError(f"vertex {v} appears in two merge parts")
            if not 0 <= v < g.m:
                raise GraphError(f"vertex {v} out of range")
            owner[v] = idx
    if len(owner) != g.m:
        raise GraphError("merge parts must cover every vertex")
    edges = frozenset(
        (min(owner[i], owner[j]), max(owner[i], owner[j]))
        for i, j in g.edges
        if owner[i] != owner[j]
    )
    return Graph(len(sets), edges), sets


def bfs_spanning_tree(g: Graph, root: int = 0) -> Graph:
    if not g.is_connected():
        raise GraphError("spanning tree requires a connected graph")
    seen = {root}
    queue = deque([root])
    edges = set()
    while queue:
        v = queue.popleft()
        for w in g.adjacency[v]:
            if w not in seen:
                seen.add(w)
                edges.add((min(v, w), max(v, w)))
                queue.append(w)
    return Graph(g.m, frozenset(edges))


def tree_edge_cut_partitions(tree: Graph, parts: int) -> list[tuple[frozenset[int], ...]]:
    """Partitions of a tree obtained by deleting ``parts - 1`` of its edges,
    each sorted by smallest vertex."""
    edges = tree.sorted_edges()
    out = []
    for cut in itertools.combinations(range(len(edges)), parts - 1):
        removed = set(cut)
        parent = list(range(tree.m))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for idx, (i, j) in enumerate(edges):
            if idx not in removed:
                parent[find(i)] = find(j)
        groups: dict[int, set[int]] = {}
        for x in range(tree.m):
            groups.setdefault(find(x), set()).add(x)
        out.append(tuple(sorted((frozenset(s) for s in groups.values()), key=min)))
    return out
