"""Named extremal instances and seeded random generators.

``catalog(name, **params)`` builds each tight example as an ``Instance``;
``CATALOG`` lists the names with their parameters and defaults.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from typing import Callable

import networkx as nx

from .graph import (
    Graph,
    GraphError,
    complete_bipartite_graph,
    components,
    find_unlinked_sets,
    max_components_single_deletion,
    path_graph,
    star_graph,
    vertex_connectivity,
    wheel_graph,
)
from .valuation import AdditiveValuation, Instance, TabulatedValuation

__all__ = [
    "CATALOG",
    "catalog",
    "l5_graph",
    "fig4_graph",
    "random_graph",
    "random_additive",
    "random_tabulated",
    "efk_test_graphs",
    "small_connected_graphs",
]


def l5_graph() -> Graph:
    """``K5`` without the disjoint edges ``(1, 3)`` and ``(2, 4)``."""
    missing = {(1, 3), (2, 4)}
    return Graph.from_edges(5, [e for e in itertools.combinations(range(5), 2) if e not in missing])


def fig4_graph() -> Graph:
    """Nine vertices whose block tree has a four-block spine
    {0,1} - {1,2} - {2,3,4} - {4,5}, the edge {1,6} hanging off spine cut
    vertex 1, and the edges {3,7}, {3,8} hanging off vertex 3, which lies
    in a spine block without being on the spine."""
    edges = [(0, 1), (1, 2), (2, 3), (2, 4), (3, 4), (4, 5), (1, 6), (3, 7), (3, 8)]
    return Graph.from_edges(9, edges)


# -- catalog ------------------------------------------------------------------


def _fig2_wheel() -> Instance:
    # rim 0..7 in cyclic order, hub 8
    return Instance.identical(wheel_graph(8), [3, 2, 1, 0, 0, 0, 0, 2, 0], 2)


def _fig3_l5() -> Instance:
    return Instance.identical(l5_graph(), [0, 2, 1, 2, 3], 2)


def _thm3_cut(k: int = 3, g: Graph | None = None) -> Instance:
    """Value ``k`` on a vertex whose deletion leaves ``k`` components and 1 on
    the lowest vertex of each component; ``g`` defaults to the star ``K_{1,k}``."""
    if g is None:
        if k < 2:
            raise ValueError("thm3_cut needs k >= 2")
        g = star_graph(k)
    k, v = max_components_single_deletion(g)
    values = [0] * g.m
    values[v] = k
    for comp in components(g, [x for x in g.vertices if x != v]):
        values[min(comp)] = 1
    return Instance.identical(g, values, 2)


def _thm9_matching(m: int = 6, matching: tuple = ((0, 1),)) -> Instance:
    """``K_m`` minus a nonempty matching; the first removed edge is ``(v1, v2)``."""
    if m < 3:
        raise ValueError("thm9_matching needs m >= 3")
    removed = {tuple(sorted(e)) for e in matching}
    used = [v for e in removed for v in e]
    if not removed or len(used) != len(set(used)) or any(not 0 <= v < m for v in used):
        raise ValueError("matching must be a nonempty set of disjoint edges inside range(m)")
    g = Graph.from_edges(m, [e for e in itertools.combinations(range(m), 2) if e not in removed])
    if m == 5 and len(removed) == 2:
        raise ValueError("K5 minus two disjoint edges is L5, which is excluded")
    v1, v2 = min(removed)
    v3 = min(v for v in range(m) if v not in (v1, v2))
    values = [1] * m
    values[v1] = values[v2] = m - 2
    values[v3] = m - 1
    return Instance.identical(g, values, 2)


def _thm12_star(n: int = 2, m: int = 4) -> Instance:
    """Star with centre 0: centre and ``n - 2`` leaves worth ``m - n + 1``,
    the other ``m - n + 1`` leaves worth 1."""
    if not 2 <= n <= m:
        raise ValueError("thm12_star needs 2 <= n <= m")
    heavy = m - n + 1
    values = [heavy] + [heavy] * (n - 2) + [1] * (m - n + 1)
    return Instance.identical(star_graph(m - 1), values, n)


def _thm16_path(n: int = 2, m: int = 3) -> Instance:
    """Alternating ``1, h, 1, ..., h, 1`` on a prefix of the path: ``h = n``
    on ``2n - 1`` vertices when ``m >= 2n - 1``, otherwise ``h = m - n + 1``
    on ``2m - 2n + 1`` vertices followed by ``h`` on every remaining vertex."""
    if not 1 <= n <= m:
        raise ValueError("thm16_path needs 1 <= n <= m")
    if m >= 2 * n - 1:
        head = [1 if i % 2 == 0 else n for i in range(2 * n - 1)]
        values = head + [0] * (m - len(head))
    else:
        h = m - n + 1
        head = [1 if i % 2 == 0 else h for i in range(2 * m - 2 * n + 1)]
        values = head + [h] * (m - len(head))
    return Instance.identical(path_graph(m), values, n)


def _prop7_pairs(g: Graph | None = None, a: int | None = None, b: int | None = None,
                 c: int | None = None, d: int | None = None) -> Instance:
    """``u(a) = u(b) = 2``, ``u(c) = 3``, ``u(d) = 1``; without explicit pairs
    the first pair pattern that cannot be linked is used (``g`` defaults to L5)."""
    g = l5_graph() if g is None else g
    if None in (a, b, c, d):
        found = find_unlinked_sets(g, 2, 2)
        if found is None:
            raise ValueError("graph is 2-linked; pass a, b, c, d explicitly")
        (a, b), (c, d) = sorted(found[0]), sorted(found[1])
    if len({a, b, c, d}) != 4:
        raise ValueError("a, b, c, d must be distinct")
    values = [0] * g.m
    values[a] = values[b] = 2
    values[c], values[d] = 3, 1
    return Instance.identical(g, values, 2)


def _prop9_linked(g: Graph | None = None, k: int = 2) -> Instance:
    """``u(a1) = u(a2) = k``, ``u(b1) = k + 1``, ``u(b2..bk) = 1`` on the first
    pair/``k``-set that cannot be linked."""
    g = l5_graph() if g is None else g
    found = find_unlinked_sets(g, 2, k)
    if found is None:
        raise ValueError(f"graph is (2,{k})-linked")
    pair, group = sorted(found[0]), sorted(found[1])
    values = [0] * g.m
    values[pair[0]] = values[pair[1]] = k
    values[group[0]] = k + 1
    for v in group[1:]:
        values[v] = 1
    return Instance.identical(g, values, 2)


def _prop20_star(m: int = 5) -> Instance:
    if m < 3:
        raise ValueError("prop20_star needs m >= 3")
    return Instance.identical(star_graph(m - 1), [1] * m, 2)


def _thm21_efx(g: Graph | None = None) -> Instance:
    """2 on the ends of the lowest missing edge, 3 on the lowest other vertex
    and ``1/(2m)`` everywhere else."""
    g = path_graph(4) if g is None else g
    missing = next(
        ((i, j) for i, j in itertools.combinations(range(g.m), 2) if not g.has_edge(i, j)), None
    )
    if missing is None:
        raise ValueError("thm21_efx needs a non-complete graph")
    eps = Fraction(1, 2 * g.m)
    values = [eps] * g.m
    values[missing[0]] = values[missing[1]] = Fraction(2)
    v3 = min(v for v in g.vertices if v not in missing)
    values[v3] = Fraction(3)
    return Instance.identical(g, values, 2)


def _fig6_tree() -> Instance:
    # v = 0 with leaves v3 = 1, v4 = 2 and branch v1 = 3, v2 = 4, then 5
    g = Graph.from_edges(6, [(0, 1), (0, 2), (0, 3), (3, 4), (4, 5)])
    return Instance.identical(g, [2, 2, 2, 3, 4, 0], 3)


def _thm22_deg4(g: Graph | None = None) -> Instance:
    """1 on a vertex of degree at least 4 and four of its neighbours."""
    g = star_graph(4) if g is None else g
    v = next((x for x in g.vertices if g.degree(x) >= 4), None)
    if v is None:
        raise ValueError("thm22_deg4 needs a vertex of degree at least 4")
    values = [0] * g.m
    values[v] = 1
    for w in g.adjacency[v][:4]:
        values[w] = 1
    return Instance.identical(g, values, 3)


def _fig7_k2b(b: int = 5) -> Instance:
    """``K_{2,b}``: 2 on both left vertices, 1 on the first four right vertices."""
    if b < 4:
        raise ValueError("fig7_k2b needs b >= 4")
    values = [2, 2] + [1] * 4 + [0] * (b - 4)
    return Instance.identical(complete_bipartite_graph(2, b), values, 3)


CATALOG: dict[str, Callable[..., Instance]] = {
    "fig2_wheel": _fig2_wheel,
    "fig3_L5": _fig3_l5,
    "thm3_cut": _thm3_cut,
    "thm9_matching": _thm9_matching,
    "thm12_star": _thm12_star,
    "thm16_path": _thm16_path,
    "prop7_pairs": _prop7_pairs,
    "prop9_linked": _prop9_linked,
    "prop20_star": _prop20_star,
    "thm21_efx": _thm21_efx,
    "fig6_tree": _fig6_tree,
    "thm22_deg4": _thm22_deg4,
    "fig7_k2b": _fig7_k2b,
}


def catalog(name: str, **params) -> Instance:
    if name not in CATALOG:
        raise KeyError(f"unknown catalog instance {name!r}; known: {', '.join(CATALOG)}")
    return CATALOG[name](**params)


# -- random generators ------------------------------------------------------------


def _relabel(m: int, edges, rng: random.Random) -> Graph:
    perm = list(range(m))
    rng.shuffle(perm)
    return Graph.from_edges(m, {tuple(sorted((perm[i], perm[j]))) for i, j in edges})


def _random_tree_edges(m: int, rng: random.Random) -> list[tuple[int, int]]:
    return [(rng.randrange(v), v) for v in range(1, m)]


def random_graph(kind: str, size, seed: int = 0) -> Graph:
    """Seeded random graph of the given kind.

    ``size`` is ``m`` for every kind except ``complete_bipartite``, which
    takes ``(a, b)``.  Biconnected graphs start from a random cycle and grow
    by random ears; connected graphs are random trees plus random chords.
    """
    rng = random.Random(seed)
    if kind == "complete_bipartite":
        a, b = size
        if a < 1 or b < 1:
            raise ValueError("complete_bipartite needs a, b >= 1")
        return complete_bipartite_graph(a, b)
    m = int(size)
    if m < 1:
        raise ValueError("need at least one vertex")
    if kind == "tree":
        return _relabel(m, _random_tree_edges(m, rng), rng)
    if kind == "path":
        return _relabel(m, [(i, i + 1) for i in range(m - 1)], rng)
    if kind == "star":
        center = rng.randrange(m)
        return Graph.from_edges(m, [tuple(sorted((center, v))) for v in range(m) if v != center])
    if kind == "connected":
        edges = set(_random_tree_edges(m, rng))
        p = rng.choice((0.15, 0.3, 0.5))
        for i, j in itertools.combinations(range(m), 2):
            if (i, j) not in edges and rng.random() < p:
                edges.add((i, j))
        return _relabel(m, edges, rng)
    if kind == "biconnected":
        if m < 3:
            raise ValueError("biconnected graphs need m >= 3")
        first = rng.randint(3, m)
        edges = {tuple(sorted((i, (i + 1) % first))) for i in range(first)}
        used = first
        while used < m:
            inner = rng.randint(1, m - used)
            a, b = rng.sample(range(used), 2)
            chain = [a, *range(used, used + inner), b]
            edges.update(tuple(sorted(e)) for e in zip(chain, chain[1:]))
            used += inner
        for _ in range(rng.randint(0, m)):
            i, j = rng.sample(range(m), 2)
            edges.add((min(i, j), max(i, j)))
        g = _relabel(m, edges, rng)
        if vertex_connectivity(g) < 2:
            raise GraphError("generated graph is not biconnected; this is a bug")
        return g
    raise ValueError(f"unknown graph kind {kind!r}")


def random_additive(m: int, seed: int, max_value: int = 10) -> AdditiveValuation:
    rng = random.Random(seed)
    return AdditiveValuation(tuple(rng.randint(0, max_value) for _ in range(m)))


def random_tabulated(m: int, seed: int, max_value: int = 10) -> TabulatedValuation:
    """Random set function made monotone by taking, bundle by bundle, the
    maximum over its one-smaller subsets."""
    rng = random.Random(seed)
    table = [0] + [rng.randint(0, max_value) for _ in range(1, 1 << m)]
    for mask in range(1, 1 << m):
        for g in range(m):
            if mask >> g & 1:
                table[mask] = max(table[mask], table[mask & ~(1 << g)])
    return TabulatedValuation(m, tuple(Fraction(x) for x in table))


# -- fixed graph families -----------------------------------------------------------


def _caterpillar(spine: int, legs: tuple[int, ...]) -> Graph:
    edges = [(i, i + 1) for i in range(spine - 1)]
    nxt = spine
    for pos, count in enumerate(legs):
        for _ in range(count):
            edges.append((pos, nxt))
            nxt += 1
    return Graph.from_edges(nxt, edges)


def _cycle_with_pendants(cycle: int, pendants: tuple[int, ...]) -> Graph:
    edges = [(i, (i + 1) % cycle) for i in range(cycle)]
    nxt = cycle
    for v in pendants:
        edges.append((v, nxt))
        nxt += 1
    return Graph.from_edges(nxt, [tuple(sorted(e)) for e in edges])


def efk_test_graphs() -> list[tuple[str, Graph]]:
    """Named connected graphs with at most 7 vertices covering paths, stars,
    caterpillars, cycles with pendants and block-tree composites."""
    out: list[tuple[str, Graph]] = []
    for m in (1, 2, 3, 5, 7):
        out.append((f"path{m}", path_graph(m)))
    for leaves in (3, 4, 5, 6):
        out.append((f"star{leaves}", star_graph(leaves)))
    for spine, legs in [
        (3, (1, 1, 1)), (3, (0, 2, 0)), (3, (2, 0, 2)), (4, (1, 0, 2, 0)),
        (2, (2, 2)), (3, (0, 3, 0)), (4, (0, 1, 1, 0)), (3, (1, 2, 1)),
    ]:
        out.append((f"caterpillar{spine}-{''.join(map(str, legs))}", _caterpillar(spine, legs)))
    for cycle, pendants in [
        (3, (0,)), (3, (0, 1)), (3, (0, 1, 2)), (4, (0,)), (4, (0, 2)),
        (4, (0, 0)), (4, (0, 0, 0)), (5, (0, 2)), (3, (0, 0, 0, 0)), (5, (0, 0)),
    ]:
        name = f"cycle{cycle}+" + ",".join(map(str, pendants))
        out.append((name, _cycle_with_pendants(cycle, pendants)))
    composites = {
        # edge, edge, triangle spine with a pendant off a spine cut vertex
        # and one off the triangle
        "composite-a": [(0, 1), (1, 2), (2, 3), (3, 4), (2, 4), (1, 5), (3, 6)],
        # two triangles sharing a cut vertex, with two pendants on a non-shared vertex
        "composite-b": [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4), (4, 5), (4, 6)],
        # bowtie with a pendant on the shared vertex
        "composite-c": [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4), (2, 5)],
        # square with a triangle hanging off a corner and a pendant on the triangle
        "composite-d": [(0, 1), (1, 2), (2, 3), (0, 3), (3, 4), (4, 5), (3, 5), (5, 6)],
        # spider with legs of length 2, 2, 2
        "spider-222": [(0, 1), (1, 2), (0, 3), (3, 4), (0, 5), (5, 6)],
        "k4": list(itertools.combinations(range(4), 2)),
        "k23": [(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)],
    }
    for name, edges in composites.items():
        out.append((name, Graph.from_edges(1 + max(max(e) for e in edges), edges)))
    return out


def small_connected_graphs(max_m: int = 6) -> list[Graph]:
    """One connected graph per isomorphism class on ``3..max_m`` vertices
    (``max_m <= 7``), in graph-atlas order."""
    if max_m > 7:
        raise ValueError("the graph atlas stops at 7 vertices")
    out = []
    for h in nx.graph_atlas_g():
        if 3 <= h.number_of_nodes() <= max_m and nx.is_connected(h):
            out.append(Graph.from_edges(h.number_of_nodes(), h.edges()))
    return out
