"""Exhaustive ground truth: MMS, G-MMS, price-of-connectivity ratios and
existence of fair connected allocations.

All searches are exact and deterministic.  Each is guarded by a size cap
(see ``graphfair.caps``) and raises ``CapExceeded`` beyond it.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .caps import CapExceeded, get_cap
from .checkers import Criterion, check
from .graph import (
    Graph,
    _mask_components,
    _mask_connected,
    bits,
    complete_graph,
    connected_sets_containing,
    to_mask,
    tree_edge_cut_partitions,
)
from .valuation import AdditiveValuation, Allocation, Instance

__all__ = [
    "PartitionWitness",
    "PocSearchResult",
    "exact_mms",
    "exact_gmms",
    "gmms_tree_edge_cuts",
    "poc_ratio",
    "poc_search",
    "connected_partitions",
    "exists_connected_allocation",
    "guaranteed_efk_bruteforce",
]


@dataclass(frozen=True)
class PartitionWitness:
    value: Fraction
    partition: tuple[frozenset[int], ...]


def _witness(value, masks, n) -> PartitionWitness:
    parts = [frozenset(bits(mask)) for mask in masks]
    parts += [frozenset()] * (n - len(parts))
    return PartitionWitness(Fraction(value), tuple(parts))


def _small_m_witness(m: int, n: int) -> PartitionWitness:
    # fewer goods than agents: singletons plus empty bundles, worth 0
    return _witness(0, [1 << g for g in range(m)], n)


# -- MMS ------------------------------------------------------------------------


def exact_mms(u, n: int) -> PartitionWitness:
    """Maximin share of ``u`` for ``n`` agents over unconstrained partitions.

    ``n = 2`` scans the ``2^(m-1)`` bipartitions that put good 0 in the first
    part.  ``n >= 3`` assigns goods (most valuable first for additive ``u``)
    to bundles with symmetry breaking, bound pruning and, for additive ``u``,
    memoisation of already-seen bundle-value multisets.
    """
    m = u.m
    if n < 1:
        raise ValueError("need at least one agent")
    if n == 1:
        return _witness(u.value_mask((1 << m) - 1), [(1 << m) - 1], 1)
    if m < n:
        return _small_m_witness(m, n)
    if n == 2:
        return _mms_two(u)
    cap = get_cap("mms")
    if m > cap:
        raise CapExceeded("exact_mms", m, cap)
    return _mms_multiway(u, n)


def _mms_two(u) -> PartitionWitness:
    m = u.m
    cap = get_cap("mms2")
    if m > cap:
        raise CapExceeded("exact_mms", m, cap)
    full = (1 << m) - 1
    additive = isinstance(u, AdditiveValuation)
    total = u.value_mask(full)
    rest_goods = m - 1
    # sums[s] = value of the goods 1..m-1 selected by s
    if additive:
        sums = [Fraction(0)] * (1 << rest_goods)
        for s in range(1, 1 << rest_goods):
            low = s & -s
            sums[s] = sums[s ^ low] + u.values[low.bit_length()]
    best, best_mask = Fraction(-1), 0
    for s in range(1 << rest_goods):
        mask = (s << 1) | 1
        if additive:
            first = sums[s] + u.values[0]
            second = total - first
        else:
            first = u.value_mask(mask)
            second = u.value_mask(full & ~mask)
        value = first if first < second else second
        if value > best:
            best, best_mask = value, mask
    return _witness(best, [best_mask, full & ~best_mask], 2)


def _mms_multiway(u, n: int) -> PartitionWitness:
    m = u.m
    additive = isinstance(u, AdditiveValuation)
    if additive:
        order = sorted(range(m), key=lambda g: (-u.values[g], g))
        total = u.total()
        suffix = [Fraction(0)] * (m + 1)
        for pos in range(m - 1, -1, -1):
            suffix[pos] = suffix[pos + 1] + u.values[order[pos]]
    else:
        order = list(range(m))
    best = [Fraction(-1), None]
    seen: set = set()
    masks = [0] * n
    values = [Fraction(0)] * n

    def recurse(pos: int, used: int) -> None:
        if pos == m:
            if additive:
                low = min(values)
            else:
                low = min(u.value_mask(x) for x in masks)
            if low > best[0]:
                best[0] = low
                best[1] = list(masks)
            return
        if additive:
            # every bundle ends at most at (its value + all unassigned goods),
            # and the poorest bundle at most at an equal share
            remaining = suffix[pos]
            if min(values) + remaining <= best[0] or total / n <= best[0]:
                return
            key = (pos, tuple(sorted(values)))
            if key in seen:
                return
            seen.add(key)
        g = order[pos]
        for j in range(min(used + 1, n)):
            masks[j] |= 1 << g
            if additive:
                values[j] += u.values[g]
            recurse(pos + 1, max(used, j + 1))
            masks[j] &= ~(1 << g)
            if additive:
                values[j] -= u.values[g]

    recurse(0, 0)
    return _witness(best[0], best[1], n)


# -- G-MMS ----------------------------------------------------------------------


def exact_gmms(g: Graph, u, n: int) -> PartitionWitness:
    """Graph maximin share: best worst-bundle value over connected ``n``-partitions.

    Dynamic programming over the still-unassigned vertex set: the bundle
    holding its lowest vertex is chosen among the connected sets containing
    that vertex whose removal leaves at most ``k - 1`` components.
    """
    m = g.m
    if u.m != m:
        raise ValueError("valuation and graph disagree on the number of goods")
    if n == 1:
        return _witness(u.value_mask(g.full_mask), [g.full_mask], 1)
    if m < n:
        return _small_m_witness(m, n)
    cap = get_cap("gmms")
    if m > cap:
        raise CapExceeded("exact_gmms", m, cap)
    adj = g.adj_masks
    memo: dict[tuple[int, int], tuple[Fraction, tuple[int, ...]] | None] = {}

    def best_split(rest: int, k: int):
        key = (rest, k)
        if key in memo:
            return memo[key]
        if k == 1:
            result = (u.value_mask(rest), (rest,)) if _mask_connected(adj, rest) else None
            memo[key] = result
            return result
        result = None
        root = rest & -rest
        for part in connected_sets_containing(adj, root, rest):
            remainder = rest & ~part
            if bin(remainder).count("1") < k - 1:
                continue
            part_value = u.value_mask(part)
            if result is not None and part_value <= result[0]:
                continue
            if len(_mask_components(adj, remainder)) > k - 1:
                continue
            sub = best_split(remainder, k - 1)
            if sub is None:
                continue
            value = min(part_value, sub[0])
            if result is None or value > result[0]:
                result = (value, (part,) + sub[1])
        memo[key] = result
        return result

    found = best_split(g.full_mask, n)
    if found is None:
        raise ValueError("graph has no connected partition (is it connected?)")
    return _witness(found[0], found[1], n)


def gmms_tree_edge_cuts(tree: Graph, u, n: int) -> PartitionWitness:
    """G-MMS of a tree by deleting every choice of ``n - 1`` of its ``m - 1`` edges."""
    if not tree.is_tree():
        raise ValueError("gmms_tree_edge_cuts needs a tree")
    m = tree.m
    if n == 1:
        return _witness(u.value_mask(tree.full_mask), [tree.full_mask], 1)
    if m < n:
        return _small_m_witness(m, n)
    best, best_parts = Fraction(-1), None
    for parts in tree_edge_cut_partitions(tree, n):
        value = min(u.value(p) for p in parts)
        if value > best:
            best, best_parts = value, [to_mask(p) for p in parts]
    return _witness(best, best_parts, n)


def poc_ratio(g: Graph, u, n: int) -> Fraction:
    """``G-MMS / MMS`` for one valuation, with ``0/0`` read as 1."""
    mms = exact_mms(u, n).value
    if mms == 0:
        return Fraction(1)
    return exact_gmms(g, u, n).value / mms


# -- connected partitions and allocations ----------------------------------------


@lru_cache(maxsize=256)
def _connected_partition_masks(g: Graph, parts: int) -> tuple[tuple[int, ...], ...]:
    adj = g.adj_masks
    out: list[tuple[int, ...]] = []

    def rec(rest: int, k: int, acc: tuple[int, ...]) -> None:
        if k == 1:
            if rest and _mask_connected(adj, rest):
                out.append(acc + (rest,))
            return
        root = rest & -rest
        for part in connected_sets_containing(adj, root, rest):
            remainder = rest & ~part
            if bin(remainder).count("1") < k - 1:
                continue
            if len(_mask_components(adj, remainder)) > k - 1:
                continue
            rec(remainder, k - 1, acc + (part,))

    if 1 <= parts <= g.m:
        rec(g.full_mask, parts, ())
    return tuple(out)


def connected_partitions(g: Graph, parts: int) -> list[tuple[frozenset[int], ...]]:
    """All partitions of the vertices into ``parts`` nonempty connected sets
    (unordered; the first set holds vertex 0)."""
    if g.m > get_cap("gmms"):
        raise CapExceeded("connected_partitions", g.m, get_cap("gmms"))
    return [
        tuple(frozenset(bits(mask)) for mask in p)
        for p in _connected_partition_masks(g, parts)
    ]


def _assignments(parts: tuple[int, ...], n: int):
    padded = list(parts) + [0] * (n - len(parts))
    seen = set()
    for perm in itertools.permutations(range(n)):
        bundles = tuple(padded[p] for p in perm)
        if bundles not in seen:
            seen.add(bundles)
            yield bundles


def exists_connected_allocation(inst: Instance, predicate: Criterion) -> Allocation | None:
    """First connected allocation (in a fixed enumeration order) meeting ``predicate``.

    Allocations with empty bundles are included, so ``None`` certifies that
    no connected allocation at all satisfies the predicate.
    """
    g = inst.graph
    if g.m > get_cap("gmms"):
        raise CapExceeded("exists_connected_allocation", g.m, get_cap("gmms"))
    mms_values = None
    if predicate.kind == "mms":
        mms_values = [exact_mms(u, inst.n).value for u in inst.valuations]
    for used in range(min(inst.n, g.m), 0, -1):
        for parts in _connected_partition_masks(g, used):
            for bundles in _assignments(parts, inst.n):
                alloc = Allocation(tuple(frozenset(bits(b)) for b in bundles))
                if check(inst, alloc, predicate, mms_values=mms_values).passed:
                    return alloc
    return None


def guaranteed_efk_bruteforce(g: Graph) -> int:
    """Smallest ``k`` such that every identical binary valuation pair on ``g``
    admits a connected EFk allocation for two agents."""
    cap = get_cap("binary")
    if g.m > cap:
        raise CapExceeded("guaranteed_efk_bruteforce", g.m, cap)
    k = 0
    for ones in range(1 << g.m):
        values = tuple(ones >> v & 1 for v in range(g.m))
        inst = Instance.identical(g, values, 2)
        while exists_connected_allocation(inst, Criterion("efk", k=k)) is None:
            k += 1
    return k


# -- PoC search -----------------------------------------------------------------


@dataclass(frozen=True)
class PocSearchResult:
    """Smallest ``G-MMS / MMS`` ratio found.  Always an upper bound on
    ``PoC(g, n)``; it equals the infimum only over the searched value grid."""

    ratio: Fraction
    witness: AdditiveValuation
    exhaustive: bool
    evaluations: int

    def __iter__(self):
        return iter((self.ratio, self.witness))


class _RatioEvaluator:
    """Vectorised G-MMS and MMS for integer value vectors."""

    def __init__(self, g: Graph, n: int):
        self.m = g.m
        self.n = n
        self.connected = self._indicator(_connected_partition_masks(g, n))
        self.unconstrained = self._indicator(_connected_partition_masks(complete_graph(g.m), n))

    def _indicator(self, partitions) -> np.ndarray:
        rows = np.zeros((len(partitions) * self.n, self.m), dtype=np.int64)
        for p, parts in enumerate(partitions):
            for j, mask in enumerate(parts):
                for v in bits(mask):
                    rows[p * self.n + j, v] = 1
        return rows

    def _maximin(self, indicator: np.ndarray, batch: np.ndarray) -> np.ndarray:
        sums = indicator @ batch.T  # (partitions * n, batch)
        sums = sums.reshape(-1, self.n, batch.shape[0])
        return sums.min(axis=1).max(axis=0)

    def ratios(self, batch: np.ndarray) -> list[Fraction]:
        gm = self._maximin(self.connected, batch)
        mm = self._maximin(self.unconstrained, batch)
        return [Fraction(1) if b == 0 else Fraction(int(a), int(b)) for a, b in zip(gm, mm)]


def poc_search(
    g: Graph, n: int, max_value: int, budget: int, seed: int = 0
) -> PocSearchResult:
    """Minimise ``poc_ratio`` over integer valuations with entries in ``[0, max_value]``.

    The whole grid is enumerated when it has at most ``min(budget, 10**7)``
    points; otherwise seeded random restarts with single-coordinate hill
    climbing spend ``budget`` evaluations.
    """
    m = g.m
    if m > get_cap("gmms"):
        raise CapExceeded("poc_search", m, get_cap("gmms"))
    if n < 2 or m < n:
        zero = AdditiveValuation((0,) * m)
        return PocSearchResult(Fraction(1), zero, True, 0)
    evaluator = _RatioEvaluator(g, n)
    grid = (max_value + 1) ** m
    best_ratio = Fraction(2)
    best_vec: tuple[int, ...] = (0,) * m
    evaluations = 0

    def consider(batch: np.ndarray) -> None:
        nonlocal best_ratio, best_vec, evaluations
        for vec, r in zip(batch, evaluator.ratios(batch)):
            evaluations += 1
            if r < best_ratio:
                best_ratio, best_vec = r, tuple(int(x) for x in vec)

    exhaustive = grid <= min(budget, 10**7)
    if exhaustive:
        chunk = []
        for vec in itertools.product(range(max_value + 1), repeat=m):
            chunk.append(vec)
            if len(chunk) == 4096:
                consider(np.array(chunk, dtype=np.int64))
                chunk = []
        if chunk:
            consider(np.array(chunk, dtype=np.int64))
    else:
        rng = random.Random(seed)
        while evaluations < budget:
            current = np.array([rng.randint(0, max_value) for _ in range(m)], dtype=np.int64)
            consider(current[None, :])
            current_ratio = evaluator.ratios(current[None, :])[0]
            improved = True
            while improved and evaluations < budget:
                improved = False
                neighbours = []
                for v in range(m):
                    for delta in (-1, 1):
                        x = current[v] + delta
                        if 0 <= x <= max_value:
                            nb = current.copy()
                            nb[v] = x
                            neighbours.append(nb)
                batch = np.array(neighbours, dtype=np.int64)
                consider(batch)
                ratios = evaluator.ratios(batch)
                idx = min(range(len(ratios)), key=lambda i: ratios[i])
                if ratios[idx] < current_ratio:
                    current, current_ratio = batch[idx], ratios[idx]
                    improved = True

    witness = AdditiveValuation(best_vec)
    # the reported ratio must be reproducible by the exact oracles
    exact = poc_ratio(g, witness, n)
    if exact != best_ratio:
        raise AssertionError(f"vectorised ratio {best_ratio} disagrees with exact {exact}")
    return PocSearchResult(best_ratio, witness, exhaustive, evaluations)
