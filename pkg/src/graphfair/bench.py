"""Reproduction suite: every acceptance criterion as a function returning
``(passed, detail)``, plus the price-of-connectivity summary table.

All comparisons are exact ``Fraction`` comparisons.
"""

from __future__ import annotations

import random
import time
from fractions import Fraction
from typing import Callable

from .checkers import Criterion, envy_up_to, is_connected_allocation, is_efk, is_ips_allocation, mms_ratio_report
from .envy import double_round_robin, efk_two_allocate, envy_cycle_bipartite, optimal_efk_two
from .graph import complete_bipartite_graph, is_ab_linked, max_components_single_deletion, star_graph, vertex_connectivity
from .instances import catalog, efk_test_graphs, random_additive, random_graph, random_tabulated, small_connected_graphs
from .mms import (
    allocate_any_graph,
    allocate_path_ips,
    allocate_star,
    bipartition_biconnected,
    bipartition_cut_vertex,
    ips_threshold,
    subset_window,
)
from .oracles import exact_gmms, exact_mms, exists_connected_allocation, gmms_tree_edge_cuts, guaranteed_efk_bruteforce, poc_ratio
from .valuation import Instance

__all__ = ["CRITERIA", "run_criterion", "run_all", "poc_table", "format_table"]

Result = tuple[bool, str]


def _fail(msg: str) -> Result:
    return False, msg


def wheel_values() -> Result:
    inst = catalog("fig2_wheel")
    g, u = inst.graph, inst.valuations[0]
    mms, gmms = exact_mms(u, 2).value, exact_gmms(g, u, 2).value
    ratio = poc_ratio(g, u, 2)
    s, t = bipartition_biconnected(g, u)
    low = min(u.value(s), u.value(t))
    ok = (mms, gmms, ratio, low) == (4, 3, Fraction(3, 4), 3)
    return ok, f"MMS={mms} G-MMS={gmms} ratio={ratio} biconnected-split min={low}"


def l5_values() -> Result:
    inst = catalog("fig3_L5")
    g, u = inst.graph, inst.valuations[0]
    kappa = vertex_connectivity(g)
    linked = is_ab_linked(g, 2, 2)
    mms, gmms = exact_mms(u, 2).value, exact_gmms(g, u, 2).value
    ok = kappa == 3 and not linked and mms == 4 and gmms == 3
    return ok, f"connectivity={kappa} (2,2)-linked={linked} MMS={mms} G-MMS={gmms}"


def cut_vertex_bound(trials: int = 100) -> Result:
    for seed in range(trials):
        rng = random.Random(seed)
        m = rng.randint(2, 10)
        g = random_graph("tree", m, seed)
        u = random_additive(m, 1000 + seed)
        k, _ = max_components_single_deletion(g)
        s, t = bipartition_cut_vertex(g, u)
        low = min(u.value(s), u.value(t))
        mms = exact_mms(u, 2).value
        if low * k < mms:
            return _fail(f"seed {seed}: min part {low} < MMS {mms} / {k}")
    for k in range(2, 7):
        u_inst = catalog("thm3_cut", k=k)
        u = u_inst.valuations[0]
        s, t = bipartition_cut_vertex(u_inst.graph, u)
        low = min(u.value(s), u.value(t))
        if low * k != exact_mms(u, 2).value:
            return _fail(f"tight star k={k}: min part {low}")
    return True, f"{trials} random trees meet MMS/k; tight stars k=2..6 hit MMS/k exactly"


def biconnected_bound(trials: int = 100) -> Result:
    worst = Fraction(2)
    for seed in range(trials):
        rng = random.Random(seed)
        m = rng.randint(3, 10)
        g = random_graph("biconnected", m, seed)
        u = random_additive(m, 2000 + seed)
        s, t = bipartition_biconnected(g, u)
        low = min(u.value(s), u.value(t))
        mms = exact_mms(u, 2).value
        if 4 * low < 3 * mms:
            return _fail(f"seed {seed}: min part {low} < 3/4 * {mms}")
        if mms:
            worst = min(worst, low / mms)
    ok, detail = wheel_values()
    if not ok:
        return _fail("wheel equality case failed: " + detail)
    return True, f"{trials} random biconnected graphs >= 3/4 MMS (worst random ratio {worst}); wheel attains 3/4"


def star_bound() -> Result:
    for n in (2, 3):
        for m in range(n, 9):
            inst = catalog("thm12_star", n=n, m=m)
            target = Fraction(1, m - n + 1)
            ratio = poc_ratio(inst.graph, inst.valuations[0], n)
            if ratio != target:
                return _fail(f"n={n} m={m}: ratio {ratio} != {target}")
            got = min(mms_ratio_report(inst, allocate_star(inst)))
            if got < target:
                return _fail(f"n={n} m={m}: allocate_star ratio {got} < {target}")
    return True, "ratio = 1/(m-n+1) and allocate_star meets it for n in {2,3}, m = n..8"


def path_bound() -> Result:
    cases = 0
    for n in range(2, 5):
        for m in range(n, 10):
            inst = catalog("thm16_path", n=n, m=m)
            ratio = poc_ratio(inst.graph, inst.valuations[0], n)
            if ratio != ips_threshold(n, m):
                return _fail(f"n={n} m={m}: ratio {ratio} != IPS {ips_threshold(n, m)}")
            cases += 1
    return True, f"ratio = IPS(n, m) on {cases} path instances covering both ranges of m"


def path_ips(trials: int = 200) -> Result:
    for seed in range(trials):
        rng = random.Random(seed)
        n = rng.randint(1, 5)
        m = rng.randint(1, 12)
        g = random_graph("path", m, seed)
        rows = [random_additive(m, 3000 + 10 * seed + i).values for i in range(n)]
        inst = Instance.additive_from(g, rows)
        alloc, _ = allocate_path_ips(inst)
        if not is_connected_allocation(g, alloc) or not is_ips_allocation(inst, alloc):
            return _fail(f"seed {seed}: output not connected IPS")
    return True, f"{trials} random paths: connected and IPS for every agent"


def any_graph_bound(trials: int = 50) -> Result:
    n = 3
    for seed in range(trials):
        rng = random.Random(seed)
        m = rng.randint(3, 9)
        g = random_graph("connected", m, 4000 + seed)
        rows = [random_additive(m, 5000 + 10 * seed + i).values for i in range(n)]
        inst = Instance.additive_from(g, rows)
        alloc = allocate_any_graph(inst)
        if not is_connected_allocation(g, alloc):
            return _fail(f"seed {seed}: disconnected bundle")
        low = min(mms_ratio_report(inst, alloc))
        if low < Fraction(1, m - n + 1):
            return _fail(f"seed {seed}: ratio {low} < 1/{m - n + 1}")
    return True, f"{trials} random connected graphs, n=3: every agent >= MMS/(m-n+1)"


def efk_characterization(pairs: int = 20) -> Result:
    graphs = efk_test_graphs()
    for name, g in graphs:
        k = optimal_efk_two(g).k_star
        brute = guaranteed_efk_bruteforce(g)
        if k != brute:
            return _fail(f"{name}: k*={k} but brute force {brute}")
        for seed in range(pairs):
            vals = (random_tabulated(g.m, 6000 + 2 * seed), random_tabulated(g.m, 6001 + 2 * seed))
            inst = Instance(2, g, vals)
            alloc, kk = efk_two_allocate(inst)
            if not is_connected_allocation(g, alloc) or not is_efk(inst, alloc, kk):
                return _fail(f"{name} seed {seed}: allocation not connected EF{kk}")
    return True, f"{len(graphs)} graphs: k* = brute force; {pairs} monotone pairs each EF(k*)"


def star_efk() -> Result:
    for m in range(4, 9):
        k = optimal_efk_two(star_graph(m - 1)).k_star
        if k != m - 2:
            return _fail(f"m={m}: k*={k} != {m - 2}")
        found = exists_connected_allocation(catalog("prop20_star", m=m), Criterion("efk", k=m - 3))
        if found is not None:
            return _fail(f"m={m}: found EF{m - 3} allocation {found}")
    return True, "stars m=4..8: k* = m-2 and no connected EF(m-3) allocation"


def efx_impossible(max_m: int = 6) -> Result:
    count = 0
    for g in small_connected_graphs(max_m):
        if g.is_complete():
            continue
        count += 1
        found = exists_connected_allocation(catalog("thm21_efx", g=g), Criterion("efx"))
        if found is not None:
            return _fail(f"{g}: EFX allocation {found}")
    return True, f"all {count} non-complete connected graphs with 3..{max_m} vertices: no connected EFX"


def three_agent_ef1(triples: int = 20) -> Result:
    ef1 = Criterion("efk", k=1)
    for name, params in (("fig6_tree", {}), ("thm22_deg4", {}), *(("fig7_k2b", {"b": b}) for b in (4, 5, 6))):
        if exists_connected_allocation(catalog(name, **params), ef1) is not None:
            return _fail(f"{name} {params}: found an EF1 allocation")
    for seed in range(triples):
        g = complete_bipartite_graph(2, 3)
        inst = Instance(3, g, tuple(random_tabulated(5, 7000 + 3 * seed + i) for i in range(3)))
        if exists_connected_allocation(inst, ef1) is None:
            return _fail(f"K2,3 seed {seed}: no EF1 allocation")
        rng = random.Random(seed)
        a, b = rng.randint(3, 4), rng.randint(3, 4)
        g = complete_bipartite_graph(a, b)
        inst = Instance(3, g, tuple(random_tabulated(a + b, 7100 + 3 * seed + i) for i in range(3)))
        alloc = envy_cycle_bipartite(inst)
        if not is_connected_allocation(g, alloc) or not is_efk(inst, alloc, 1):
            return _fail(f"K{a},{b} seed {seed}: envy-cycle output not connected EF1")
    return True, f"fig6/deg-4/K2,b (b=4..6) have no EF1; K2,3 and K(a,b>=3) succeed on {triples} triples"


def bipartite_ef1(trials: int = 50) -> Result:
    for seed in range(trials):
        rng = random.Random(seed)
        n = rng.randint(1, 4)
        a, b = rng.randint(n, 4), rng.randint(n, 4)
        g = complete_bipartite_graph(a, b)
        tab = Instance(n, g, tuple(random_tabulated(a + b, 8000 + 5 * seed + i) for i in range(n)))
        alloc = envy_cycle_bipartite(tab)
        if not is_connected_allocation(g, alloc) or not is_efk(tab, alloc, 1):
            return _fail(f"envy-cycle seed {seed}: not connected EF1")
        add = Instance.additive_from(g, [random_additive(a + b, 9000 + 5 * seed + i).values for i in range(n)])
        alloc = double_round_robin(add)
        if not is_connected_allocation(g, alloc) or not is_efk(add, alloc, 1):
            return _fail(f"round-robin seed {seed}: not connected EF1")
    return True, f"{trials} instances each: envy-cycle (monotone) and double round-robin (additive) connected EF1"


def subset_window_check(trials: int = 500) -> Result:
    rng = random.Random(0)
    for t in range(trials):
        k = rng.randint(1, 12)
        while True:
            x = [Fraction(rng.randint(4, 12), 4) for _ in range(k)]
            s = sum(x)
            if 2 <= s <= 2 * k:
                break
        r = Fraction(rng.randint(0, int((s - 2) * 4)), 4)
        j = subset_window(x, r)
        total = sum((x[i] for i in j), Fraction(0))
        if not r <= total <= r + 2:
            return _fail(f"trial {t}: sum {total} outside [{r}, {r + 2}]")
        # an exhaustive search must agree that the window is reachable
        sums = {Fraction(0)}
        for v in x:
            sums |= {a + v for a in sums}
        if not any(r <= a <= r + 2 for a in sums):
            return _fail(f"trial {t}: exhaustive search finds no subset")
    return True, f"{trials} random inputs with k <= 12: sum in [r, r+2]"


def tree_oracle_pair(trials: int = 100) -> Result:
    for seed in range(trials):
        rng = random.Random(seed)
        m = rng.randint(1, 10)
        n = rng.randint(2, 4)
        g = random_graph("tree", m, 10000 + seed)
        u = random_additive(m, 11000 + seed)
        a, b = exact_gmms(g, u, n).value, gmms_tree_edge_cuts(g, u, n).value
        if a != b:
            return _fail(f"seed {seed}: DP {a} != edge cuts {b}")
    return True, f"{trials} random trees: both G-MMS oracles agree"


CRITERIA: list[tuple[int, str, Callable[[], Result]]] = [
    (1, "wheel: MMS 4, G-MMS 3, ratio 3/4, biconnected split 3", wheel_values),
    (2, "L5: connectivity 3, not (2,2)-linked, MMS 4, G-MMS 3", l5_values),
    (3, "connectivity 1: bipartition >= MMS/k, tight on stars", cut_vertex_bound),
    (4, "biconnected: bipartition >= 3/4 MMS", biconnected_bound),
    (5, "stars: ratio 1/(m-n+1), allocate_star meets it", star_bound),
    (6, "paths: ratio = IPS(n, m)", path_bound),
    (7, "paths: connected IPS allocation", path_ips),
    (8, "any graph: spanning-tree allocation >= MMS/(m-n+1)", any_graph_bound),
    (9, "two agents: k* = brute-force EFk, allocator EF(k*)", efk_characterization),
    (10, "stars: k* = m-2, no EF(m-3)", star_efk),
    (11, "non-complete graphs: no connected EFX", efx_impossible),
    (12, "three agents: EF1 failures and successes", three_agent_ef1),
    (13, "complete bipartite: envy-cycle and double round-robin EF1", bipartite_ef1),
    (14, "subset window lemma", subset_window_check),
    (15, "trees: DP G-MMS = edge-cut G-MMS", tree_oracle_pair),
]


def run_criterion(number: int) -> tuple[bool, str, float]:
    for num, _, fn in CRITERIA:
        if num == number:
            start = time.perf_counter()
            ok, detail = fn()
            return ok, detail, time.perf_counter() - start
    raise KeyError(number)


def run_all(report: Callable[[str], None] = print) -> bool:
    all_ok = True
    for num, title, _ in CRITERIA:
        ok, detail, secs = run_criterion(num)
        all_ok &= ok
        report(f"[{'PASS' if ok else 'FAIL'}] {num:2d}. {title} ({secs:.1f}s): {detail}")
    return all_ok


def poc_table() -> list[dict]:
    """Tight instances per graph class: the formula value next to the G-MMS/MMS
    ratio computed on the extremal instance."""
    rows = []

    def add(graph_class, n, formula, value, inst):
        ratio = poc_ratio(inst.graph, inst.valuations[0], n)
        rows.append({"class": graph_class, "n": n, "formula": formula, "expected": value, "measured": ratio})

    add("complete bipartite K2,2 (=C4), connectivity 2", 2, "3/4", Fraction(3, 4), catalog("prop7_pairs", g=random_graph("complete_bipartite", (2, 2)), a=0, b=1, c=2, d=3))
    add("wheel W8", 2, ">= 3/4 (tight)", Fraction(3, 4), catalog("fig2_wheel"))
    add("L5 (connectivity 3)", 2, "3/4", Fraction(3, 4), catalog("fig3_L5"))
    for k in (2, 3, 4):
        add(f"connectivity 1, k = {k}", 2, "1/k", Fraction(1, k), catalog("thm3_cut", k=k))
    for m in (6, 7):
        add(f"K{m} minus an edge", 2, "(2m-5)/(2m-4)", Fraction(2 * m - 5, 2 * m - 4), catalog("thm9_matching", m=m))
    for n, m in ((2, 5), (3, 6), (3, 4)):
        add(f"star, m = {m}", n, "1/(m-n+1)", Fraction(1, m - n + 1), catalog("thm12_star", n=n, m=m))
    for n, m in ((2, 5), (3, 7), (3, 4), (4, 6)):
        add(f"path, m = {m}", n, "IPS(n, m)", ips_threshold(n, m), catalog("thm16_path", n=n, m=m))
    return rows


def format_table(rows: list[dict]) -> str:
    lines = [f"{'graph class':<46} {'n':>2} {'formula':<16} {'expected':>8} {'measured':>8}"]
    for r in rows:
        mark = "" if r["expected"] == r["measured"] else "  MISMATCH"
        lines.append(
            f"{r['class']:<46} {r['n']:>2} {r['formula']:<16} {str(r['expected']):>8} {str(r['measured']):>8}{mark}"
        )
    return "\n".join(lines)
