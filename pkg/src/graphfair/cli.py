"""``graphfair`` command line.

Instances are given as a JSON file path or as a catalog name with optional
parameters, e.g. ``thm12_star:n=3,m=6``.  Graph arguments additionally
accept ``path:5``, ``cycle:4``, ``star:3`` (leaves), ``complete:4``,
``wheel:8`` (rim size) and ``kab:2,3``.

Exit codes: 0 success / criterion holds, 1 criterion fails, 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import bench
from .caps import CapExceeded, get_cap
from .checkers import Criterion, check, is_connected_allocation, mms_ratio_report
from .envy import double_round_robin, efk_two_allocate, envy_cycle_bipartite, optimal_efk_two
from .graph import (
    Graph,
    GraphError,
    bipolar_if_exists,
    block_tree,
    complete_bipartite_graph,
    complete_graph,
    cycle_graph,
    find_unlinked_sets,
    max_components_single_deletion,
    path_graph,
    star_graph,
    vertex_connectivity,
    wheel_graph,
)
from .instances import CATALOG, catalog
from .mms import (
    allocate_any_graph,
    allocate_path_ips,
    allocate_star,
    allocate_tree_gmms,
    bipartition_biconnected,
    bipartition_cut_vertex,
    cut_and_choose,
)
from .oracles import exact_gmms, exact_mms, exists_connected_allocation, poc_ratio, poc_search
from .valuation import (
    Allocation,
    Instance,
    InstanceFormatError,
    format_rational,
    graph_from_dict,
    graph_to_dict,
    instance_from_dict,
    parse_allocation,
    parse_instance,
    serialize_allocation,
    serialize_instance,
    validate,
)


class UsageError(ValueError):
    pass


_GRAPH_SHAPES = {
    "path": path_graph,
    "cycle": cycle_graph,
    "star": star_graph,
    "complete": complete_graph,
    "wheel": wheel_graph,
    "kab": complete_bipartite_graph,
}


def _parse_params(text: str) -> dict:
    params = {}
    for item in filter(None, text.split(",")):
        key, sep, value = item.partition("=")
        if not sep:
            raise UsageError(f"parameter {item!r} must look like key=value")
        key = key.strip()
        value = value.strip()
        if key == "g":
            params[key] = load_graph(value)
        elif key == "matching":
            pairs = [p.split("-") for p in value.split("+")]
            params[key] = tuple((int(a), int(b)) for a, b in pairs)
        else:
            try:
                params[key] = int(value)
            except ValueError:
                raise UsageError(f"parameter {key} needs an integer, got {value!r}") from None
    return params


def _from_catalog(spec: str) -> Instance:
    name, _, raw = spec.partition(":")
    try:
        return catalog(name, **_parse_params(raw))
    except TypeError as exc:
        raise UsageError(f"bad parameters for {name}: {exc}") from None


def load_instance(spec: str) -> Instance:
    name = spec.partition(":")[0]
    if name in CATALOG:
        return _from_catalog(spec)
    path = Path(spec)
    if not path.exists():
        raise UsageError(f"{spec!r} is neither a file nor a catalog instance ({', '.join(CATALOG)})")
    inst = parse_instance(path.read_text())
    problems = validate(inst)
    if problems:
        raise InstanceFormatError("malformed", "; ".join(problems))
    return inst


def load_graph(spec: str) -> Graph:
    shape, _, raw = spec.partition(":")
    if shape in _GRAPH_SHAPES:
        try:
            args = [int(x) for x in raw.split(",") if x]
            return _GRAPH_SHAPES[shape](*args)
        except (TypeError, ValueError) as exc:
            raise UsageError(f"bad graph spec {spec!r}: {exc}") from None
    if shape in CATALOG:
        return _from_catalog(spec).graph
    path = Path(spec)
    if not path.exists():
        raise UsageError(f"{spec!r} is not a graph spec, catalog name or file")
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise InstanceFormatError("malformed", f"invalid JSON: {exc}") from None
    if isinstance(doc, dict) and "graph" in doc:
        return instance_from_dict(doc).graph
    return graph_from_dict(doc)


def _emit(args, data: dict, text: str) -> None:
    if args.json:
        print(json.dumps(data, indent=2))
    else:
        print(text)


# -- analyze ------------------------------------------------------------------------


def cmd_analyze(args) -> int:
    inst = load_instance(args.instance)
    g = inst.graph
    data: dict = {"m": g.m, "n": inst.n, "edges": len(g.edges)}
    data["connectivity"] = vertex_connectivity(g) if g.m > 1 else 0
    if g.m >= 2:
        k, v = max_components_single_deletion(g)
        data["max_components_after_deletion"] = {"k": k, "vertex": v}
    bt = block_tree(g)
    data["block_tree"] = {
        "blocks": [sorted(b) for b in bt.blocks],
        "cut_vertices": sorted(bt.cut_vertices),
        "is_path": bt.is_path(),
    }
    order = bipolar_if_exists(g)
    data["bipolar_order"] = order
    plan = optimal_efk_two(g)
    data["efk_two"] = {"k_star": plan.k_star, "merge_sets": [sorted(s) for s in plan.merge_sets]}
    ladder = []
    if g.m <= get_cap("linked"):
        for k in range(1, g.m - 1):
            witness = find_unlinked_sets(g, 2, k)
            ladder.append({"k": k, "linked": witness is None,
                           "witness": None if witness is None else [sorted(witness[0]), sorted(witness[1])]})
            if witness is not None:
                break
    data["linkedness"] = ladder
    lines = [
        f"goods m={g.m}, agents n={inst.n}, edges={len(g.edges)}",
        f"vertex connectivity: {data['connectivity']}",
    ]
    if "max_components_after_deletion" in data:
        d = data["max_components_after_deletion"]
        lines.append(f"max components after one deletion: {d['k']} (delete {d['vertex']})")
    lines.append(
        f"block tree: {len(bt.blocks)} block(s), cut vertices {sorted(bt.cut_vertices)}, "
        f"{'a path' if bt.is_path() else 'not a path'}"
    )
    lines.append(f"bipolar ordering: {order if order is not None else 'none'}")
    lines.append(f"best two-agent EFk guarantee: k* = {plan.k_star}")
    for step in ladder:
        status = "linked" if step["linked"] else f"NOT linked, witness {step['witness']}"
        lines.append(f"(2,{step['k']})-linked: {status}")
    if not ladder:
        lines.append("linkedness: skipped (graph above the exhaustive-search cap)")
    _emit(args, data, "\n".join(lines))
    return 0


# -- allocate -----------------------------------------------------------------------

ALGORITHMS = (
    "path-ips", "star", "tree-gmms", "biconnected", "cut-vertex", "spanning-tree",
    "efk-two", "envy-cycle", "double-round-robin", "exhaustive",
)


def _is_complete_bipartite(inst: Instance) -> bool:
    sides = inst.graph.bipartite_sides()
    return (
        sides is not None
        and len(inst.graph.edges) == len(sides[0]) * len(sides[1])
        and min(len(sides[0]), len(sides[1])) >= inst.n
    )


def choose_algorithm(inst: Instance, goal: str) -> str:
    """Strongest applicable allocator, checking path, star, tree,
    biconnected, complete bipartite and finally the general fallback."""
    g = inst.graph
    additive = inst.additive
    if goal == "ips":
        return "path-ips"
    if goal == "mms":
        if not additive:
            raise UsageError("MMS allocators need additive valuations")
        if g.is_path() and inst.n >= 2:
            return "path-ips"
        if g.is_star() and inst.n >= 2 and g.m >= inst.n:
            return "star"
        if g.is_tree():
            return "tree-gmms"
        if inst.n == 2:
            return "biconnected" if vertex_connectivity(g) >= 2 and g.m >= 3 else "cut-vertex"
        return "spanning-tree"
    if goal in ("ef1", "efk"):
        if inst.n == 2:
            return "efk-two"
        if goal == "ef1" and _is_complete_bipartite(inst):
            return "envy-cycle"
        return "exhaustive"
    raise UsageError(f"unknown goal {goal!r}")


def run_algorithm(inst: Instance, name: str, goal: str) -> tuple[Allocation, dict]:
    extra: dict = {}
    if name == "path-ips":
        alloc, certs = allocate_path_ips(inst)
        extra["ips_certificates"] = [
            None if c is None else {"removed": sorted(c.removed), "threshold": format_rational(c.threshold)}
            for c in certs
        ]
        return alloc, extra
    if name == "star":
        return allocate_star(inst), extra
    if name == "tree-gmms":
        return allocate_tree_gmms(inst), extra
    if name == "spanning-tree":
        return allocate_any_graph(inst), extra
    if name in ("biconnected", "cut-vertex"):
        if inst.n != 2:
            raise UsageError(f"{name} is a two-agent algorithm")
        split = bipartition_biconnected if name == "biconnected" else bipartition_cut_vertex
        parts = split(inst.graph, inst.valuations[0])
        return cut_and_choose(parts, inst.valuations[1]), extra
    if name == "efk-two":
        alloc, k = efk_two_allocate(inst)
        extra["k_star"] = k
        return alloc, extra
    if name == "envy-cycle":
        return envy_cycle_bipartite(inst), extra
    if name == "double-round-robin":
        return double_round_robin(inst), extra
    if name == "exhaustive":
        criterion = {"ef1": Criterion("efk", k=1), "mms": Criterion("mms"), "ips": Criterion("ips")}.get(goal)
        if criterion is None:
            raise UsageError("exhaustive search needs goal ef1, mms or ips")
        alloc = exists_connected_allocation(inst, criterion)
        if alloc is None:
            raise LookupError(f"no connected allocation satisfies {criterion}")
        return alloc, extra
    raise UsageError(f"unknown algorithm {name!r}")


def cmd_allocate(args) -> int:
    inst = load_instance(args.instance)
    name = args.algorithm or choose_algorithm(inst, args.goal)
    try:
        alloc, extra = run_algorithm(inst, name, args.goal)
    except LookupError as exc:
        _emit(args, {"algorithm": name, "error": str(exc)}, f"{name}: {exc}")
        return 1
    values = [u.value(alloc.bundles[i]) for i, u in enumerate(inst.valuations)]
    data = {
        "algorithm": name,
        "allocation": {"bundles": [sorted(b) for b in alloc.bundles]},
        "connected": is_connected_allocation(inst.graph, alloc),
        "values": [format_rational(v) for v in values],
        **extra,
    }
    try:
        data["mms_ratios"] = [format_rational(r) for r in mms_ratio_report(inst, alloc)]
    except (CapExceeded, TypeError):
        data["mms_ratios"] = None
    if args.output:
        Path(args.output).write_text(serialize_allocation(alloc) + "\n")
    lines = [f"algorithm: {name}", f"connected: {data['connected']}"]
    for i, b in enumerate(alloc.bundles):
        ratio = "" if data["mms_ratios"] is None else f", MMS ratio {data['mms_ratios'][i]}"
        lines.append(f"agent {i}: goods {sorted(b)}, value {data['values'][i]}{ratio}")
    if "k_star" in extra:
        lines.append(f"guarantee: EF{extra['k_star']}")
    _emit(args, data, "\n".join(lines))
    return 0


# -- check / oracle / gen / bench ------------------------------------------------------


def cmd_check(args) -> int:
    inst = load_instance(args.instance)
    alloc = parse_allocation(Path(args.allocation).read_text(), n=inst.n, m=inst.m)
    try:
        criterion = Criterion.parse(args.criterion)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    result = check(inst, alloc, criterion)
    data = {"criterion": str(criterion), "passed": result.passed, "witness": result.witness}
    text = f"{criterion}: {'PASS' if result.passed else 'FAIL'}"
    if result.witness:
        text += f" ({result.witness})"
    _emit(args, data, text)
    return 0 if result.passed else 1


def cmd_oracle(args) -> int:
    inst = load_instance(args.instance)
    g = inst.graph
    rows = []
    for i, u in enumerate(inst.valuations):
        if args.what == "mms":
            w = exact_mms(u, inst.n)
            rows.append({"agent": i, "value": format_rational(w.value), "partition": [sorted(p) for p in w.partition]})
        elif args.what == "gmms":
            w = exact_gmms(g, u, inst.n)
            rows.append({"agent": i, "value": format_rational(w.value), "partition": [sorted(p) for p in w.partition]})
        else:
            rows.append({"agent": i, "value": format_rational(poc_ratio(g, u, inst.n))})
    distinct = {r["value"] for r in rows}
    if len(distinct) == 1 and len(inst.valuations) > 1 and len(set(inst.valuations)) == 1:
        text = str(rows[0]["value"])
    else:
        text = "\n".join(f"agent {r['agent']}: {r['value']}" for r in rows)
    _emit(args, {"what": args.what, "agents": rows}, text)
    return 0


def cmd_oracle_search(args) -> int:
    g = load_graph(args.graph)
    res = poc_search(g, args.n, args.max_value, args.budget, args.seed)
    data = {
        "upper_bound": format_rational(res.ratio),
        "witness": [format_rational(x) for x in res.witness.values],
        "exhaustive": res.exhaustive,
        "evaluations": res.evaluations,
    }
    text = (
        f"PoC upper bound: {format_rational(res.ratio)} "
        f"({'exhaustive grid' if res.exhaustive else 'local search'}, {res.evaluations} evaluations)\n"
        f"witness values: {data['witness']}"
    )
    _emit(args, data, text)
    return 0


def cmd_gen(args) -> int:
    params = _parse_params(",".join(args.params))
    try:
        inst = catalog(args.name, **params)
    except TypeError as exc:
        raise UsageError(f"bad parameters for {args.name}: {exc}") from None
    text = serialize_instance(inst)
    if args.output:
        Path(args.output).write_text(text + "\n")
    else:
        print(text)
    return 0


def cmd_bench(args) -> int:
    lines: list[str] = []
    ok = bench.run_all(report=lines.append if args.json else print)
    rows = bench.poc_table()
    if args.json:
        data = {
            "criteria": lines,
            "passed": ok,
            "table": [{**r, "expected": format_rational(r["expected"]), "measured": format_rational(r["measured"])} for r in rows],
        }
        print(json.dumps(data, indent=2))
    else:
        print()
        print(bench.format_table(rows))
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    parser = argparse.ArgumentParser(prog="graphfair", description="Fair division of goods on graphs.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common], help="structural report for an instance's graph")
    p.add_argument("instance")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("allocate", parents=[common], help="run an allocator")
    p.add_argument("instance")
    p.add_argument("--goal", choices=("mms", "ef1", "efk", "ips"), required=True)
    p.add_argument("--algorithm", choices=ALGORITHMS)
    p.add_argument("-o", "--output", help="write the allocation file here")
    p.set_defaults(func=cmd_allocate)

    p = sub.add_parser("check", parents=[common], help="check an allocation against a criterion")
    p.add_argument("instance")
    p.add_argument("allocation")
    p.add_argument("--criterion", required=True, help="connected, ef, ef1, efk:K, efx, mms, mms:ALPHA or ips")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("oracle", parents=[common], help="exact MMS, G-MMS or G-MMS/MMS ratio")
    p.add_argument("instance")
    p.add_argument("--what", choices=("mms", "gmms", "poc-ratio"), required=True)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("oracle-search", parents=[common], help="search integer valuations for a low ratio")
    p.add_argument("graph")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--max-value", type=int, default=4)
    p.add_argument("--budget", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_oracle_search)

    p = sub.add_parser("gen", parents=[common], help="write a catalog instance")
    p.add_argument("name", choices=sorted(CATALOG))
    p.add_argument("params", nargs="*", help="key=value parameters")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bench", parents=[common], help="run the reproduction suite")
    p.add_argument("suite", choices=("paper",))
    p.set_defaults(func=cmd_bench)
    return parser


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        return args.func(args)
    except (InstanceFormatError, GraphError, UsageError, CapExceeded, TypeError, ValueError, OSError) as exc:
        if getattr(args, "json", False):
            print(json.dumps({"error": str(exc), "code": getattr(exc, "code", "usage")}))
        else:
            print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())
