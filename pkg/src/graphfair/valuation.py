"""Exact-rational valuations, instances, allocations and their JSON file format.

Instance file::

    {"n": 2,
     "graph": {"m": 3, "edges": [[0, 1], [1, 2]]},
     "valuations": {"type": "additive", "values": [[1, 2, 1], [1, "1/2", 3]]}}

``"type": "table"`` instead carries one map per agent from the bundle
bitmask (as a decimal string) to its value.  Values are integers or
``"p/q"`` strings in lowest terms.  Allocation file: ``{"bundles": [[0], [1, 2]]}``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable, Protocol, Sequence, Union

from .caps import get_cap
from .graph import Graph, GraphError, bits, to_mask

__all__ = [
    "Rational",
    "Valuation",
    "AdditiveValuation",
    "TabulatedValuation",
    "MergedValuation",
    "Instance",
    "Allocation",
    "InstanceFormatError",
    "value_of",
    "validate",
    "parse_rational",
    "format_rational",
    "parse_instance",
    "serialize_instance",
    "parse_allocation",
    "serialize_allocation",
]

Rational = Fraction


class Valuation(Protocol):
    m: int

    def value(self, bundle: Iterable[int]) -> Fraction: ...

    def value_mask(self, mask: int) -> Fraction: ...


@dataclass(frozen=True)
class AdditiveValuation:
    values: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", tuple(Fraction(v) for v in self.values))

    @property
    def m(self) -> int:
        return len(self.values)

    def value(self, bundle: Iterable[int]) -> Fraction:
        return sum((self.values[g] for g in bundle), Fraction(0))

    def value_mask(self, mask: int) -> Fraction:
        return sum((self.values[g] for g in bits(mask)), Fraction(0))

    def total(self) -> Fraction:
        return sum(self.values, Fraction(0))


@dataclass(frozen=True)
class TabulatedValuation:
    """Arbitrary set function given by its full table; ``table[mask]`` is the
    value of the bundle whose members are the set bits of ``mask``."""

    m: int
    table: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if len(self.table) != 1 << self.m:
            raise ValueError(f"table needs {1 << self.m} entries, got {len(self.table)}")
        object.__setattr__(self, "table", tuple(Fraction(v) for v in self.table))

    def value(self, bundle: Iterable[int]) -> Fraction:
        return self.table[to_mask(bundle)]

    def value_mask(self, mask: int) -> Fraction:
        return self.table[mask]

    def total(self) -> Fraction:
        return self.table[-1]

    @classmethod
    def from_additive(cls, u: AdditiveValuation) -> "TabulatedValuation":
        table = [Fraction(0)] * (1 << u.m)
        for mask in range(1, 1 << u.m):
            low = mask & -mask
            table[mask] = table[mask ^ low] + u.values[low.bit_length() - 1]
        return cls(u.m, tuple(table))

    def monotonicity_violations(self) -> list[tuple[int, int]]:
        """Pairs ``(S, S + g)`` (as masks) where adding a good lowers the value."""
        bad = []
        for mask in range(1 << self.m):
            for g in range(self.m):
                if not mask >> g & 1 and self.table[mask | 1 << g] < self.table[mask]:
                    bad.append((mask, mask | 1 << g))
        return bad


@dataclass(frozen=True)
class MergedValuation:
    """Valuation on a merged graph: a merged vertex is worth its original parts together."""

    base: Any
    parts: tuple[frozenset[int], ...]

    @property
    def m(self) -> int:
        return len(self.parts)

    def _expand(self, mask: int) -> int:
        out = 0
        for i in bits(mask):
            out |= to_mask(self.parts[i])
        return out

    def value(self, bundle: Iterable[int]) -> Fraction:
        return self.value_mask(to_mask(bundle))

    def value_mask(self, mask: int) -> Fraction:
        return self.base.value_mask(self._expand(mask))

    def total(self) -> Fraction:
        return self.value_mask((1 << self.m) - 1)


def value_of(u: Valuation, s: Iterable[int]) -> Fraction:
    return u.value(s)


@dataclass(frozen=True)
class Allocation:
    """``bundles[i]`` goes to agent ``i``."""

    bundles: tuple[frozenset[int], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "bundles", tuple(frozenset(b) for b in self.bundles))

    @property
    def n(self) -> int:
        return len(self.bundles)

    def owner(self, good: int) -> int:
        for i, b in enumerate(self.bundles):
            if good in b:
                return i
        raise KeyError(good)

    def is_partition_of(self, m: int) -> bool:
        seen: set[int] = set()
        for b in self.bundles:
            if seen & b:
                return False
            seen |= b
        return seen == set(range(m))


@dataclass(frozen=True)
class Instance:
    n: int
    graph: Graph
    valuations: tuple[Union[AdditiveValuation, TabulatedValuation], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "valuations", tuple(self.valuations))

    @property
    def m(self) -> int:
        return self.graph.m

    @property
    def additive(self) -> bool:
        return all(isinstance(u, AdditiveValuation) for u in self.valuations)

    @classmethod
    def additive_from(cls, graph: Graph, values: Sequence[Sequence[Any]]) -> "Instance":
        vals = tuple(AdditiveValuation(tuple(Fraction(x) for x in row)) for row in values)
        return cls(len(vals), graph, vals)

    @classmethod
    def identical(cls, graph: Graph, values: Sequence[Any], n: int) -> "Instance":
        u = AdditiveValuation(tuple(Fraction(x) for x in values))
        return cls(n, graph, (u,) * n)


def validate(inst: Instance) -> list[str]:
    """Every problem found with ``inst``; an empty list means valid."""
    problems: list[str] = []
    g = inst.graph
    if inst.n < 1:
        problems.append(f"agent count must be at least 1, got {inst.n}")
    if g.m < 1:
        problems.append("graph has no vertices")
    elif not g.is_connected():
        problems.append("graph is not connected")
    if len(inst.valuations) != inst.n:
        problems.append(f"expected {inst.n} valuations, got {len(inst.valuations)}")
    kinds = {type(u) for u in inst.valuations}
    if len(kinds) > 1:
        problems.append("valuations mix additive and tabulated types")
    for i, u in enumerate(inst.valuations):
        if u.m != g.m:
            problems.append(f"valuation {i} is over {u.m} goods, graph has {g.m}")
            continue
        if isinstance(u, AdditiveValuation):
            for good, x in enumerate(u.values):
                if x < 0:
                    problems.append(f"valuation {i} gives good {good} negative value {x}")
        else:
            if u.m > get_cap("table"):
                problems.append(f"valuation {i}: tabulated valuations are capped at {get_cap('table')} goods")
            if u.table[0] != 0:
                problems.append(f"valuation {i} gives the empty bundle value {u.table[0]}")
            if any(x < 0 for x in u.table):
                problems.append(f"valuation {i} has a negative bundle value")
            bad = u.monotonicity_violations()
            if bad:
                small, big = bad[0]
                problems.append(
                    f"valuation {i} is not monotone: u({sorted(bits(small))}) = {u.table[small]} "
                    f"> u({sorted(bits(big))}) = {u.table[big]} ({len(bad)} violations)"
                )
    return problems


# -- file format --------------------------------------------------------------


class InstanceFormatError(ValueError):
    """Malformed instance or allocation document.

    ``code`` is one of ``malformed``, ``dimension``, ``negative``,
    ``non_canonical``, ``loop``, ``duplicate_edge``, ``edge_range``.
    """

    def __init__(self, code: str, message: str):
        super().__init__(f"[{code}] {message}")
        self.code = code


_RATIONAL = re.compile(r"^(-?\d+)/(\d+)$")


def parse_rational(raw: Any) -> Fraction:
    if isinstance(raw, bool):
        raise InstanceFormatError("malformed", f"boolean {raw!r} is not a value")
    if isinstance(raw, int):
        value = Fraction(raw)
    elif isinstance(raw, str):
        match = _RATIONAL.match(raw.strip())
        if raw.strip().lstrip("-").isdigit():
            value = Fraction(int(raw))
            if raw.strip() != str(int(raw)):
                raise InstanceFormatError("non_canonical", f"{raw!r} is not in canonical form")
        elif match:
            p, q = int(match.group(1)), int(match.group(2))
            if q == 0:
                raise InstanceFormatError("malformed", f"zero denominator in {raw!r}")
            value = Fraction(p, q)
            if value.denominator == 1 or value.numerator != p or value.denominator != q:
                raise InstanceFormatError("non_canonical", f"{raw!r} is not in lowest terms")
        else:
            raise InstanceFormatError("malformed", f"cannot read {raw!r} as a rational")
    else:
        raise InstanceFormatError("malformed", f"cannot read {raw!r} as a rational")
    if value < 0:
        raise InstanceFormatError("negative", f"negative value {raw!r}")
    return value


def format_rational(x: Fraction) -> int | str:
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _expect(cond: bool, code: str, message: str) -> None:
    if not cond:
        raise InstanceFormatError(code, message)


def _parse_graph(doc: Any) -> Graph:
    _expect(isinstance(doc, dict), "malformed", "'graph' must be an object")
    m = doc.get("m")
    _expect(isinstance(m, int) and not isinstance(m, bool) and m >= 1, "malformed", "'graph.m' must be a positive integer")
    edges = doc.get("edges")
    _expect(isinstance(edges, list), "malformed", "'graph.edges' must be a list")
    seen = set()
    for e in edges:
        _expect(
            isinstance(e, list) and len(e) == 2 and all(isinstance(x, int) and not isinstance(x, bool) for x in e),
            "malformed",
            f"edge {e!r} must be a pair of integers",
        )
        i, j = e
        _expect(i != j, "loop", f"edge {e!r} is a loop")
        _expect(0 <= i < m and 0 <= j < m, "edge_range", f"edge {e!r} has an endpoint outside 0..{m - 1}")
        _expect(i < j, "non_canonical", f"edge {e!r} must be written with i < j")
        _expect((i, j) not in seen, "duplicate_edge", f"edge {e!r} appears twice")
        seen.add((i, j))
    return Graph(m, frozenset(seen))


def graph_to_dict(g: Graph) -> dict:
    return {"m": g.m, "edges": [list(e) for e in g.sorted_edges()]}


def graph_from_dict(doc: Any) -> Graph:
    return _parse_graph(doc)


def instance_from_dict(doc: Any) -> Instance:
    _expect(isinstance(doc, dict), "malformed", "instance must be a JSON object")
    n = doc.get("n")
    _expect(isinstance(n, int) and not isinstance(n, bool) and n >= 1, "malformed", "'n' must be a positive integer")
    graph = _parse_graph(doc.get("graph"))
    vals = doc.get("valuations")
    _expect(isinstance(vals, dict), "malformed", "'valuations' must be an object")
    kind = vals.get("type")
    rows = vals.get("values")
    _expect(isinstance(rows, list), "malformed", "'valuations.values' must be a list")
    _expect(len(rows) == n, "dimension", f"expected {n} valuations, got {len(rows)}")
    valuations: list[Union[AdditiveValuation, TabulatedValuation]] = []
    if kind == "additive":
        for i, row in enumerate(rows):
            _expect(isinstance(row, list), "malformed", f"valuation {i} must be a list")
            _expect(len(row) == graph.m, "dimension", f"valuation {i} has {len(row)} entries, graph has {graph.m} goods")
            valuations.append(AdditiveValuation(tuple(parse_rational(x) for x in row)))
    elif kind == "table":
        size = 1 << graph.m
        for i, row in enumerate(rows):
            _expect(isinstance(row, dict), "malformed", f"valuation {i} must be an object")
            _expect(len(row) == size, "dimension", f"valuation {i} has {len(row)} bundles, expected {size}")
            table = [None] * size
            for key, x in row.items():
                _expect(isinstance(key, str) and key.isdigit() and key == str(int(key)), "malformed", f"bad bundle key {key!r}")
                mask = int(key)
                _expect(mask < size, "dimension", f"bundle key {key} exceeds {size - 1}")
                table[mask] = parse_rational(x)
            valuations.append(TabulatedValuation(graph.m, tuple(table)))
    else:
        raise InstanceFormatError("malformed", f"unknown valuation type {kind!r}")
    return Instance(n, graph, tuple(valuations))


def instance_to_dict(inst: Instance) -> dict:
    if inst.additive:
        vals = {
            "type": "additive",
            "values": [[format_rational(x) for x in u.values] for u in inst.valuations],
        }
    else:
        tables = []
        for u in inst.valuations:
            if isinstance(u, AdditiveValuation):
                u = TabulatedValuation.from_additive(u)
            tables.append({str(mask): format_rational(x) for mask, x in enumerate(u.table)})
        vals = {"type": "table", "values": tables}
    return {"n": inst.n, "graph": graph_to_dict(inst.graph), "valuations": vals}


def parse_instance(text: str) -> Instance:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceFormatError("malformed", f"invalid JSON: {exc}") from None
    try:
        return instance_from_dict(doc)
    except GraphError as exc:
        raise InstanceFormatError("malformed", str(exc)) from None


def serialize_instance(inst: Instance) -> str:
    return json.dumps(instance_to_dict(inst))


def parse_allocation(text: str, n: int | None = None, m: int | None = None) -> Allocation:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceFormatError("malformed", f"invalid JSON: {exc}") from None
    _expect(isinstance(doc, dict) and isinstance(doc.get("bundles"), list), "malformed", "allocation needs a 'bundles' list")
    bundles = []
    for b in doc["bundles"]:
        _expect(isinstance(b, list) and all(isinstance(x, int) and not isinstance(x, bool) for x in b), "malformed", f"bundle {b!r} must be a list of goods")
        _expect(len(set(b)) == len(b), "malformed", f"bundle {b!r} repeats a good")
        bundles.append(frozenset(b))
    alloc = Allocation(tuple(bundles))
    if n is not None:
        _expect(alloc.n == n, "dimension", f"allocation has {alloc.n} bundles, instance has {n} agents")
    if m is not None:
        _expect(alloc.is_partition_of(m), "dimension", f"bundles do not partition goods 0..{m - 1}")
    return alloc


def serialize_allocation(a: Allocation) -> str:
    return json.dumps({"bundles": [sorted(b) for b in a.bundles]})
