"""Exact fairness predicates over allocations.

Every comparison is between ``Fraction`` values, so thresholds such as
``3/4 * MMS`` are decided with zero tolerance.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .caps import CapExceeded, get_cap
from .graph import Graph, is_connected_subset, to_mask
from .valuation import AdditiveValuation, Allocation, Instance

__all__ = [
    "Criterion",
    "CheckResult",
    "is_connected_allocation",
    "envy_up_to",
    "envy_up_to_bruteforce",
    "is_efk",
    "is_ef",
    "is_efx",
    "efk_violation",
    "efx_violation",
    "mms_ratio_report",
    "is_ips_allocation",
    "check",
]


def is_connected_allocation(g: Graph, a: Allocation) -> bool:
    return all(is_connected_subset(g, b) for b in a.bundles)


def envy_up_to_bruteforce(u, own: Iterable[int], other: Iterable[int], k: int) -> bool:
    """``envy_up_to`` by trying every removal set of size at most ``k``."""
    own_value = u.value(own)
    other = sorted(other)
    if len(other) > get_cap("removal"):
        raise CapExceeded("envy_up_to", len(other), get_cap("removal"))
    other_mask = to_mask(other)
    for size in range(0, min(k, len(other)) + 1):
        for removed in itertools.combinations(other, size):
            if own_value >= u.value_mask(other_mask & ~to_mask(removed)):
                return True
    return False


def envy_up_to(u, own: Iterable[int], other: Iterable[int], k: int) -> bool:
    """True iff removing at most ``k`` goods from ``other`` leaves ``u(own) >= u(rest)``.

    Additive valuations drop the ``k`` most valuable goods; anything else is
    checked by subset enumeration.
    """
    if isinstance(u, AdditiveValuation):
        other_values = sorted((u.values[g] for g in other), reverse=True)
        rest = sum(other_values[k:], Fraction(0))
        return u.value(own) >= rest
    return envy_up_to_bruteforce(u, own, other, k)


def efk_violation(inst: Instance, a: Allocation, k: int) -> tuple[int, int] | None:
    """First ordered pair ``(i, j)`` where agent ``i`` still envies ``j`` after ``k`` removals."""
    for i, u in enumerate(inst.valuations):
        for j, other in enumerate(a.bundles):
            if i != j and not envy_up_to(u, a.bundles[i], other, k):
                return i, j
    return None


def is_efk(inst: Instance, a: Allocation, k: int) -> bool:
    return efk_violation(inst, a, k) is None


def is_ef(inst: Instance, a: Allocation) -> bool:
    return is_efk(inst, a, 0)


def efx_violation(inst: Instance, a: Allocation) -> tuple[int, int, int] | None:
    """First ``(i, j, g)`` with ``u_i(M_i) < u_i(M_j - g)``."""
    for i, u in enumerate(inst.valuations):
        own = u.value(a.bundles[i])
        for j, other in enumerate(a.bundles):
            if i == j:
                continue
            other_mask = to_mask(other)
            for g in sorted(other):
                if own < u.value_mask(other_mask & ~(1 << g)):
                    return i, j, g
    return None


def is_efx(inst: Instance, a: Allocation) -> bool:
    return efx_violation(inst, a) is None


def mms_ratio_report(inst: Instance, a: Allocation) -> list[Fraction]:
    """Per-agent ``u_i(M_i) / MMS(u_i, n)``; an agent whose MMS is 0 reports 1."""
    from .oracles import exact_mms

    ratios = []
    for i, u in enumerate(inst.valuations):
        mms = exact_mms(u, inst.n).value
        ratios.append(Fraction(1) if mms == 0 else u.value(a.bundles[i]) / mms)
    return ratios


def is_ips_allocation(inst: Instance, a: Allocation) -> bool:
    from .mms import is_ips_bundle

    return all(
        is_ips_bundle(u, a.bundles[i], inst.n, inst.m, agent=i) is not None
        for i, u in enumerate(inst.valuations)
    )


@dataclass(frozen=True)
class Criterion:
    """A fairness requirement: ``connected``, ``ef``, ``efk`` (with ``k``),
    ``efx``, ``mms`` (with fraction ``alpha``) or ``ips``."""

    kind: str
    k: int = 0
    alpha: Fraction = Fraction(1)

    @classmethod
    def parse(cls, text: str) -> "Criterion":
        text = text.strip().lower()
        if text in ("connected", "ef", "efx", "ips"):
            return cls(text)
        if text == "ef1":
            return cls("efk", k=1)
        if text.startswith("efk:"):
            return cls("efk", k=int(text[4:]))
        if text.startswith("ef") and text[2:].isdigit():
            return cls("efk", k=int(text[2:]))
        if text == "mms":
            return cls("mms")
        if text.startswith("mms:"):
            return cls("mms", alpha=Fraction(text[4:]))
        raise ValueError(f"unknown criterion {text!r}")

    def __str__(self) -> str:
        if self.kind == "efk":
            return f"efk:{self.k}"
        if self.kind == "mms":
            return f"mms:{self.alpha}"
        return self.kind


@dataclass(frozen=True)
class CheckResult:
    passed: bool
    witness: str | None = None


def check(inst: Instance, a: Allocation, criterion: Criterion, mms_values=None) -> CheckResult:
    """Evaluate ``criterion`` on ``a``; failures carry a human-readable witness.

    ``mms_values`` lets callers that test many allocations reuse per-agent MMS.
    """
    kind = criterion.kind
    if kind == "connected":
        for i, b in enumerate(a.bundles):
            if not is_connected_subset(inst.graph, b):
                return CheckResult(False, f"bundle of agent {i} {sorted(b)} is not connected")
        return CheckResult(True)
    if kind in ("ef", "efk"):
        k = 0 if kind == "ef" else criterion.k
        bad = efk_violation(inst, a, k)
        if bad:
            i, j = bad
            if k == 0:
                return CheckResult(False, f"agent {i} envies agent {j}")
            return CheckResult(False, f"agent {i} envies agent {j} even after removing {k} good(s)")
        return CheckResult(True)
    if kind == "efx":
        bad = efx_violation(inst, a)
        if bad:
            i, j, g = bad
            return CheckResult(False, f"agent {i} envies agent {j} after removing good {g}")
        return CheckResult(True)
    if kind == "mms":
        if mms_values is None:
            from .oracles import exact_mms

            mms_values = [exact_mms(u, inst.n).value for u in inst.valuations]
        for i, u in enumerate(inst.valuations):
            got = u.value(a.bundles[i])
            if got < criterion.alpha * mms_values[i]:
                return CheckResult(
                    False,
                    f"agent {i} gets {got} < {criterion.alpha} * MMS {mms_values[i]}",
                )
        return CheckResult(True)
    if kind == "ips":
        from .mms import is_ips_bundle

        for i, u in enumerate(inst.valuations):
            if is_ips_bundle(u, a.bundles[i], inst.n, inst.m, agent=i) is None:
                return CheckResult(False, f"bundle of agent {i} {sorted(a.bundles[i])} is not IPS")
        return CheckResult(True)
    raise ValueError(f"unknown criterion kind {kind!r}")
