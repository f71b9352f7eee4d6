"""Size caps for the exhaustive searches.

``GRAPHFAIR_CAP`` overrides them: either a bare integer applied to every
vertex-count cap, or comma-separated ``name=value`` pairs, e.g.
``GRAPHFAIR_CAP="mms2=16,gmms=12"``.
"""

from __future__ import annotations

import os

DEFAULT_CAPS = {
    "mms2": 14,  # exact_mms with n = 2 (subset enumeration)
    "mms": 12,  # exact_mms with n >= 3
    "gmms": 14,  # exact_gmms / connected allocation enumeration
    "linked": 14,  # is_ab_linked
    "binary": 10,  # guaranteed_efk_bruteforce
    "table": 20,  # tabulated valuations
    "removal": 15,  # envy_up_to subset enumeration on tabulated valuations
    "connectivity_bruteforce": 12,
    "tree_assignments": 2_000_000,  # choose(m-1, n-1) * n! for allocate_tree_gmms
}

# caps that count vertices/goods; a bare-integer override only touches these
_VERTEX_CAPS = ("mms2", "mms", "gmms", "linked", "binary", "connectivity_bruteforce")


class CapExceeded(ValueError):
    """An exhaustive search was asked to run beyond its configured size cap."""

    def __init__(self, what: str, size: int, cap: int):
        super().__init__(f"{what}: size {size} exceeds the exhaustive-search cap {cap}")
        self.what = what
        self.size = size
        self.cap = cap


def _overrides() -> dict[str, int]:
    raw = os.environ.get("GRAPHFAIR_CAP", "").strip()
    if not raw:
        return {}
    if raw.isdigit():
        return {name: int(raw) for name in _VERTEX_CAPS}
    out = {}
    for item in raw.split(","):
        name, _, value = item.partition("=")
        name = name.strip()
        if name not in DEFAULT_CAPS or not value.strip().isdigit():
            raise ValueError(f"bad GRAPHFAIR_CAP entry {item!r}")
        out[name] = int(value)
    return out


def get_cap(name: str) -> int:
    return _overrides().get(name, DEFAULT_CAPS[name])
