"""Every acceptance criterion, exact rational comparisons throughout.

Each criterion prints one ``[PASS]`` or ``[FAIL]`` line, even without ``-s``.
"""

import pytest

from graphfair import bench


@pytest.mark.parametrize("num, title, fn", bench.CRITERIA, ids=[f"criterion-{c[0]}" for c in bench.CRITERIA])
def test_criterion(num, title, fn, capsys):
    ok, detail, secs = bench.run_criterion(num)
    with capsys.disabled():
        print(f"\n[{'PASS' if ok else 'FAIL'}] {num}. {title}: {detail} ({secs:.1f}s)")
    assert ok, detail
