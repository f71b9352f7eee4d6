import json

import pytest

from graphfair import bench
from graphfair.cli import run
from graphfair.valuation import parse_allocation, parse_instance, serialize_instance


def _json(capsys):
    return json.loads(capsys.readouterr().out)


def test_wheel_ratio(capsys):
    assert run(["oracle", "fig2_wheel", "--what", "poc-ratio"]) == 0
    assert capsys.readouterr().out.strip() == "3/4"


def test_oracle_json(capsys):
    assert run(["oracle", "fig2_wheel", "--what", "gmms", "--json"]) == 0
    data = _json(capsys)
    assert data["agents"][0]["value"] == 3


def test_gen_then_analyze(tmp_path, capsys):
    path = tmp_path / "l5.json"
    assert run(["gen", "fig3_L5", "-o", str(path)]) == 0
    assert run(["analyze", str(path), "--json"]) == 0
    data = _json(capsys)
    assert data["connectivity"] == 3
    linked = {entry["k"]: entry for entry in data["linkedness"]}
    assert linked[2]["linked"] is False
    assert linked[2]["witness"] == [[1, 3], [2, 4]]


def test_gen_params_round_trip(capsys):
    assert run(["gen", "fig7_k2b", "b=6"]) == 0
    inst = parse_instance(capsys.readouterr().out)
    assert inst.m == 8 and inst.n == 3


@pytest.mark.parametrize("spec, goal, algorithm", [
    ("fig2_wheel", "mms", "biconnected"),
    ("thm12_star:n=3,m=6", "mms", "star"),
    ("thm16_path:n=3,m=7", "ips", "path-ips"),
    ("fig6_tree", "mms", "tree-gmms"),
    ("prop20_star:m=6", "efk", "efk-two"),
])
def test_allocate_then_check(tmp_path, capsys, spec, goal, algorithm):
    out = tmp_path / "alloc.json"
    assert run(["allocate", spec, "--goal", goal, "-o", str(out), "--json"]) == 0
    data = _json(capsys)
    assert data["algorithm"] == algorithm and data["connected"]
    assert run(["check", spec, str(out), "--criterion", "connected"]) == 0
    text = out.read_text()
    assert parse_allocation(text, n=len(data["allocation"]["bundles"]), m=sum(map(len, data["allocation"]["bundles"])))


def test_check_exit_codes(tmp_path, capsys):
    out = tmp_path / "a.json"
    run(["allocate", "fig2_wheel", "--goal", "mms", "-o", str(out)])
    capsys.readouterr()
    assert run(["check", "fig2_wheel", str(out), "--criterion", "mms:3/4"]) == 0
    assert run(["check", "fig2_wheel", str(out), "--criterion", "ef"]) == 1
    assert "envies" in capsys.readouterr().out


def test_impossible_goal(capsys):
    assert run(["allocate", "fig7_k2b:b=4", "--goal", "ef1"]) == 1


def test_oracle_search(capsys):
    assert run(["oracle-search", "cycle:4", "--max-value", "4", "--json"]) == 0
    data = _json(capsys)
    assert data["exhaustive"] and data["upper_bound"] == "3/4"


@pytest.mark.parametrize("content", ["{oops", '{"n": 2, "graph": {"m": 2, "edges": [[1, 0]]}, '
                                     '"valuations": {"type": "additive", "values": [[1, 1]]}}'])
def test_malformed_exit_2(tmp_path, capsys, content):
    bad = tmp_path / "bad.json"
    bad.write_text(content)
    assert run(["analyze", str(bad)]) == 2
    assert run(["analyze", str(bad), "--json"]) == 2
    assert "error" in capsys.readouterr().out


def test_unknown_subcommand():
    assert run(["frobnicate"]) == 2


def test_cap_exceeded_exit_2(monkeypatch, capsys):
    monkeypatch.setenv("GRAPHFAIR_CAP", "gmms=5")
    assert run(["oracle", "fig2_wheel", "--what", "gmms"]) == 2


def test_instance_json_round_trip(tmp_path, capsys):
    run(["gen", "thm21_efx", "g=cycle:5", "--json"])
    first = capsys.readouterr().out
    path = tmp_path / "i.json"
    path.write_text(first)
    assert serialize_instance(parse_instance(path.read_text())) == first.strip()


def test_bench_reports_each_criterion(monkeypatch, capsys):
    monkeypatch.setattr(bench, "CRITERIA", bench.CRITERIA[:2])
    assert run(["bench", "paper"]) == 0
    out = capsys.readouterr().out
    assert out.count("PASS") == 2
    assert "star" in out
