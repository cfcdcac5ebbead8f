import json

import pytest

from wpgraph.cli import main
from wpgraph.graph import path_graph
from wpgraph.serialize import graph_from_json, graph_to_json


@pytest.fixture
def files(tmp_path):
    def write(name, obj):
        path = tmp_path / name
        path.write_text(json.dumps(obj))
        return str(path)

    return {
        "p3": write("p3.json", graph_to_json(path_graph(3))),
        "p4": write("p4.json", graph_to_json(path_graph(4))),
        "a": write("a.json", {"mass": {"v0": "1/2", "v2": "1/2"}}),
        "b": write("b.json", {"mass": {"v1": "1/2", "v3": "1/2"}}),
        "mix": write("mix.json", {"mass": {"v0": "1/4", "v1": "1/2", "v2": "1/4"}}),
        "half": write("half.json", {"mass": {"v0": "1/2", "v1": "1/2"}}),
        "v1": write("v1.json", {"mass": {"v1": "1"}}),
        "z3": write("z3.json", {"order": 3, "table": [[0, 1, 2], [1, 2, 0], [2, 0, 1]]}),
        "bad": write("bad.json", {"mass": {"v0": "1/0"}}),
        "dir": tmp_path,
    }


def test_distance(files, capsys):
    assert main(["distance", "--graph", files["p3"], "--mu", files["half"], "--nu", files["v1"],
                 "--p", "2"]) == 0
    out = capsys.readouterr().out
    assert "cost_p = 1/2" in out and "distance = 0.707106781187" in out


def test_distance_writes_plan(files):
    plan = files["dir"] / "plan.json"
    assert main(["distance", "--graph", files["p4"], "--mu", files["a"], "--nu", files["b"],
                 "--plan", str(plan)]) == 0
    assert json.loads(plan.read_text()) == {
        "entries": [["v0", "v1", "1/2"], ["v2", "v3", "1/2"]], "cost_p": "1"}


def test_float_mode_distance(files, capsys):
    assert main(["distance", "--graph", files["p4"], "--mu", files["a"], "--nu", files["b"],
                 "--p", "2.5", "--float-mode"]) == 0
    assert "cost_p = 1.0" in capsys.readouterr().out


def test_neighbouring(files, capsys):
    assert main(["neighbouring", "--graph", files["p3"], "--mu", files["half"],
                 "--nu", files["v1"]]) == 0
    assert "alpha=1/2" in capsys.readouterr().out
    assert main(["neighbouring", "--graph", files["p4"], "--mu", files["a"], "--nu", files["b"]]) == 0
    assert capsys.readouterr().out.strip() == "none"


def test_bs_witness(files, capsys):
    out = files["dir"] / "xi.json"
    assert main(["bs-witness", "--graph", files["p4"], "--mu", files["a"], "--nu", files["b"],
                 "--s", "1/2", "--out", str(out)]) == 0
    assert "witness produced" in capsys.readouterr().out
    assert sum(len(v) for v in json.loads(out.read_text()).values()) == 4


def test_bs_witness_only_half(files):
    assert main(["bs-witness", "--graph", files["p4"], "--mu", files["a"], "--nu", files["b"],
                 "--s", "1/4"]) == 2


def test_teleport(files, capsys):
    assert main(["teleport", "--graph", files["p3"], "--mu", files["mix"], "--u", "v1",
                 "--w", "v2", "--t", "1/2"]) == 0
    out = capsys.readouterr().out
    assert "c = 3/4" in out and "certified (alpha = 1/4)" in out


def test_genericize(files, capsys):
    assert main(["genericize", "--graph", files["p4"], "--nu", files["a"], "--epsilon", "1/10"]) == 0
    assert "< epsilon^p: True" in capsys.readouterr().out


def test_automorphisms(files, capsys):
    assert main(["automorphisms", "--graph", files["p4"]]) == 0
    assert "|Aut| = 2" in capsys.readouterr().out


def test_frucht_and_prescribe(files, capsys):
    out = files["dir"] / "g.json"
    assert main(["frucht", "--group", files["z3"], "--out", str(out)]) == 0
    assert "|Aut| = 3, |H| = 3" in capsys.readouterr().out
    graph_from_json(json.loads(out.read_text()))
    assert main(["prescribe", "--group", files["z3"], "--p", "2"]) == 0


def test_suite_report_is_byte_stable(files):
    path = files["dir"] / "report.json"
    argv = ["suite", "--graph", files["p4"], "--p", "1", "--seed", "7", "--samples", "20",
            "--json", str(path)]
    runs = []
    for _ in range(2):
        assert main(argv) == 0
        runs.append(path.read_bytes())
    assert runs[0] == runs[1]
    report = json.loads(runs[0])
    assert set(report) == {"command", "inputs", "results", "checks", "seed", "version"}
    assert report["seed"] == 7 and len(report["inputs"]["graph"]) == 64


@pytest.mark.parametrize(
    "argv",
    [
        ["distance", "--graph", "missing.json", "--mu", "x", "--nu", "y"],
        ["distance", "--p", "1.5"],
        ["nope"],
        [],
    ],
)
def test_usage_and_input_errors(files, argv):
    argv = [files.get(a, a) if isinstance(a, str) else a for a in argv]
    assert main(argv) == 2


def test_bad_rational_and_exponent(files):
    assert main(["distance", "--graph", files["p3"], "--mu", files["bad"], "--nu", files["v1"]]) == 2
    assert main(["distance", "--graph", files["p3"], "--mu", files["half"], "--nu", files["v1"],
                 "--p", "1.5"]) == 2
    assert main(["suite", "--graph", files["p3"], "--float-mode", "--p", "2"]) == 2
