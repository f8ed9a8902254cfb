import io
import json
import subprocess
import sys

import pytest

from orbikit.cli import main
from orbikit.core import OrbiMatrix, Params
from orbikit.digraph import Flow
from orbikit.linsys import Stats
from orbikit.lpfiles import read_lp
from orbikit.optimizer import OptResult
from orbikit.sci import SCInequality
from orbikit.verify import Report


@pytest.fixture
def run(capsys, monkeypatch):
    def _run(*argv, stdin=""):
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
        code = main(list(argv))
        out, err = capsys.readouterr()
        return code, out, err

    return _run


def write_json(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return str(path)


def test_optimize_example(run, tmp_path):
    d = write_json(tmp_path, "d.json", OrbiMatrix.from_rows([[1], [-1, 3]]).to_json())
    code, out, _ = run("optimize", "--p", "2", "--q", "2", "--kind", "packing", "--in", d)
    assert code == 0
    data = json.loads(out)
    assert data["value"] == "4" and data["x"] == [{"i": 1, "j": 1}, {"i": 2, "j": 2}]
    assert OptResult.from_json(data).to_json() == data


def test_optimize_empty_objective(run, tmp_path):
    empty = tmp_path / "empty.json"
    empty.write_text("")
    code, out, _ = run("optimize", "--p", "3", "--q", "2", "--in", str(empty))
    assert code == 0 and json.loads(out)["value"] == "0" and json.loads(out)["x"] == []


def test_optimize_partitioning_q1(run):
    code, out, _ = run("optimize", "--p", "4", "--q", "1", "--kind", "partitioning")
    assert code == 0
    assert json.loads(out)["x"] == [{"i": i, "j": 1} for i in range(1, 5)]


def test_optimize_reads_stdin(run):
    code, out, _ = run("optimize", "--p", "2", "--q", "2", "--in", "-", stdin='{"entries": [{"i": 2, "j": 2, "v": "5/2"}]}')
    assert code == 0 and json.loads(out)["value"] == "5/2"


@pytest.mark.parametrize(
    "argv,code",
    [
        (["verify", "--p", "1", "--q", "2"], 3),
        (["optimize", "--p", "0", "--q", "0"], 3),
        (["optimize", "--p", "2"], 3),
        (["emit", "--system", "sci", "--p", "20", "--q", "10", "--cap", "10000"], 4),
        (["optimize", "--p", "2", "--q", "2", "--in", "/nonexistent/d.json"], 5),
        (["optimize", "--p", "2", "--q", "2", "--format", "lp"], 2),
        (["emit", "--p", "2", "--q", "2", "--format", "json"], 2),
    ],
)
def test_exit_codes(run, argv, code):
    assert run(*argv)[0] == code


def test_malformed_input(run, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run("optimize", "--p", "2", "--q", "2", "--in", str(bad))[0] == 2
    wrong = write_json(tmp_path, "wrong.json", {"p": 2, "q": 2, "cells": []})
    assert run("lift", "--in", wrong)[0] == 2
    big = write_json(tmp_path, "big.json", {"p": 2, "q": 2, "entries": [{"i": 1, "j": 1, "v": "2"}]})
    assert run("separate", "--in", big)[0] == 2


def test_unknown_flag_rejected(run):
    with pytest.raises(SystemExit) as exc:
        run("optimize", "--p", "2", "--q", "2", "--bogus")
    assert exc.value.code == 2


def test_emit_examples(run, tmp_path):
    code, out, err = run("emit", "--p", "8", "--q", "6", "--system", "compact", "--format", "lp")
    assert code == 0 and err.startswith("vars=66 ")
    assert read_lp(out).name == "compact_packing_8_6"
    code, _, err = run("emit", "--p", "1", "--q", "1", "--system", "extended")
    assert err.split()[0] == "vars=6"
    target = tmp_path / "sci.mps"
    code, out, _ = run("emit", "--p", "4", "--q", "3", "--system", "sci", "--format", "mps", "--out", str(target))
    assert code == 0 and out == "" and target.read_text().startswith("NAME          sci_packing_4_3")


def test_emit_with_objective(run, tmp_path):
    d = write_json(tmp_path, "d.json", OrbiMatrix.from_rows([[1], [-1, 3]]).to_json())
    _, out, _ = run("emit", "--p", "2", "--q", "2", "--system", "compact", "--in", d)
    assert read_lp(out).objective == {"z_1_1": 1, "z_2_1": -1, "z_2_2": 4}


def test_lift_round_trip(run, tmp_path):
    x = OrbiMatrix(Params(2, 2), {(1, 1): "1/2", (2, 2): "1/2"})
    code, out, _ = run("lift", "--in", write_json(tmp_path, "x.json", x.to_json()))
    assert code == 0
    y = Flow.from_json(json.loads(out))
    assert y.is_unit_flow() and y.to_json() == json.loads(out)


def test_separate(run, tmp_path):
    x = OrbiMatrix(Params(2, 2), {(2, 2): 1})
    code, out, _ = run("separate", "--in", write_json(tmp_path, "x.json", x.to_json()))
    data = json.loads(out)
    assert code == 0 and data == {"bar": {"i": 2, "j": 2}, "S": [{"i": 1, "j": 1}], "violation": "1"}
    assert SCInequality.from_json(data, Params(2, 2)).to_json(x) == data
    code, out, _ = run("separate", "--in", write_json(tmp_path, "v.json", OrbiMatrix(Params(2, 2), {(1, 1): 1}).to_json()))
    assert code == 0 and json.loads(out) is None


def test_verify_examples(run):
    code, out, _ = run("verify", "--p", "2", "--q", "2", "--suite", "sci")
    rep = json.loads(out)
    assert code == 0 and rep["passed"]
    assert Report.from_json(rep).to_json() == rep
    info = next(c["info"] for c in rep["checks"] if c["name"] == "sci_validity")
    assert info == {"scis": 1, "vertices": 5}


def test_verify_all_p4_q3(run):
    code, out, _ = run("verify", "--p", "4", "--q", "3", "--suite", "all", "--seed", "7")
    assert code == 0 and json.loads(out)["passed"]


def test_stats(run):
    code, out, _ = run("stats", "--p", "2", "--q", "2", "--system", "sci")
    data = json.loads(out)
    assert code == 0 and data["vars"] == 3 and data["cons"] == 6
    assert Stats.from_json(data).to_json() == data


def test_cap_env(run, monkeypatch):
    monkeypatch.setenv("ORBIKIT_CAP", "2")
    assert run("stats", "--p", "5", "--q", "5", "--system", "sci")[0] == 4


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "--p", "3", "--q", "3", "--seed", "11", "--trials", "5"],
        ["emit", "--p", "5", "--q", "4", "--system", "sci", "--format", "mps"],
        ["optimize", "--p", "6", "--q", "3", "--kind", "partitioning"],
    ],
)
def test_byte_identical_runs(argv):
    outs = [
        subprocess.run([sys.executable, "-m", "orbikit", *argv], capture_output=True, check=True).stdout
        for _ in range(2)
    ]
    assert outs[0] == outs[1] and outs[0]
