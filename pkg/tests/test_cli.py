import json
import subprocess
import sys

import pytest

from speiser.cli import main
from speiser.corpus import PACKAGE_CORPUS

C = PACKAGE_CORPUS


def run(capsys, *argv):
    status = main([str(a) for a in argv])
    out = capsys.readouterr().out
    return status, out


def js(capsys, *argv):
    status, out = run(capsys, *argv)
    return status, json.loads(out)


def test_extend_feasible(capsys):
    status, rep = js(capsys, "extend", C / "thurston-fig10.json", "--q", "6")
    assert status == 0 and rep["feasible"]


def test_extend_apply_gives_regular_graph(capsys):
    status, rep = js(capsys, "extend", C / "thurston-fig10.json", "--q", "5", "--apply")
    assert status == 0 and "graph" in rep and rep["labelling"]["ok"]


def test_extend_witness(capsys):
    status, rep = js(capsys, "extend", C / "no-local-balance.json", "--q", "5")
    assert status == 1
    w = rep["witness"]
    assert w["side"] == "cross" and sorted(w["S"]) == ["x2", "x3"]


def test_broken_twins(capsys, tmp_path):
    data = json.loads((C / "thurston-fig10.json").read_text())
    data["twins"] = data["twins"][1:]
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(data))
    status, rep = js(capsys, "validate", p)
    assert status == 2 and rep["error"] == "BadTwinPairing"


def test_missing_file(capsys, tmp_path):
    status, rep = js(capsys, "validate", tmp_path / "nope.json")
    assert status == 66 and rep["error"] == "FileError"


def test_usage_errors(capsys):
    assert main(["frobnicate"]) == 64
    assert main(["extend", str(C / "airy.json")]) == 64
    assert main([]) == 64


def test_invalid_json_is_input_error(capsys, tmp_path):
    p = tmp_path / "x.json"
    p.write_text("{")
    assert run(capsys, "validate", p)[0] == 2


def test_validate_and_bounds(capsys):
    status, rep = js(capsys, "validate", C / "airy.json")
    assert status == 0 and rep["valid"] and rep["ends"] == 3
    status, rep = js(capsys, "bounds", C / "thurston-fig10.json")
    assert (rep["q_min"], rep["q_max"]) == (5, 6)


def test_label_and_verify(capsys, tmp_path):
    status, rep = js(capsys, "label", C / "thurston-fig10-q6.json", "--q", "6")
    assert status == 0 and rep["ok"]
    assert run(capsys, "verify-label", C / "thurston-fig10-q6.json",
               C / "thurston-fig10-q6.labels.json")[0] == 0
    assert run(capsys, "verify-label", C / "thurston-fig10-amap.json",
               C / "thurston-fig10-amap.labels.json")[0] == 1


def test_duality_commands(capsys, tmp_path):
    g = C / "thurston-fig10-q5.json"
    L = C / "thurston-fig10-q5.labels.json"
    t = tmp_path / "t.json"
    assert run(capsys, "primal", g, "--labels", L, "--out", t)[0] == 0
    status, back = js(capsys, "dual", t)
    assert status == 0 and len(back["vertices"]) == len(json.loads(g.read_text())["vertices"])
    core = tmp_path / "core.json"
    assert run(capsys, "forget2", t, "--out", core)[0] == 0
    assert run(capsys, "subdivide", core, "--q", "5")[0] == 0
    status, sk = js(capsys, "skeleton", t)
    assert status == 0 and sk["black"]


def test_decompose(capsys):
    status, rep = js(capsys, "decompose", C / "airy.json", "--labels", C / "airy.labels.json")
    assert status == 0 and rep["counts"]["ends"] == 3


def test_balance_exit_codes(capsys):
    status, rep = js(capsys, "balance", C / "no-local-balance.json")
    assert status == 1
    assert {v["result"] for v in rep["verdicts"].values()} == {"Violated"}
    assert run(capsys, "balance", C / "thurston-fig10.json")[0] == 0
    assert run(capsys, "balance", C / "exp-ladder.json")[0] == 2
    assert run(capsys, "balance", C / "exp-ladder.json", "--condition", "hall")[0] == 0


def test_balance_tsv(capsys):
    status, out = run(capsys, "balance", C / "thurston-fig10.json", "--format", "tsv")
    lines = out.splitlines()
    assert lines[0].split("\t") == ["condition", "result", "global", "local", "truncated"]
    assert len(lines) == 4


def test_render_formats(capsys):
    status, out = run(capsys, "render", C / "airy.json", "--format", "dot")
    assert status == 0 and out.startswith("graph ")
    status, out = run(capsys, "render", C / "airy.json")
    assert out.startswith("<svg")
    assert run(capsys, "render", C / "exp-sin.json", "--full")[0] == 2


def test_corpus_run_deterministic(tmp_path):
    outs = []
    for i in range(2):
        p = tmp_path / f"r{i}.json"
        r = subprocess.run([sys.executable, "-m", "speiser", "corpus-run", "--out", str(p)])
        assert r.returncode == 0
        outs.append(p.read_bytes())
    assert outs[0] == outs[1]
    assert json.loads(outs[0])["passed"]


def test_corpus_run_tsv(capsys):
    status, out = run(capsys, "corpus-run", "--only", "airy", "w4", "--format", "tsv")
    assert status == 0 and out.splitlines()[1:] == ["airy\tTrue\t0", "w4\tTrue\t0"]
