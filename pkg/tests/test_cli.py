import json

import pytest

from lamsn.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_and_print(capsys):
    code, out, _ = run(capsys, "parse", r"(\x.x y)")
    assert code == 0 and json.loads(out) == {"fun": {"abs": "x", "body": {"var": "x"}}, "arg": {"var": "y"}}
    code, out, _ = run(capsys, "print", '{"fun": {"var": "a"}, "arg": {"var": "b"}}')
    assert code == 0 and out.strip() == "(a b)"
    code, out, _ = run(capsys, "print", "(a b c)", "--format", "json")
    assert json.loads(out)["arg"] == {"var": "c"}


def test_input_errors(capsys):
    assert run(capsys, "parse", "(x")[0] == 2
    assert run(capsys, "sn", "x", "--rules", "nope")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "type-infer", r"(\x.(x x) \x.(x x))")[0] == 2


def test_reduce_trace(capsys):
    code, out, _ = run(capsys, "reduce", r"(\x.(x x) \y.y)", "--rules", "beta")
    lines = out.strip().splitlines()
    assert code == 0 and lines[-1] == "normal form" and lines[-2].startswith(r"2: \y.y")


def test_sn_and_eta(capsys):
    code, out, _ = run(capsys, "sn", r"(\x.(x x) \y.y)", "--rules", "beta")
    assert code == 0 and out.strip() == "SN(eta=2)"
    code, out, _ = run(capsys, "sn", r"(\x.(x x) \x.(x x))")
    assert code == 0 and out.startswith("NotSN")
    code, out, _ = run(capsys, "sn", r"(\x.(x x x) \x.(x x x))", "--fuel", "50")
    assert code == 3 and out.startswith("Exhausted")
    code, out, _ = run(capsys, "eta", r"(\x.x y)", "--rules", "beta")
    assert (code, out.strip()) == (0, "1")


def test_graph(capsys):
    code, out, _ = run(capsys, "graph", r"(\x.x y)", "--rules", "beta", "--format", "json")
    g = json.loads(out)
    assert code == 0 and len(g["nodes"]) == 2 and g["complete"]
    code, out, _ = run(capsys, "graph", r"(\x.x y)")
    assert out.startswith("digraph")


def test_type_infer(capsys):
    code, out, _ = run(capsys, "type-infer", "(x y)", "--format", "json")
    js = json.loads(out)
    assert code == 0 and js["context"] == {"x": "o -> o", "y": "o"} and js["type"] == "o"
    assert js["derivation"]["rule"] == "ArrowE"
    code, out, _ = run(capsys, "type-infer", r"\x.x")
    assert out.splitlines()[0] == r" |- \x.x : o -> o"


def test_check_writes_report(capsys, tmp_path):
    path = tmp_path / "r.json"
    code, out, _ = run(capsys, "check", "preservation", "--max-size", "4", "--report", str(path))
    rep = json.loads(path.read_text())
    assert code == 0 and out.startswith("PASS")
    assert {"property", "spec", "tested", "skipped", "counterexamples", "seconds"} <= rep.keys()


def test_check_counterexample_exit_code(capsys):
    code, out, _ = run(
        capsys, "check", "substitution_theorem", "--max-size", "3", "--pool", "x",
        "--arg-size", "4", "--fuel", "2000",
    )
    assert code == 1 and out.startswith("FAIL")


def test_check_skips_do_not_fail(capsys):
    code, out, _ = run(capsys, "check", "preservation", "--max-size", "4", "--fuel", "1")
    assert code == 0 and "skipped=0" not in out


def test_enumerate(capsys):
    code, out, _ = run(capsys, "enumerate", "--max-size", "2", "--pool", "x")
    assert code == 0 and out.split("\n")[:3] == ["x", r"\y.y", r"\y.x"]
