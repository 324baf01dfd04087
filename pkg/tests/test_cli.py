import io
import json
import subprocess
import sys

import pytest

from reglab.cli import EXIT_ENGINE, EXIT_INPUT, EXIT_OK, main, run
from reglab.parser import parse_expression, parse_ratfunc
from reglab.serialize import dumps, ratfunc_from_json, without_timings
from test_serialize import floats_outside_advisory


def run_json(argv, capsys):
    code = main(argv + ["--json", "-"])
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_parse_examples_from_the_command_line_grammar():
    phi = parse_expression("(u*(u^2+v^2), v*(u^2+v^2))")
    assert phi.domain_vars == ("u", "v") and phi.evaluate((1, 2)) == (5, 10)


def test_resolve_example(capsys):
    code, doc = run_json(["resolve", "x^2/(x^2+y^2)", "--seed", "7"], capsys)
    assert code == EXIT_OK
    assert doc["status"] == "regular" and doc["seed"] == 7
    assert doc["result"]["blowups"] == 1
    final = ratfunc_from_json(doc["result"]["final"])
    assert final == parse_ratfunc("4*t^2/(4*t^2+(t^2-1)^2)", ("rho", "t"))
    assert floats_outside_advisory(doc) == []


def test_quadrant_example(capsys):
    code, doc = run_json(["quadrant-verify", "--map", "g", "--target", "3", "1/2", "--tol", "1e-9"], capsys)
    assert code == EXIT_OK
    assert doc["result"]["residual_advisory"] < 1e-9
    assert floats_outside_advisory(doc) == []


def test_lift_example(capsys):
    code, doc = run_json(["lift", "(s, s^2)", "--order", "8"], capsys)
    assert code == EXIT_OK
    lifts = doc["result"]["lifts"]
    assert len(lifts) == 2 and all(l["verified"] for l in lifts)


def test_eval_and_compose(capsys):
    code, doc = run_json(["eval", "x^2/(x^2+y^2)", "--at", "(1/2, 1)"], capsys)
    assert code == EXIT_OK and doc["result"]["value"] == "1/5"
    code, doc = run_json(["compose", "(x^2/(x^2+y^2), y)", "--samples", "10"], capsys)
    assert code == EXIT_OK and doc["status"] == "regular"


def test_complement(capsys):
    code, doc = run_json(["complement", "(0,0)", "--samples", "50", "--targets", "3"], capsys)
    assert code == EXIT_OK and doc["status"] == "ok"
    assert floats_outside_advisory(doc) == []


@pytest.mark.parametrize("argv,expected", [
    (["resolve", "x/(x^2+y^2)"], EXIT_ENGINE),
    (["resolve", "x/+"], EXIT_INPUT),
    (["resolve", "x/0"], EXIT_INPUT),
    (["frob", "x"], EXIT_INPUT),
    (["resolve", "--seed", "abc", "x"], EXIT_INPUT),
    (["lift", "(s, t)"], EXIT_INPUT),
    (["lift", "(s, s^2)", "--center", "1"], EXIT_INPUT),
    (["quadrant-verify", "--map", "f", "--target", "0", "1"], EXIT_INPUT),
    (["eval", "x/y", "--at", "(1, 0)"], EXIT_INPUT),
    (["complement", "(0,0),(1"], EXIT_INPUT),
    (["resolve", "x*y*z"], EXIT_INPUT),
    (["eval", "x+y", "--at", "(1, 2)"], EXIT_OK),
])
def test_exit_code_corpus(argv, expected, capsys):
    assert main(argv + ["--quiet", "--json", "/dev/null"]) == expected
    if expected == EXIT_INPUT:
        assert "reglab" in capsys.readouterr().err


def test_input_error_emits_an_error_document(capsys):
    code, doc = run_json(["complement", "(0,0),(1,2)"], capsys)
    assert code == EXIT_INPUT and doc["status"] == "input-error"
    assert "offset" in doc["result"]["error"]["message"]


def test_engine_failure_still_emits_a_document(capsys):
    code, doc = run_json(["resolve", "x/(x^2+y^2)"], capsys)
    assert code == EXIT_ENGINE and doc["status"] == "not-locally-bounded-suspected"


def test_flags_before_or_after_the_verb():
    a = run(["--seed", "3", "eval", "x", "--at", "(2)"])
    b = run(["eval", "x", "--at", "(2)", "--seed", "3"])
    assert a[0] == b[0] == EXIT_OK
    assert dumps(without_timings(a[1])) == dumps(without_timings(b[1]))


def test_identical_runs_are_byte_identical():
    argv = ["resolve", "x^2*y/(x^4+y^2)", "--seed", "5"]
    first = dumps(without_timings(run(argv)[1]))
    second = dumps(without_timings(run(argv)[1]))
    assert first == second


def test_seed_from_environment(monkeypatch):
    monkeypatch.setenv("REGLAB_SEED", "41")
    assert run(["eval", "x", "--at", "(1)"])[1]["seed"] == 41
    assert run(["eval", "x", "--at", "(1)", "--seed", "2"])[1]["seed"] == 2


def test_expression_from_stdin(monkeypatch, capsys):
    monkeypatch.setattr(sys, "stdin", io.StringIO("x^2/(x^2+y^2)\n"))
    code, doc = run_json(["resolve", "-"], capsys)
    assert code == EXIT_OK and doc["result"]["blowups"] == 1


def test_console_script_runs():
    proc = subprocess.run([sys.executable, "-m", "reglab.cli", "eval", "x*y", "--at", "(2, 3)", "--json", "-",
                           "--quiet"], capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["value"] == "6"
