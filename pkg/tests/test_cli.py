import io
import subprocess
import sys

import pytest

from uipc.cli import build_parser, main
from uipc.prover import cpc_equiv, ipc_equiv
from uipc.syntax import parse


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def test_prove():
    assert run("prove", "--logic", "ipc", "T", "p -> p") == (0, "T |- p -> p: holds (ipc)\n")
    code, out = run("prove", r"p \/ ~p")
    assert code == 1
    assert "countermodel:\nnodes: 2\n" in out
    assert run("prove", "--logic", "cpc", "--raw", r"p \/ ~p") == (0, "T\n")
    code, out = run("prove", "--logic", "cpc", "p", "q")
    assert code == 1 and "countervaluation: p=T q=F" in out


def test_ui_cpc_example():
    code, out = run("ui", "--logic", "cpc", "--side", "right", "--eliminate", "p", r"p /\ q")
    assert code == 0 and cpc_equiv(parse(out.strip()), parse("q"))


def test_ui_ipc_with_certificate():
    code, out = run("ui", "--eliminate", "p", "--certificate", r"(q -> p) /\ (p -> r)")
    lines = out.splitlines()
    assert code == 0 and ipc_equiv(parse(lines[0]), parse("q -> r"))
    assert "minimality: pass (exact)" in lines


def test_ui_several_variables():
    code, out = run("ui", "--eliminate", "p,q", "--raw", r"p /\ q /\ r")
    assert (code, out) == (0, "r\n")


def test_verify():
    assert run("verify", "--eliminate", "p", "--raw", "q -> p", "T") == (0, "T\n")
    assert run("verify", "--eliminate", "p", "--raw", "q -> p", "q") == (1, "F\n")


def test_basis():
    assert run("basis", "--vars", "p,q", "--depth", "0", "--count-only") == (0, "6\n")
    assert run("basis", "--vars", "p", "--depth", "0") == (0, "F\nT\np\n")


def test_models():
    assert run("models", "--vars", "p", "--nodes", "1", "--count-only") == (0, "2\n")
    code, out = run("models", "--vars", "p", "--nodes", "1", "--forcing", "p")
    assert out == "nodes: 1\nval: p 0\npoint: 0\n"


def test_axiom():
    code, out = run("axiom", "--vars", "x", "--bound", "y", "--phi", "y", "--psi", "x")
    assert code == 0
    assert "Psi': T = T ∧ x ≠ T\n" in out


def test_bisim(tmp_path):
    a = tmp_path / "a.km"
    b = tmp_path / "b.km"
    c = tmp_path / "c.km"
    a.write_text("nodes: 2\nle: 0 1\nval: p 1\n")
    b.write_text("nodes: 3\nle: 0 1\nle: 0 2\nval: p 1 2\n")
    c.write_text("nodes: 1\nval: p\npoint: 0\n")
    code, out = run("bisim", "--observed", "p", str(a), str(b))
    assert code == 0 and out.endswith("relation:\n0 0\n1 1\n1 2\n")
    code, out = run("bisim", "--observed", "p", "--depth", "1", "--game", str(a), str(c))
    assert code == 1 and "Spoiler wins the 1-round game" in out
    assert run("bisim", "--observed", "p", "--depth", "0", "--raw", str(a), str(c)) == (0, "T\n")


@pytest.mark.parametrize("argv", [
    ["prove", "p ->"],
    ["bogus"],
    ["ui", "p"],
    ["basis", "--vars", "1p", "--depth", "0"],
    ["bisim", "--observed", "p", "missing.km", "missing.km"],
    ["ui", "--eliminate", "p", "--models", "0", "p"],
])
def test_usage_errors(argv, capsys):
    assert run(*argv)[0] == 2
    assert capsys.readouterr().err


def test_resource_errors(monkeypatch, capsys):
    monkeypatch.setenv("UIPC_MODELS_CAP", "10")
    assert run("models", "--vars", "p,q", "--nodes", "3")[0] == 3
    monkeypatch.delenv("UIPC_MODELS_CAP")
    assert run("basis", "--vars", "p,q", "--depth", "3", "--basis-cap", "100")[0] == 3
    assert "resource limit" in capsys.readouterr().err


def test_flags_override_environment(monkeypatch):
    monkeypatch.setenv("UIPC_MODELS_CAP", "10")
    assert run("models", "--vars", "p,q", "--nodes", "2", "--models-cap", "1000",
               "--count-only") == (0, "50\n")


def test_every_subcommand_has_help(capsys):
    parser = build_parser()
    names = parser._subparsers._group_actions[0].choices
    assert set(names) == {"prove", "ui", "bisim", "basis", "verify", "axiom", "models"}
    for name in names:
        assert run(name, "--help")[0] == 0
        assert "--raw" in capsys.readouterr().out


def test_console_script_is_deterministic():
    cmd = [sys.executable, "-m", "uipc.cli", "ui", "--eliminate", "p", "--certificate",
           r"(q -> p) /\ (p -> r)"]
    a = subprocess.run(cmd, capture_output=True, env={"PYTHONHASHSEED": "1"})
    b = subprocess.run(cmd, capture_output=True, env={"PYTHONHASHSEED": "2"})
    assert a.returncode == 0 and a.stdout == b.stdout
