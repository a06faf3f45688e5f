import json
import subprocess
import sys

import pytest

from fsx.cli import run
from fsx.stepfn import StepFunction, indicator


@pytest.fixture
def chi4(tmp_path):
    p = tmp_path / "f.json"
    p.write_text(indicator(4.0).to_json())
    return str(p)


def test_simplify(capsys):
    assert run(["simplify", "M(Ces(3), Ces(2))"]) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0] == "Tandori(L(6))"
    assert "Tandori(M(E, F))" in out


def test_simplify_json(capsys):
    assert run(["simplify", "dual(Ces(2))", "--format", "json"]) == 0
    obj = json.loads(capsys.readouterr().out)
    assert obj["expr"] == "Tandori(L(2))"
    assert obj["ast"]["node"] == "Tandori"


def test_classify(capsys):
    assert run(["classify", "Lambda(1, exp)", "--format", "json"]) == 0
    assert json.loads(capsys.readouterr().out)["quasi_normed"] == "no"


def test_norm(chi4, capsys):
    assert run(["norm", "--space", "L(2,1)", "--fn", chi4]) == 0
    assert float(capsys.readouterr().out) == 4.0


def test_factorize(chi4, capsys):
    assert run(["factorize", "--fn", chi4, "--E", "L(4)", "--F", "L(4)", "--format", "json"]) == 0
    obj = json.loads(capsys.readouterr().out)
    assert obj["certificate"]["status"] == "PASS"
    assert run(["factorize", "--fn", chi4, "--E", "L(4)", "--F", "L(4)", "--mode", "lp"]) == 0


def test_emit_csv(chi4, capsys, tmp_path):
    out = tmp_path / "h.csv"
    assert run(["emit-csv", "--fn", chi4, "--transform", "hardy", "--out", str(out)]) == 0
    rows = out.read_text().splitlines()
    assert rows[0] == "t,value"
    t, v = map(float, rows[-1].split(","))
    assert v == pytest.approx(min(1.0, 4.0 / t))


def test_verify_exit_codes(capsys):
    assert run(["verify", "Ex1c"]) == 0
    assert run(["verify", "CorruptedSplit"]) == 4
    assert run(["verify", "ProductSymExp"]) == 3
    assert run(["verify", "MultSymCond3"]) == 3
    assert run(["verify", "nope"]) == 1


def test_input_errors(tmp_path, capsys):
    assert run(["norm", "--space", "L(2)", "--fn", str(tmp_path / "missing.json")]) == 1
    bad = tmp_path / "bad.json"
    bad.write_text('{"breaks": [2, 1], "vals": [1, 1]}')
    assert run(["norm", "--space", "L(2)", "--fn", str(bad)]) == 1
    with pytest.raises(SystemExit) as ei:
        run(["frobnicate"])
    assert ei.value.code == 1


def test_parse_error(capsys):
    assert run(["simplify", "M(L(2,1),"]) == 2
    assert "column 10" in capsys.readouterr().err


def test_console_script(chi4):
    proc = subprocess.run([sys.executable, "-m", "fsx.cli", "norm", "--space", "L(2,1)", "--fn", chi4],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip() == "4.0"
