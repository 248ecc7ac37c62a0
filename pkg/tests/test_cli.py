import json
import subprocess
import sys
from pathlib import Path

import pytest

from supersingular import __version__
from supersingular.cli import main

FIX = Path(__file__).parent / "fixtures"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_classify_examples(capsys):
    assert run(capsys, "classify", "--a1", "0", "--a2", "14", "--p", "7")[:2] == (0, "ss_split\n")
    assert run(capsys, "classify", "--a1", "1", "--a2", "1", "--p", "7")[1] == "ordinary\n"
    code, out, err = run(capsys, "classify", "--a1", "0", "--a2", "0", "--p", "5")
    assert code == 2 and out == "" and "p >= 7" in err
    assert len(err.strip().splitlines()) == 1


def test_classify_json(capsys):
    code, out, _ = run(capsys, "classify", "--a1", "3", "--a2", "7", "--p", "7", "--format", "json")
    doc = json.loads(out)
    assert doc["version"] == __version__
    assert doc["parameters"] == {"a1": 3, "a2": 7, "p": 7}
    assert doc["class"] == "prank1" and doc["p_rank"] == 1


@pytest.mark.parametrize("argv", [
    ["nonsense"],
    [],
    ["classify", "--a1", "17", "--a2", "0", "--p", "7"],       # not Weil
    ["classify", "--a1", "x", "--a2", "0", "--p", "7"],
    ["rm-factor", "--a1", "0", "--a2", "0", "--p", "7", "--d", "4"],
    ["census", "--curve", "1,2", "--x", "50"],
    ["census", "--curve-file", "/no/such/file", "--x", "50"],
    ["sieve-demo", "--census", "/no/such.csv", "--x", "100", "--primes", "3"],
    ["bounds", "--x", "10"],
])
def test_errors_exit_two(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2
    assert len(err.strip().splitlines()) == 1 and err.startswith("supersingular: error:")


def test_rm_factor(capsys):
    assert run(capsys, "rm-factor", "--a1", "2", "--a2", "13", "--p", "7", "--d", "2")[1] == "(2 + 2*sqrt(2))/2\n"
    assert run(capsys, "rm-factor", "--a1", "1", "--a2", "1", "--p", "7", "--d", "5")[1] == "none\n"


def test_census_atomic_and_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["census", "--curve-file", str(FIX / "x5mx1.curve"), "--x", "300", "--out", str(a)]) == 0
    assert main(["census", "--curve", "0,0,0,-1,1", "--x", "300", "--workers", "2", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert a.read_text().startswith("p,n1,n2,a1,a2,delta,class\n7,7,")
    assert sorted(p.name for p in tmp_path.iterdir()) == ["a.csv", "b.csv"]
    assert capsys.readouterr().out == ""


def test_failed_write_leaves_target(tmp_path, capsys):
    target = tmp_path / "keep.csv"
    target.write_text("old\n")
    assert main(["census", "--curve", "1,2", "--x", "50", "--out", str(target)]) == 2
    assert target.read_text() == "old\n"


def test_sieve_demo_inline_and_config(tmp_path, capsys):
    csv = tmp_path / "c.csv"
    main(["census", "--curve-file", str(FIX / "x5p1.curve"), "--x", "500", "--out", str(csv)])
    code, out, _ = run(capsys, "sieve-demo", "--census", str(csv), "--x", "500", "--primes", "3,5")
    assert code == 0
    doc = json.loads(out)
    rep = doc["report"]
    assert rep["identity"] and rep["total"] == len(doc["members"]) == rep["union"] + rep["leftover"]
    assert doc["parameters"]["primes"] == [3, 5]
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"x": 500, "t": 2, "primes": [3, 5], "case": 4}))
    assert run(capsys, "sieve-demo", "--census", str(csv), "--config", str(cfg))[1] == out
    cfg.write_text(json.dumps({"x": 500, "t": 2, "primes": [3, 5, 7, 11], "case": 4}))
    assert run(capsys, "sieve-demo", "--census", str(csv), "--config", str(cfg))[0] == 2


def test_bounds(capsys):
    code, out, _ = run(capsys, "bounds", "--x", "1e6")
    doc = json.loads(out)
    assert doc["ratio"] == pytest.approx(doc["ratio_closed_form"], rel=1e-12)
    assert doc["rm_or_qm"] == pytest.approx(36130, rel=5e-4)
    assert set(doc["schedule"]) == {"generic", "rm", "qm"}


def test_verify_splitting(capsys):
    code, out, _ = run(capsys, "verify-splitting", "--ell", "3,5", "--x", "100")
    lines = out.splitlines()
    assert lines[0] == "i,ell,p,legendre_side,factor_side,agree"
    assert all(l.endswith(",true") for l in lines[1:])
    code, out, _ = run(capsys, "verify-splitting", "--format", "json", "--ell", "13", "--x", "100")
    assert json.loads(out)["disagreements"] == 0


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "supersingular", "classify", "--a1", "0",
                        "--a2", "7", "--p", "11"], capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout == "ordinary\n"
    r = subprocess.run([sys.executable, "-m", "supersingular", "--version"], capture_output=True, text=True)
    assert r.stdout.strip() == __version__
