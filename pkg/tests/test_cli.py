from __future__ import annotations

import json
import subprocess
import sys

import pytest

from wxz.catalog import load_catalog
from wxz.cli import load_matrix, main
from wxz.tensor import ONE4, P


def _run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_check_flip(capsys):
    code, out, _ = _run(capsys, "check", "--w", "P", "--x", "1", "--z", "P")
    doc = json.loads(out)
    assert code == 0 and doc["pass"] is True
    assert doc["schema"] == "wxz-check" and doc["version"] == 1
    assert set(doc["residuals"].values()) == {"0"}


def test_check_generic_entry_and_perturbation(capsys, tmp_path):
    code, out, _ = _run(capsys, "check", "--w", "R_3.1(2,3,5)", "--x", "1", "--z", "R_1.3(1)", "--second-inverse")
    assert code == 0 and json.loads(out)["pass"]
    w = load_matrix("R_3.1(2,3,5)").to_json()
    w["rows"][1][2] = "1"
    path = tmp_path / "w.json"
    path.write_text(json.dumps(w), encoding="utf-8")
    code, out, _ = _run(capsys, "check", "--w", str(path), "--x", "1", "--z", "R_1.3(1)")
    assert code == 1 and not json.loads(out)["pass"]


def test_check_triple_json(capsys):
    triple = json.dumps({"W": P.to_json(), "X": ONE4.to_json(), "Z": P.to_json()})
    code, out, _ = _run(capsys, "check", "--triple", triple)
    assert code == 0


def test_solve_z_identity(capsys):
    code, out, _ = _run(capsys, "solve-z", "--x", "1")
    doc = json.loads(out)
    assert code == 0 and doc["dimension"] == 16 and len(doc["basis"]) == 16 and doc["rank"] == 0


def test_solve_w_writes_file(capsys, tmp_path):
    dest = tmp_path / "w.json"
    code, out, _ = _run(capsys, "solve-w", "--x", "P", "--out", str(dest))
    doc = json.loads(dest.read_text(encoding="utf-8"))
    assert code == 0 and out == "" and doc["unknown"] == "W" and doc["rank"] + doc["dimension"] == 16


def test_reduce_a7(capsys):
    code, out, _ = _run(capsys, "reduce", "--a", "A_7(2,3,5,7,1/2,-1,3)")
    doc = json.loads(out)
    assert code == 0 and doc["form"] == 7 and doc["roundtrip"] is True


def test_orbit(capsys):
    code, out, _ = _run(capsys, "orbit", "--w", "P", "--x", "1", "--z", "P", "--depth", "3", "--seed", "2")
    doc = json.loads(out)
    assert code == 0 and len(doc["triples"]) == 4 and all(doc["verified"])


def test_dump(capsys):
    code, out, _ = _run(capsys, "dump", "--scope", "generic")
    doc = json.loads(out)
    assert code == 0 and doc["count"] == 7 and doc["families"] == {"R": 12, "X": 23, "A": 14}
    code, out, _ = _run(capsys, "dump", "--entry", "wxz-n30", "--sample", "0")
    assert code == 0 and json.loads(out)["realizations"]


def test_verify_ybe(capsys):
    code, out, err = _run(capsys, "verify", "--scope", "ybe", "--samples", "20", "--seed", "7")
    doc = json.loads(out)
    assert code == 0
    assert doc["summary"]["passed"] == 12 and doc["summary"]["failed"] == 0
    assert "12/12" in err


def test_verify_is_deterministic(capsys):
    argv = ("verify", "--scope", "xxz", "--samples", "2", "--seed", "3", "--entry", "xxz-X_8-3", "--entry", "xxz-X_1-1")
    _, first, _ = _run(capsys, *argv)
    _, second, _ = _run(capsys, *argv)
    assert first == second
    assert json.loads(first)["summary"]["entries"] >= 2


def test_corrupted_catalog_names_entry(capsys, tmp_path):
    data = json.load(open(load_catalog().source, encoding="utf-8"))
    data["families"]["R_2.1"]["rows"][3] = "0, 0, 0, 2"
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(data), encoding="utf-8")
    code, out, err = _run(capsys, "verify", "--scope", "ybe", "--samples", "3", "--catalog", str(path))
    assert code == 1
    assert "FAILED ybe-R_2.1" in err
    assert json.loads(out)["summary"]["failed_ids"] == ["ybe-R_2.1"]


def test_error_exit_codes(capsys, tmp_path):
    bad = tmp_path / "m.json"
    bad.write_text("{oops", encoding="utf-8")
    code, _, err = _run(capsys, "reduce", "--a", str(bad))
    assert code == 2 and "error" in err
    code, _, err = _run(capsys, "check", "--w", "P")
    assert code == 2 and "missing" in err
    code, _, _ = _run(capsys, "reduce", "--a", "R_9.9(1)")
    assert code == 2
    with pytest.raises(SystemExit):
        main(["verify", "--scope", "bogus"])


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "wxz", "check", "--w", "P", "--x", "1", "--z", "P"],
                          capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0 and json.loads(proc.stdout)["pass"]
