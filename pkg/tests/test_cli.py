from __future__ import annotations

import subprocess
import sys

import pytest

from braided_gauge.cli import InputError, main, parse_params, run
from braided_gauge.cyclotomic import parse_scalar
from braided_gauge.modelfile import data_path

ANYONIC = str(data_path("anyonic.model"))


def call(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def edited_model(tmp_path, old, new, name="edited.model"):
    text = data_path("anyonic.model").read_text()
    assert old in text
    path = tmp_path / name
    path.write_text(text.replace(old, new, 1))
    return path


def test_parse_params():
    p = parse_params("a1=1, b2=-1-q", ("a1", "b2"))
    assert p == {"a1": parse_scalar("1", 3), "b2": parse_scalar("-1-q", 3)}
    assert parse_params("") == {}
    for bad, msg in (("a1", "name=value"), ("zz=1", "unknown"), ("a1=1,a1=2", "twice"),
                     ("a1=1+", "a1")):
        with pytest.raises(InputError, match=msg):
            parse_params(bad, ("a1",))


def test_verify_bundled_model(capsys):
    code, out, _ = call(capsys, "verify", "--model", ANYONIC)
    assert code == 0
    assert out.rstrip().endswith("RESULT: PASS")
    code, out, _ = call(capsys, "verify", "--model", ANYONIC, "--suite", "hopf")
    assert code == 0


def test_verify_reports_a_wrong_antipode(capsys, tmp_path):
    path = edited_model(tmp_path, "antipode xi -> -xi", "antipode xi -> xi")
    code, out, _ = call(capsys, "verify", "--model", str(path))
    assert code == 1
    assert "left antipode" in out
    assert "RESULT: FAIL" in out


def test_verify_rejects_a_malformed_model(capsys, tmp_path):
    path = tmp_path / "bad.model"
    path.write_text("modulus 3\nalgebra A\n  basis 1:0 t:1\n  unit 1\n  mul t t -> t\n")
    code, out, err = call(capsys, "verify", "--model", str(path))
    assert code == 2
    assert out == ""
    assert "bad.model:5" in err
    code, _, err = call(capsys, "verify", "--model", str(tmp_path / "missing.model"))
    assert code == 2
    assert "cannot read" in err


def test_anyonic_report_zero_field(capsys):
    code, out, _ = call(capsys, "report", "anyonic")
    assert code == 0
    assert "F(xi) = 0" in out
    assert "F(xi2) = 0" in out
    assert "FLAT: yes; gauge-equivalent to zero field: yes" in out


def test_anyonic_report_nonflat_and_flat(capsys):
    code, out, _ = call(capsys, "report", "anyonic", "--params", "a1=1")
    assert code == 0
    assert "F(xi2) = (1+q) dtheta dtheta" in out
    assert "FLAT: no; gauge-equivalent to zero field: no" in out
    code, out, _ = call(capsys, "report", "anyonic", "--params", "a1=1,b2=-1-q")
    assert code == 0
    assert "FLAT: yes; gauge-equivalent to zero field: yes" in out


def test_composite_report(capsys):
    code, out, _ = call(capsys, "report", "composite")
    assert code == 0
    assert out.rstrip().endswith("RESULT: PASS")
    code, out, _ = call(capsys, "report", "composite", "--params",
                        "a[x]=1,b[1]=2,c1[x]=1,c2[1]=-1,A1[1.x]=1,A1[x.1]=-1,s1[1]=3")
    assert code == 0
    assert "F = 0: no" in out
    assert "RESULT: PASS" in out
    code, _, err = call(capsys, "report", "composite", "--params", "a[y]=1")
    assert code == 2
    assert "no basis element" in err
    code, _, err = call(capsys, "report", "composite", "--params", "A1[1.1]=1")
    assert code == 2
    assert "one-form" in err


def test_reports_are_deterministic(capsys, tmp_path):
    argv = ["report", "anyonic", "--params", "a1=2,a2=q,b1=-1/2,b2=3"]
    _, first, _ = call(capsys, *argv)
    _, second, _ = call(capsys, *argv)
    assert first == second
    out = tmp_path / "r.txt"
    code, printed, _ = call(capsys, *argv, "--out", str(out))
    assert code == 0 and printed == ""
    assert out.read_text() == first


def test_tangle_command(capsys, tmp_path):
    code, out, _ = call(capsys, "tangle", str(data_path("hopf.tgl")))
    assert code == 0
    assert call(capsys, "tangle", str(data_path("hopf.tgl")), "--env", ANYONIC)[1] == out
    assert out.rstrip().endswith("RESULT: PASS")
    bad = tmp_path / "sq.tgl"
    bad.write_text("check: psi[B,B] . psi[B,B] == id[B*B]\n")
    code, out, _ = call(capsys, "tangle", str(bad))
    assert code == 1
    assert "first counterexample" in out
    assert "xi⊗xi" in out
    empty = tmp_path / "empty.tgl"
    empty.write_text("")
    assert call(capsys, "tangle", str(empty))[0] == 0
    broken = tmp_path / "broken.tgl"
    broken.write_text("check: mul . (id[B] * mul == mul\n")
    code, _, err = call(capsys, "tangle", str(broken))
    assert code == 2
    assert "broken.tgl" in err


def test_bad_invocations(capsys):
    assert call(capsys, "report", "anyonic", "--params", "zz=1")[0] == 2
    assert call(capsys, "report", "anyonic", "--model", ANYONIC)[0] == 2
    assert call(capsys, "frobnicate")[0] == 2
    assert call(capsys)[0] == 2
    with pytest.raises(SystemExit):
        run(["report", "nothing"])


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "braided_gauge", "report", "anyonic"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0
    assert "RESULT: PASS" in res.stdout
