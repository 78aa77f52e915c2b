import json
import subprocess
import sys

import pytest

from alttwist.cli import main
from alttwist.constructions import catalog
from alttwist.serialize import load_algebra, sidecar_path, write_json

COMPLEX_TABLE = """\
* | 1 |  v
--+---+---
1 | 1 |  v
v | v | -1
"""

QUATERNION_TABLE = """\
   * |    1 |    v |    v2 | v2·v
-----+------+------+-------+-----
   1 |    1 |    v |    v2 | v2·v
   v |    v |   -1 | -v2·v |   v2
  v2 |   v2 | v2·v |    -1 |   -v
v2·v | v2·v |  -v2 |     v |   -1
"""

# R(w (x) v) = 1 (x) 1 - v (x) w on C(-1) (x) C(-1): satisfies the axioms, not (braid)
PERTURBED_R = [["1", "0", "0", "1"], ["0", "0", "1", "0"], ["0", "1", "0", "0"], ["0", "0", "0", "-1"]]


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_build_and_table(tmp_path, capsys):
    path = tmp_path / "h.json"
    code, out, _ = run(capsys, "build", "--base", "K", "--step", "cd:-1", "--step", "cd:-1", "-o", str(path))
    assert code == 0 and "dim 4" in out
    A, maps = load_algebra(path)
    assert A.same_table(catalog("quaternions").algebra)
    assert A.name == "K cd:-1 cd:-1"
    assert "sigma" in maps
    code, out, _ = run(capsys, "table", str(path))
    assert code == 0 and out == QUATERNION_TABLE


def test_table_golden_catalog(capsys):
    assert run(capsys, "table", "complex")[1] == COMPLEX_TABLE


def test_build_is_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        assert run(capsys, "build", "--base", "quaternions", "--step", "tripling:2,3", "-o", str(p))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    assert sidecar_path(a).read_bytes() == sidecar_path(b).read_bytes()


def test_build_all_steps(tmp_path, capsys):
    for step, dim in (("cd:2", 4), ("cd-underline:2", 4), ("clifford:3", 4), ("tripling:1,-1", 6)):
        path = tmp_path / "x.json"
        assert run(capsys, "build", "--base", "complex", "--step", step, "-o", str(path))[0] == 0
        assert load_algebra(path)[0].dim == dim


def test_build_zero_parameter(tmp_path, capsys):
    code, _, err = run(capsys, "build", "--base", "K", "--step", "cd:0", "-o", str(tmp_path / "z.json"))
    assert code == 2 and "q must be nonzero" in err


def test_build_bad_step(tmp_path, capsys):
    assert run(capsys, "build", "--base", "K", "--step", "frob:1", "-o", str(tmp_path / "z.json"))[0] == 2
    assert run(capsys, "build", "--base", "nope", "-o", str(tmp_path / "z.json"))[0] == 2


def test_check_exit_codes(tmp_path, capsys):
    code, out, _ = run(capsys, "check", "octonions", "--props", "alt,assoc")
    assert code == 1
    lines = out.splitlines()
    assert lines[0].startswith("alternative: pass") and lines[1].startswith("associative: fail")
    assert run(capsys, "check", "sedenions", "--props", "alt")[0] == 1
    assert run(capsys, "check", "quaternions", "--props", "assoc,alt,flex,power:4,norm")[0] == 0


def test_check_json(capsys):
    code, out, _ = run(capsys, "check", "quaternions", "--props", "comm", "--format", "json")
    doc = json.loads(out)
    assert code == 1 and doc["dim"] == 4
    assert doc["reports"][0]["verdict"] == "fail" and doc["reports"][0]["witness"] == [1, 2]


def test_check_norm_without_sidecar(tmp_path, capsys):
    path = tmp_path / "cl.json"
    run(capsys, "build", "--base", "K", "--step", "clifford:-1", "--step", "clifford:-1", "-o", str(path))
    code, out, err = run(capsys, "check", str(path), "--props", "assoc,norm")
    assert code == 0 and "skipped" in err and out.count("\n") == 1


def test_check_bad_props(capsys):
    assert run(capsys, "check", "complex", "--props", "bogus")[0] == 2
    assert run(capsys, "check", "complex", "--props", "power:2")[0] == 2


def test_malformed_file(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("[1, 2")
    code, _, err = run(capsys, "check", str(bad))
    assert code == 2 and "invalid JSON" in err
    write_json(bad, {"dim": 2})
    assert run(capsys, "table", str(bad))[0] == 2
    assert run(capsys, "table", str(tmp_path / "missing.json"))[0] == 2


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["verify", "nonsense"])
    assert exc.value.code == 2
    assert run(capsys, "verify", "main", "--A", "c:-1")[0] == 2
    assert run(capsys, "verify", "tripling", "--B", "complex")[0] == 2


def test_verify_main(capsys):
    code, out, _ = run(capsys, "verify", "main", "--A", "c:-1", "--B", "quaternions")
    assert code == 0 and out.splitlines()[0] == "theorem main: pass"
    assert run(capsys, "verify", "main", "--A", "c:-1", "--B", "c:2", "--R", "flip")[0] == 0


def test_verify_main_vacuous(tmp_path, capsys):
    path = tmp_path / "r.json"
    write_json(path, {"A": "c:-1", "B": "c:-1", "R": PERTURBED_R})
    code, out, _ = run(capsys, "verify", "main", "--A", "c:-1", "--B", "c:-1", "--R", str(path))
    assert code == 3 and out.startswith("theorem main: vacuous")
    assert "hypothesis braid: fail" in out


def test_verify_axioms_failed(capsys):
    # flip with noncommutative B is not an alternative twisting map
    code, _, err = run(capsys, "verify", "main", "--A", "c:-1", "--B", "quaternions", "--R", "flip")
    assert code == 2 and "atm3" in err


def test_verify_ext_prints_sigma_bar(capsys):
    code, out, _ = run(capsys, "verify", "ext", "--A", "c:-1", "--B", "complex")
    assert code == 0
    assert "sigma_bar:" in out
    # both factors use the label v, so the product basis falls back to a⊗b
    body = out.split("sigma_bar:\n")[1].splitlines()
    assert body == ["  1⊗1 -> 1⊗1", "  1⊗v -> -1⊗v", "  v⊗1 -> -v⊗1", "  v⊗v -> -v⊗v"]


def test_verify_ext_json(capsys):
    code, out, _ = run(capsys, "verify", "ext", "--A", "c:-1", "--B", "complex", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["overall"] == "pass"
    assert doc["sigma_bar"][0] == ["1", "0", "0", "0"]


def test_verify_tripling(capsys):
    code, out, _ = run(capsys, "verify", "tripling", "--B", "quaternions", "--q", "2", "--r", "3")
    assert code == 0
    assert "finding alternative: fail" in out and "[expected]" in out
    code, out, _ = run(capsys, "verify", "tripling", "--B", "complex", "--q", "1", "--r", "1", "--format", "json")
    assert code == 0 and json.loads(out)["findings"][0]["verdict"] == "fail"


def test_verify_tripling_bad_params(capsys):
    assert run(capsys, "verify", "tripling", "--B", "quaternions", "--q", "0", "--r", "3")[0] == 2
    assert run(capsys, "verify", "tripling", "--B", "quaternions", "--q", "x", "--r", "3")[0] == 2


def test_verify_assoc(capsys):
    assert run(capsys, "verify", "assoc", "--A", "c:-1", "--B", "quaternions")[0] == 0
    code, _, err = run(capsys, "verify", "assoc", "--A", "K", "--B", "quaternions", "--R", "flip")
    assert code == 2 and "dim" in err


def test_console_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "alttwist.cli", "table", "complex"], capture_output=True, text=True, check=False
    )
    assert proc.returncode == 0 and proc.stdout == COMPLEX_TABLE
