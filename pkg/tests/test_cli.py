import json
import subprocess
import sys

import pytest

from crepant_k.cli import main
from crepant_k.orbifold_model import builtin_spec_text, parse_spec


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_group_e8(capsys):
    code, out, _ = run(capsys, "group", "E8")
    assert code == 0
    assert "order: 120" in out and "classes: 9" in out
    assert "1.6180" in out and "-0.6180" in out


def test_group_a1_structured(capsys):
    code, out, _ = run(capsys, "group", "A1", "--format", "structured")
    d = json.loads(out)
    assert code == 0
    assert (d["order"], d["num_classes"]) == (2, 2)
    assert d["character_table"] == [["1.0000", "1.0000"], ["1.0000", "-1.0000"]]


@pytest.mark.parametrize("verb", ["group", "mckay", "resolve"])
def test_bad_label_is_usage_error(capsys, verb):
    code, _, err = run(capsys, verb, "X3")
    assert code == 2
    assert "X3" in err


def test_mckay(capsys):
    code, out, _ = run(capsys, "mckay", "D4")
    assert code == 0 and "affine type: D4~" in out and "degree vector: 1 1 1 1 2" in out
    code, out, _ = run(capsys, "mckay", "A1", "--format", "structured")
    assert json.loads(out)["adjacency"] == [[0, 2], [2, 0]]
    code, out, _ = run(capsys, "mckay", "E6", "--format", "structured")
    assert len(json.loads(out)["adjacency"]) == 7
    code, out, _ = run(capsys, "mckay", "E6", "--export", "dot")
    assert out.startswith("graph mckay {")
    code, out, _ = run(capsys, "mckay", "E6", "--export", "adjlist")
    assert len(out.splitlines()) == 7


@pytest.mark.parametrize("label,spheres,k0", [("A1", 1, 2), ("E7", 7, 8), ("D6", 6, 7)])
def test_resolve(capsys, label, spheres, k0):
    code, out, _ = run(capsys, "resolve", label, "--format", "structured")
    d = json.loads(out)
    assert code == 0 and d["passed"]
    assert d["sphere_count"] == spheres
    assert d["fiber_k"] == {"k0": {"free_rank": k0, "torsion": []}, "k1": {"free_rank": 0, "torsion": []}}
    assert d["representation_ring_k"] == d["fiber_k"]


def test_verify_exit_codes(capsys, tmp_path):
    assert run(capsys, "verify", "builtin:kummer")[0] == 0
    assert run(capsys, "verify", "builtin:manifold")[0] == 0
    code, out, _ = run(capsys, "verify", "builtin:broken")
    assert code == 1 and "22" in out and "overall: FAIL" in out

    path = tmp_path / "kummer.spec"
    path.write_text(builtin_spec_text("kummer"))
    code, out, _ = run(capsys, "verify", str(path), "--format", "structured", "--workers", "3")
    assert code == 0 and json.loads(out)["passed"]


def test_verify_parse_errors(capsys, tmp_path):
    bad = tmp_path / "bad.spec"
    bad.write_text(builtin_spec_text("kummer").replace('"A1"', '"E9"', 1))
    code, _, err = run(capsys, "verify", str(bad))
    assert code == 2 and "$.strata[0].group" in err
    assert run(capsys, "verify", str(tmp_path / "missing.spec"))[0] == 2
    assert run(capsys, "verify", "builtin:nope")[0] == 2
    assert run(capsys, "verify")[0] == 2
    assert run(capsys)[0] == 2
    assert run(capsys, "verify", "builtin:kummer", "--workers", "0")[0] == 2


def test_verify_flag(capsys):
    code, out, _ = run(capsys, "verify", "builtin:kummer", "--assume-degenerate-boundary")
    assert code == 0
    assert "conditional total" in out


def test_structured_report_round_trips_spec_notation(capsys):
    # K-pairs in the report use the same object notation as spec files
    code, out, _ = run(capsys, "verify", "builtin:kummer", "--format", "structured")
    d = json.loads(out)
    spec = parse_spec(builtin_spec_text("kummer"))
    assert d["levels"][0]["orbifold_subquotient"]["k0"] == {"free_rank": 2, "torsion": []}
    assert d["spec"] == spec.name


def test_euler(capsys):
    code, out, _ = run(capsys, "euler", "builtin:kummer")
    assert code == 0 and "orbifold 24, resolution 24" in out
    code, out, _ = run(capsys, "euler", "builtin:kummer_x_torus", "--format", "structured")
    assert json.loads(out) == {"spec": "kummer-x-torus", "euler_orbifold": 0, "euler_resolution": 0, "agree": True}


def test_help_documents_label_mapping(capsys):
    assert main(["--help"]) == 0
    out = capsys.readouterr().out
    assert "Cyclic(n+1)" in out and "BinaryDihedral(n-2)" in out


def test_module_entry_point_and_determinism():
    cmd = [sys.executable, "-m", "crepant_k", "selftest"]
    a = subprocess.run(cmd, capture_output=True, text=True, timeout=300)
    b = subprocess.run(cmd, capture_output=True, text=True, timeout=300)
    assert a.returncode == 0, a.stdout + a.stderr
    assert a.stdout == b.stdout
    assert a.stdout.count("[PASS]") == 6


def test_selftest_catches_sabotaged_snf(monkeypatch, capsys):
    from crepant_k import fgab, selftest

    def sabotaged(m):
        u, d, v = fgab.smith_normal_form(m)
        return u, d.scale(2), v

    monkeypatch.setattr(selftest, "smith_normal_form", sabotaged)
    monkeypatch.setattr(selftest, "CHECKS", (selftest.check_fgab_properties,))
    code, out, _ = run(capsys, "selftest")
    assert code == 1
    assert "[FAIL] fgab property suite: snf" in out
