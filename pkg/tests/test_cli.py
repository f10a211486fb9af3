import json
import subprocess
import sys

import pytest

from dgahh import cli, verify
from dgahh.dga import builtin_Y2, unit_dga


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_homology_y2(capsys):
    code, out, _ = run(capsys, "homology", "--builtin", "Y2")
    assert code == 0
    rows = [line.split("=")[1].strip() for line in out.splitlines() if line.startswith("  H_")]
    assert rows[:4] == ["F_2", "0", "F_2", "0"]


def test_homology_endomorphism_json(capsys):
    code, out, _ = run(capsys, "homology", "--builtin", "endomorphism", "--p", "5", "--json")
    assert code == 0
    data = json.loads(out)
    assert data["schema"] == 1
    assert {r["degree"]: r["group"] for r in data["homology"]} == {-1: "F_5", 0: "F_5", 1: "0"}


def test_homology_from_file(tmp_path, capsys):
    f = tmp_path / "unit.json"
    f.write_text(unit_dga().dumps())
    code, out, _ = run(capsys, "homology", "--file", str(f))
    assert code == 0 and "H_0   = Z" in out


def test_ring_structure_flag(capsys):
    code, out, _ = run(capsys, "homology", "--builtin", "Y2", "--ring-structure")
    assert code == 0 and "class of e1^2" in out


@pytest.mark.parametrize("argv,expected", [
    (["hh", "--builtin", "Y2", "--p", "2", "--max-degree", "6"], [1, 0, 1, 0, 0, 0, 1]),
    (["hh", "--builtin", "formal-poly", "--p", "2", "--max-degree", "7"], [1, 0, 1, 1, 1, 1, 1, 1]),
])
def test_hh_tables(capsys, argv, expected):
    code, out, _ = run(capsys, *argv, "--json")
    assert code == 0
    assert [r["dimension"] for r in json.loads(out)["records"]] == expected


def test_hh_closed_form(capsys):
    code, out, _ = run(capsys, "hh", "--closed-form", "--algebra", "exterior x 2", "--p", "3")
    assert code == 0
    assert "Λ(sx) (1,2)" in out and "Γ(phi2x) (2,4)" in out


def test_hh_cohomology_and_unnormalized(capsys):
    code, out, _ = run(capsys, "hh", "--builtin", "Y2", "--max-degree", "4", "--cohomology")
    assert code == 0 and out.startswith("HH^n")
    code, out, _ = run(capsys, "hh", "--builtin", "Y2", "--max-degree", "4", "--unnormalized", "--json")
    assert [r["dimension"] for r in json.loads(out)["records"]] == [1, 0, 1, 0, 0]


def test_ss_y_chart(capsys):
    code, out, _ = run(capsys, "ss", "--variant", "Y", "--p", "3", "--bound", "8")
    assert code == 0
    assert "g3[st0] -> sx" in out
    assert "E^3 page" in out


def test_ss_x_m(capsys):
    code, out, _ = run(capsys, "ss", "--variant", "X", "--p", "3", "--m", "3", "--bound", "14", "--json")
    assert code == 0
    assert json.loads(out)["e_infinity"] == [1, 0, 1, 0, 1] + [0] * 9 + [1]


def test_ss_unit_only(capsys):
    code, out, _ = run(capsys, "ss", "--variant", "Y", "--p", "3", "--bound", "0")
    assert code == 0 and out.rstrip().endswith("0:1")


def test_list_builtins(capsys):
    code, out, _ = run(capsys, "--list-builtins")
    assert code == 0
    for name in ("Y2", "formal-poly", "endomorphism", "cone-p"):
        assert name in out


@pytest.mark.parametrize("argv", [
    ["homology"],
    ["homology", "--file", "/nonexistent/x.json"],
    ["hh", "--builtin", "Y2", "--p", "3"],
    ["hh", "--builtin", "endomorphism"],
    ["hh", "--closed-form", "--p", "3"],
    ["hh", "--closed-form", "--algebra", "polynomial x 3", "--p", "3"],
    ["ss", "--variant", "dualSteenrod", "--p", "2"],
    ["homology", "--builtin", "cone-p", "--p", "4"],
    [],
])
def test_input_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["homology", "--builtin", "nope"])
    assert exc.value.code == 2


def test_invalid_file_reports_violations(tmp_path, capsys):
    data = json.loads(builtin_Y2().dumps())
    for entry in data["differential"]:
        if entry["degree"] == 1:
            entry["value"] = 3
    f = tmp_path / "bad.json"
    f.write_text(json.dumps(data))
    code, _, err = run(capsys, "homology", "--file", str(f))
    assert code == 2 and "leibniz" in err
    (tmp_path / "junk.json").write_text("{not json")
    code, _, err = run(capsys, "homology", "--file", str(tmp_path / "junk.json"))
    assert code == 2 and "not valid JSON" in err


def test_verify_failure_exits_1(monkeypatch, capsys):
    failing = verify.CheckResult("x", "forced failure", 1, 0, False, 0.0)
    monkeypatch.setattr(verify, "run_suite", lambda *a, **k: [failing])
    code, out, _ = run(capsys, "verify")
    assert code == 1 and "FAIL" in out


def test_verify_properties_json_is_deterministic(capsys):
    outs = []
    for _ in range(2):
        code, out, _ = run(capsys, "verify", "--suite", "properties", "--seed", "42", "--json")
        assert code == 0
        outs.append(out)
    assert outs[0] == outs[1]
    data = json.loads(outs[0])
    assert data["schema"] == 1 and data["passed"] is True and "seconds" not in outs[0]


def test_json_outputs_are_byte_identical(capsys):
    for argv in (["hh", "--builtin", "Y2", "--json"], ["ss", "--p", "5", "--bound", "10", "--json"],
                 ["homology", "--builtin", "formal-poly", "--p", "3", "--json", "--ring-structure"]):
        assert run(capsys, *argv)[1] == run(capsys, *argv)[1]


def test_jobs_env_var(monkeypatch):
    monkeypatch.setenv(verify.ENV_JOBS, "3")
    assert verify.default_jobs() == 3
    monkeypatch.setenv(verify.ENV_JOBS, "zero")
    assert verify.default_jobs() == 1
    monkeypatch.delenv(verify.ENV_JOBS)
    assert verify.default_jobs() == 1


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "dgahh", "hh", "--builtin", "Y2", "--max-degree", "2"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0
    assert "HH_n(Y2; F_2)" in res.stdout


def test_parallel_suite_matches_serial():
    serial = [r.to_json() for r in verify.run_suite("properties", seed=3, jobs=1)]
    parallel = [r.to_json() for r in verify.run_suite("properties", seed=3, jobs=2)]
    assert serial == parallel
