import json
import subprocess
import sys

import pytest

from foxforms.cli import run

REPORT_KEYS = {"suite", "genus", "group", "seed", "trials", "h", "max_residual", "calibrated_mu", "pass"}


def _run(tmp_path, *argv):
    out = tmp_path / "report.json"
    code = run(list(argv) + ["--out", str(out)])
    return code, (json.loads(out.read_text()) if out.exists() else None)


def test_verify_fox(tmp_path):
    code, rep = _run(tmp_path, "verify-fox", "--genus", "3")
    assert code == 0 and rep["pass"]
    assert REPORT_KEYS <= set(rep)
    assert rep["details"]["exact_matches"] == 6


def test_verify_telescope(tmp_path):
    code, rep = _run(tmp_path, "verify-telescope", "--genus", "1")
    assert code == 0
    assert rep["details"]["final_sum"] == "- [1] + [x1 x2 x1^-1 x2^-1]"


def test_verify_main(tmp_path):
    code, rep = _run(tmp_path, "verify-main", "--group", "su2", "--genus", "2", "--trials", "100",
                     "--seed", "7", "--h", "1e-5")
    assert code == 0
    assert rep["max_residual"] <= 1e-5
    assert rep["calibrated_mu"] == pytest.approx(-3, rel=1e-6)


@pytest.mark.parametrize("suite", ["verify-cycle", "verify-bar", "verify-pw", "verify-moment",
                                   "project-fiber", "calibrate"])
def test_other_suites_pass(tmp_path, suite):
    code, rep = _run(tmp_path, suite, "--genus", "2", "--trials", "20")
    assert code == 0 and rep["pass"] and rep["suite"] == suite


def test_same_flags_same_bytes(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        assert run(["verify-main", "--genus", "1", "--trials", "10", "--seed", "3", "--out", str(p)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_jobs_do_not_change_report(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run(["project-fiber", "--genus", "1", "--trials", "6", "--out", str(a)])
    run(["project-fiber", "--genus", "1", "--trials", "6", "--jobs", "2", "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_verification_failure_exit_code(tmp_path):
    # an impossible tolerance turns a passing suite into a reported failure
    code, rep = _run(tmp_path, "verify-main", "--genus", "1", "--trials", "3", "--tol", "1e-300")
    assert code == 2 and not rep["pass"]
    assert rep["failures"] and "trial_seed" in rep["failures"][0]


@pytest.mark.parametrize("argv", [
    ["verify-nothing"],
    ["verify-fox", "--genus", "0"],
    ["verify-fox", "--bogus"],
    ["verify-main", "--group", "so3"],
    ["verify-main", "--h", "-1"],
    ["verify-cycle", "--genus", "1"],
    [],
])
def test_usage_errors(argv, capsys):
    assert run(argv) == 1
    assert "error" in capsys.readouterr().err


def test_console_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "foxforms.cli", "verify-fox", "--genus", "1"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["pass"] is True
