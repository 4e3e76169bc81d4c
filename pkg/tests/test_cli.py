import json
import subprocess
import sys

import pytest

from ultraparadox.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_cover_ball_lists_translates(capsys):
    code, out, _ = run(capsys, "cover-ball", "--field", "q2", "--n", "2", "--i", "0", "--j", "1")
    report = json.loads(out)
    assert code == 0
    assert set(report) == {"version", "config", "checks", "summary"}
    (rec,) = report["checks"]
    assert rec["counts"]["translates"] == 4
    assert rec["witnesses"] == ["(0, 0)", "(0, 1)", "(1, 0)", "(1, 1)"]


def test_verify_traces_magnus(capsys):
    code, out, _ = run(capsys, "verify-traces", "--maxlen", "8", "--pairs", "magnus")
    assert code == 0
    assert json.loads(out)["summary"]["ok"]


def test_verify_psi(capsys):
    code, out, _ = run(capsys, "verify-psi", "--maxlen", "5")
    assert code == 0
    assert json.loads(out)["summary"]["pass"] == 4


def test_freeness_audit(capsys):
    code, out, _ = run(capsys, "freeness-audit", "--maxlen", "6", "--backend", "python")
    rec = json.loads(out)["checks"][0]
    assert code == 0 and rec["counts"]["words"] == 4 * (3 ** 6 - 1) // 2


def test_freeness_audit_eps_pair(capsys):
    code, out, _ = run(capsys, "freeness-audit", "--pair", "magnus-eps", "--p", "2",
                       "--eps-exp", "3", "--maxlen", "4")
    assert code == 0 and json.loads(out)["config"]["pair"] == "A3,A4"


def test_isometry_check(capsys):
    code, out, _ = run(capsys, "isometry-check", "--samples", "20", "--fields", "q2,f2s")
    assert code == 0 and json.loads(out)["summary"]["pass"] == 2


def test_build_and_verify(capsys, tmp_path):
    cert = tmp_path / "s.json"
    code, out, _ = run(capsys, "build-decomposition", "--target", "sphere0", "--field", "q2",
                       "--n", "3", "--out", str(cert))
    assert code == 0
    assert json.loads(cert.read_text())["piece_count"] == 6
    code, out, _ = run(capsys, "verify-decomposition", "--cert", str(cert), "--depth", "3")
    report = json.loads(out)
    assert code == 0 and report["summary"]["fail"] == 0


def test_tampered_certificate_fails(capsys, tmp_path):
    cert = tmp_path / "b.json"
    run(capsys, "build-decomposition", "--target", "ball-no-0", "--field", "q2", "--out", str(cert))
    data = json.loads(cert.read_text())
    data["generators"]["t"] = data["generators"]["s"]
    cert.write_text(json.dumps(data))
    code, out, _ = run(capsys, "verify-decomposition", "--cert", str(cert), "--depth", "3")
    assert code == 1
    assert json.loads(out)["summary"]["fail"] > 0


def test_report_rendering(capsys, tmp_path):
    rep = tmp_path / "r.json"
    run(capsys, "cover-ball", "--output", str(rep))
    code, out, _ = run(capsys, "report", str(rep), "--format", "text")
    assert code == 0 and "PASS" in out and "cover" in out


def test_config_file_and_flag_precedence(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# cover settings\nfield = q3\nn = 2\nj = 2\n")
    code, out, _ = run(capsys, "cover-ball", "--config", str(cfg), "--j", "1")
    report = json.loads(out)
    assert code == 0
    assert report["config"]["field"] == "q3" and report["config"]["j"] == 1
    assert report["checks"][0]["counts"]["translates"] == 9


@pytest.mark.parametrize("argv", [
    ["bogus"],
    [],
    ["cover-ball", "--field", "nope"],
    ["cover-ball", "--i", "3", "--j", "1"],
    ["cover-ball", "--field", "qs-q"],
    ["verify-decomposition", "--cert", "/nonexistent.json"],
    ["build-decomposition", "--field", "q2"],
    ["build-decomposition", "--target", "with-0", "--field", "trivial0"],
])
def test_usage_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err


def test_bad_config_exit_2(capsys, tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("unknown_key = 1\n")
    assert run(capsys, "cover-ball", "--config", str(cfg))[0] == 2
    cfg.write_text("n = two\n")
    assert run(capsys, "cover-ball", "--config", str(cfg))[0] == 2


def test_bad_worker_env(capsys, monkeypatch):
    monkeypatch.setenv("ULTRAPARADOX_WORKERS", "0")
    assert run(capsys, "cover-ball")[0] == 2


def test_reports_independent_of_worker_count(capsys, monkeypatch):
    argv = ["isometry-check", "--samples", "15"]
    monkeypatch.setenv("ULTRAPARADOX_WORKERS", "1")
    _, one, _ = run(capsys, *argv)
    monkeypatch.setenv("ULTRAPARADOX_WORKERS", "3")
    _, three, _ = run(capsys, *argv)
    assert one == three


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "ultraparadox", "cover-ball", "--format", "text"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and "summary" in proc.stdout
