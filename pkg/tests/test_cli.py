import json
import subprocess
import sys

import numpy as np
import pytest

from presnov.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    report = json.loads(captured.out) if captured.out.strip() else None
    return code, report, captured.err


def canonical(report):
    report = dict(report)
    report.pop("timing", None)
    return json.dumps(report, indent=2, sort_keys=True)


def test_decompose_catalog_sample(capsys):
    code, report, err = run_cli(
        capsys, "decompose", "--catalog", "identity", "--dim", "3",
        "--sample", "10", "--seed", "1",
    )
    assert code == 0
    assert report["report_version"] == 1
    samples = report["payload"]["samples"]
    assert len(samples) == 10
    worst = max(max(abs(v) for v in s["sphere_invariant"]) for s in samples)
    assert worst <= 1e-8
    assert report["payload"]["verification"]["passed"] is True
    assert "PASS" in err


def test_decompose_expression_at_point(capsys):
    code, report, _ = run_cli(capsys, "decompose", "--expr", "-x2; x1", "--at", "1,0")
    assert code == 0
    (sample,) = report["payload"]["samples"]
    assert sample["potential"] == pytest.approx(0.0, abs=1e-10)
    assert np.allclose(sample["sphere_invariant"], [0.0, 1.0], atol=1e-9)


def test_decompose_hand_potential(capsys):
    code, report, _ = run_cli(capsys, "decompose", "--expr", "x1^2; x2", "--at", "1,1")
    assert code == 0
    (sample,) = report["payload"]["samples"]
    assert sample["potential"] == pytest.approx(5.0 / 6.0, abs=1e-9)


def test_decompose_points_file_and_out(tmp_path, capsys):
    points = tmp_path / "points.txt"
    points.write_text("0.5,0.5\n-1.0,0.25\n", encoding="utf-8")
    out = tmp_path / "report.json"
    code = main([
        "decompose", "--catalog", "rotation2d", "--points-file", str(points),
        "--out", str(out),
    ])
    capsys.readouterr()
    assert code == 0
    report = json.loads(out.read_text(encoding="utf-8"))
    assert len(report["payload"]["samples"]) == 2


def test_field_file_source(tmp_path, capsys):
    src = tmp_path / "field.txt"
    src.write_text("x1^2; x2\n", encoding="utf-8")
    code, report, _ = run_cli(capsys, "decompose", "--field-file", str(src), "--at", "1,1")
    assert code == 0
    assert report["field"]["source"]["kind"] == "file"


def test_parse_error_exit_code(capsys):
    code, report, err = run_cli(capsys, "decompose", "--expr", "x1 +; x2", "--at", "1,1")
    assert code == 2
    assert report is None
    assert "error" in err


def test_unknown_catalog_exit_code(capsys):
    code, _, _ = run_cli(capsys, "decompose", "--catalog", "nope", "--dim", "2",
                         "--at", "1,1")
    assert code == 2


def test_arity_error_exit_code(capsys):
    code, _, _ = run_cli(capsys, "decompose", "--expr", "x1; x2; x3", "--dim", "2",
                         "--at", "1,1")
    assert code == 2


def test_numeric_error_exit_code(capsys):
    code, _, err = run_cli(capsys, "decompose", "--expr", "1/x1; x2", "--at", "0,1")
    assert code == 3


def test_coercivity_identity(capsys):
    code, report, _ = run_cli(capsys, "coercivity", "--catalog", "identity", "--dim", "2",
                              "--radius-count", "8", "--directions", "64")
    assert code == 0
    payload = report["payload"]
    assert payload["field_probe"]["verdict"] == "empirically-coercive"
    assert payload["conservative_probe"]["verdict"] == "empirically-coercive"
    assert payload["verdicts_agree"] is True
    assert payload["max_profile_discrepancy"] <= 1e-6


def test_coercivity_rotation(capsys):
    code, report, _ = run_cli(capsys, "coercivity", "--catalog", "rotation2d",
                              "--radius-count", "8", "--directions", "64")
    assert code == 0
    assert report["payload"]["field_probe"]["verdict"] == "not-coercive-witness"
    assert "witness" in report["payload"]["field_probe"]


def test_coercivity_singular_linear(capsys):
    code, report, _ = run_cli(capsys, "coercivity", "--catalog", "linear",
                              "--matrix", "1,2,0,1", "--radius-count", "8")
    assert code == 0
    assert report["payload"]["field_probe"]["verdict"] == "not-coercive-witness"
    assert report["payload"]["conservative_probe"]["verdict"] == "not-coercive-witness"


def test_equilibria_radius(capsys):
    code, report, _ = run_cli(capsys, "equilibria", "--catalog", "identity", "--dim", "2",
                              "--radius", "1")
    assert code == 0
    payload = report["payload"]
    assert payload["certificate"]["passed"] is True
    assert np.allclose(payload["field_equilibrium"]["point"], [0.0, 0.0], atol=1e-9)
    assert np.allclose(payload["conservative_equilibrium"]["point"], [0.0, 0.0], atol=1e-9)


def test_equilibria_certificate_failure_exit_code(capsys):
    code, report, err = run_cli(capsys, "equilibria", "--catalog", "rotation2d",
                                "--radius", "1")
    assert code == 5
    assert report["payload"]["certificate"]["passed"] is False


def test_equilibria_override_failure_is_numeric_exit(capsys):
    code, report, _ = run_cli(capsys, "equilibria", "--catalog", "constant",
                              "--vector", "1,0", "--radius", "1", "--allow-uncertified")
    assert code == 3
    assert report["payload"]["field_equilibrium"]["success"] is False


def test_equilibria_perturb_workflow(capsys):
    code, report, _ = run_cli(capsys, "equilibria", "--catalog", "identity", "--dim", "2",
                              "--perturb", "3,-4")
    assert code == 0
    payload = report["payload"]
    assert payload["rho"] == 8.0
    assert np.allclose(payload["field_equilibrium"]["point"], [-3.0, 4.0], atol=1e-8)
    assert np.allclose(payload["conservative_equilibrium"]["point"], [-3.0, 4.0], atol=1e-8)


def test_equilibria_perturb_rotation_fails_with_certificate_exit(capsys):
    code, report, err = run_cli(capsys, "equilibria", "--catalog", "rotation2d",
                                "--perturb", "1,0", "--max-radius-exponent", "8")
    assert code == 5
    assert report is None
    assert "not-coercive" in err


def test_shift_flag(capsys):
    code, report, _ = run_cli(capsys, "equilibria", "--catalog", "identity", "--dim", "2",
                              "--shift", "3,-4", "--radius", "6")
    assert code == 0
    assert np.allclose(report["payload"]["field_equilibrium"]["point"], [-3.0, 4.0],
                       atol=1e-8)
    assert report["field"]["source"]["kind"] == "shift"


def test_usage_error_requires_exactly_one_source(capsys):
    code, _, err = run_cli(capsys, "decompose", "--catalog", "identity", "--expr", "x1",
                           "--at", "1")
    assert code == 2
    assert "exactly one" in err


def test_reports_reproducible_in_process(capsys):
    args = ["coercivity", "--catalog", "gradient_poly", "--dim", "2",
            "--radius-count", "8", "--directions", "64", "--seed", "3"]
    _, first, _ = run_cli(capsys, *args)
    _, second, _ = run_cli(capsys, *args)
    assert canonical(first) == canonical(second)


def test_console_entry_point_subprocess():
    cmd = [sys.executable, "-m", "presnov", "decompose", "--catalog", "identity",
           "--dim", "2", "--sample", "4", "--seed", "0"]
    first = subprocess.run(cmd, capture_output=True, text=True)
    second = subprocess.run(cmd, capture_output=True, text=True)
    assert first.returncode == 0 and second.returncode == 0
    a, b = json.loads(first.stdout), json.loads(second.stdout)
    assert canonical(a) == canonical(b)
