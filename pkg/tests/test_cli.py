import filecmp
import os
from pathlib import Path

import pytest

from trunkload.cli import main

DEFECTIVE_MODEL = """
segments:
  - {name: ground}
  - {name: link, mass: -3.0}
joints:
  - {name: j, parent: ground, child: link, kind: revolute, axis: [0, 0, 1]}
"""

ARMLESS_MODEL = """
segments:
  - {name: ground}
  - {name: pelvis, mass: 60.0}
  - {name: foot_l, mass: 1.0}
  - {name: foot_r, mass: 1.0}
joints:
  - {name: pelvis_weld, parent: ground, child: pelvis, kind: fixed, anchor_parent: [0, 1.0, 0]}
  - {name: hip_l, parent: pelvis, child: foot_l, kind: revolute, axis: [1, 0, 0],
     anchor_parent: [0.1, 0.0, 0.0]}
  - {name: hip_r, parent: pelvis, child: foot_r, kind: revolute, axis: [1, 0, 0],
     anchor_parent: [-0.1, 0.0, 0.0]}
"""


def test_validate_default_ok(capsys):
    assert main(["validate"]) == 0
    assert "OK" in capsys.readouterr().out


def test_validate_negative_mass(tmp_path, capsys):
    path = tmp_path / "bad.yaml"
    path.write_text(DEFECTIVE_MODEL)
    assert main(["validate", "--model", str(path)]) == 1
    out = capsys.readouterr().out
    assert "violation" in out and "link" in out


def test_validate_missing_file():
    assert main(["validate", "--model", "/nonexistent/model.yaml"]) == 2


def test_validate_parse_failure(tmp_path):
    path = tmp_path / "broken.yaml"
    path.write_text("segments: [unclosed\n")
    assert main(["validate", "--model", str(path)]) == 2


def test_analyze_single_crutch(capsys):
    assert main(["analyze", "--case", "single_crutch", "--phase", "shared_support"]) == 0
    out = capsys.readouterr().out
    assert "severe" in out
    assert "quadratus_lumborum" in out
    assert "injured_foot_fraction = 0.1" in out
    assert "crutch_share = 0.3" in out


def test_analyze_normal_near_zero_ai(capsys):
    assert main(["analyze", "--case", "normal", "--phase", "mid_stance"]) == 0
    out = capsys.readouterr().out
    assert "risk flags: none" in out


def test_analyze_crutch_case_on_armless_model(tmp_path, capsys):
    path = tmp_path / "armless.yaml"
    path.write_text(ARMLESS_MODEL)
    code = main(["analyze", "--case", "single_crutch", "--model", str(path)])
    assert code == 1
    assert "ModelMismatch" in capsys.readouterr().err


def test_analyze_writes_selected_formats(tmp_path, capsys):
    out_dir = tmp_path / "out"
    code = main([
        "analyze", "--case", "double_crutch", "--out-dir", str(out_dir),
        "--format", "report", "--format", "csv", "--format", "plot", "--format", "table",
    ])
    assert code == 0
    names = sorted(p.name for p in out_dir.iterdir())
    assert names == [
        "activations_double_crutch_healthy_step.cols",
        "activations_double_crutch_healthy_step.csv",
        "activations_double_crutch_healthy_step.svg",
        "report_double_crutch_healthy_step.json",
        "report_double_crutch_healthy_step.txt",
    ]


def test_compare_defaults_to_three_cases(tmp_path, capsys):
    out_dir = tmp_path / "cmp"
    assert main(["compare", "--out-dir", str(out_dir), "--format", "csv"]) == 0
    out = capsys.readouterr().out
    assert "normal/mid_stance" in out
    assert "single_crutch/shared_support" in out
    csv_text = (out_dir / "comparison.csv").read_text()
    trunk = [l for l in csv_text.splitlines() if l.startswith("trunk_mean")][0]
    values = [float(x) for x in trunk.split(",")[2:]]
    assert values[0] < values[2] < values[1]  # normal < double < single


def test_compare_same_case_twice_identical_columns(capsys):
    assert main(["compare", "--case", "normal", "--case", "normal"]) == 0
    out = capsys.readouterr().out
    for line in out.splitlines()[1:]:
        cells = line.split()
        assert cells[-1] == cells[-2]


def test_compare_single_case_usage_error(capsys):
    assert main(["compare", "--case", "normal"]) == 2


def test_compare_unknown_phase_is_usage_error():
    assert main(["compare", "--phase", "bogus"]) == 2


def test_scenario_file_flow(tmp_path, capsys):
    scenario = tmp_path / "s.yaml"
    scenario.write_text(
        "case: single_crutch\nphase: shared_support\n"
        "injured_foot_fraction: 0.2\nposture:\n  lumbar_bending: 0.1\n"
    )
    assert main(["analyze", "--scenario", str(scenario)]) == 0
    out = capsys.readouterr().out
    assert "injured_foot_fraction = 0.2" in out


def test_env_var_model_override(tmp_path, monkeypatch, capsys):
    path = tmp_path / "bad.yaml"
    path.write_text(DEFECTIVE_MODEL)
    monkeypatch.setenv("TRUNKLOAD_DEFAULT_MODEL", str(path))
    assert main(["validate"]) == 1


def test_oracle_check_ok(capsys):
    assert main(["oracle-check", "--instances", "10", "--seed", "42"]) == 0
    assert "10 instances OK" in capsys.readouterr().out


def test_oracle_check_coarse_grid_warns(capsys):
    assert main(["oracle-check", "--instances", "3", "--grid-step", "0.5"]) == 0
    assert "coarse" in capsys.readouterr().out


def test_oracle_check_oversize(capsys):
    assert main(["oracle-check", "--max-muscles", "7"]) == 2


def test_repeated_compare_byte_identical(tmp_path):
    d1, d2 = tmp_path / "a", tmp_path / "b"
    for d in (d1, d2):
        assert main([
            "compare", "--out-dir", str(d),
            "--format", "csv", "--format", "report", "--format", "plot", "--format", "table",
        ]) == 0
    files1 = sorted(p.name for p in d1.iterdir())
    files2 = sorted(p.name for p in d2.iterdir())
    assert files1 == files2
    match, mismatch, errors = filecmp.cmpfiles(d1, d2, files1, shallow=False)
    assert mismatch == [] and errors == []
