#!/usr/bin/env python3
"""
Tests for main.py
End-to-end runs of every command and their exit codes
"""

import json
import sys

import pytest

try:
    # Try relative import first (when used as package module)
    from .logger import get_logger
    from .main import build_parser, config_from_args, main
except ImportError:
    # Fall back to absolute import (when run standalone)
    from logger import get_logger
    from main import build_parser, config_from_args, main


@pytest.fixture
def run(tmp_path):
    def _run(*args):
        return main(list(args) + ["--quiet", "--log-dir", str(tmp_path / "logs")])

    return _run


def test_parser_defaults():
    args = build_parser().parse_args(["check", "--target", "builtin:ce_l2"])
    config = config_from_args(args)
    assert config.resolution == 0.05
    assert config.claim == "ie"
    assert config.tolerances.tie_tol == 1e-9
    assert config.calibration.gap_tol == 1e-6


def test_version_flag():
    with pytest.raises(SystemExit) as info:
        main(["--version"])
    assert info.value.code == 0


def test_analyze_target(run, capsys, tmp_path):
    svg = tmp_path / "ordinal.svg"
    assert run("analyze-target", "--target", "builtin:ordinal", "--svg", str(svg)) == 0
    document = json.loads(capsys.readouterr().out)
    assert document["orderability"]["ordered"]
    assert document["orderability"]["enumeration"] == [0, 1, 2]
    assert len(document["cells"]) == 3
    assert document["seed"] == 0
    assert svg.stat().st_size > 0
    assert get_logger().get_log_files()


def test_check_claims(run, capsys):
    common = ("--target", "builtin:ce_l2", "--surrogate", "builtin:ce", "--resolution", "0.1")
    assert run("check", *common, "--claim", "ie") == 0
    ie = json.loads(capsys.readouterr().out)
    assert ie["status"] == "no_violation_found(0.1)"

    assert run("check", *common, "--claim", "sie") == 1
    sie = json.loads(capsys.readouterr().out)
    assert sie["violated"]
    assert len(sie["certificate"]["corners"]) == 2


def test_construct_then_falsify(run, capsys, tmp_path):
    out = tmp_path / "abstain_surrogate.json"
    assert run("construct-1d", "--target", "builtin:abstain", "--out", str(out)) == 0
    document = json.loads(out.read_text())
    assert all(c["passed"] for c in document["certificates"])

    code = run(
        "falsify",
        "--target", "builtin:abstain",
        "--surrogate", str(out),
        "--link", str(out),
        "--point", "1/2,1/2",
    )
    assert code == 0
    probe = json.loads(capsys.readouterr().out)
    assert probe["gap"] > 0
    assert probe["link"]["type"] == "interval"


def test_falsify_cusp_finds_violation(run, capsys):
    code = run("falsify", "--target", "builtin:abstain", "--surrogate", "builtin:cusp", "--point", "0.5,0.5")
    assert code == 1
    probe = json.loads(capsys.readouterr().out)
    assert probe["violated"]
    assert probe["witness_sequence"]
    logs = "".join(open(f, encoding="utf-8").read() for f in get_logger().get_log_files())
    assert "cusp: compact-argmin evidence holds within radius 10" in logs


def test_sweep_writes_csv(run, tmp_path):
    out = tmp_path / "sweep.csv"
    code = run(
        "sweep",
        "--target", "builtin:abstain",
        "--surrogate", "builtin:smooth_cusp",
        "--resolution", "0.25",
        "--out", str(out),
    )
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("p1,p2,gamma_set")
    assert len(lines) > 1


def test_render_loss_curves(run, tmp_path):
    svg = tmp_path / "curves.svg"
    assert run("render", "--target", "builtin:abstain", "--surrogate", "builtin:smooth_cusp", "--svg", str(svg)) == 0
    assert "<svg" in svg.read_text()
    assert run("render", "--target", "builtin:ordinal") == 2


def test_error_exit_codes(run, tmp_path):
    assert run("construct-1d", "--target", "builtin:zero_one") == 4
    assert run("analyze-target") == 2
    assert run("check", "--target", "builtin:ordinal", "--surrogate", "builtin:universal:4") == 2
    assert run("falsify", "--target", "builtin:abstain", "--surrogate", "builtin:cusp", "--point", "0.2,0.2") == 2
    assert run("check", "--target", "builtin:ordinal", "--resolution", "2") == 2

    missing = str(tmp_path / "no_such_link.json")
    assert run("falsify", "--target", "builtin:abstain", "--surrogate", "builtin:smooth_cusp", "--link", missing, "--point", "1/2,1/2") == 2
    garbled = tmp_path / "garbled.json"
    garbled.write_text("{")
    assert run("falsify", "--target", "builtin:abstain", "--surrogate", "builtin:smooth_cusp", "--link", str(garbled), "--point", "1/2,1/2") == 2

    redundant = tmp_path / "redundant.json"
    redundant.write_text(json.dumps({"loss": [[0, 1], [1, 0], [1, 1]]}))
    assert run("analyze-target", "--target", str(redundant)) == 3


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
