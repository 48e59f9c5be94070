import filecmp
import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from fandiv.cli import main
from fandiv.render import render_report

SCENES = Path(__file__).resolve().parent.parent / "scenes"


def _run(tmp_path, *argv):
    out = tmp_path / "out"
    code = main([*argv, "--out", str(out)])
    return code, out


def _report(out: Path) -> dict:
    return json.loads((out / "report.json").read_text())


# ---------------------------------------------------------------------------
# solve round trips


def test_curtain_scene_round_trip(tmp_path):
    code, out = _run(tmp_path, "solve-curtain", "--scene", str(SCENES / "two_squares.json"))
    assert code == 0
    rep = _report(out)
    assert rep["status"] == "ok"
    assert rep["solution"]["relative_residual"] <= 1e-6
    entries = np.array(rep["masses"]["entries"])
    totals = np.array(rep["masses"]["totals"])
    assert np.abs(entries - totals[:, None] / 2).max() <= 1e-6 * totals.max()
    # csv carries one labelled row per measure
    lines = (out / "report.csv").read_text().splitlines()
    assert lines[0] == "measure,total,part_0,part_1,deviation"
    assert len(lines) == 3


def test_fan_scene_divides_into_thirds(tmp_path):
    code, out = _run(tmp_path, "solve-fan", "--scene", str(SCENES / "hexagon_thirds.json"))
    assert code == 0
    rep = _report(out)
    entries = np.array(rep["masses"]["entries"])
    total = rep["masses"]["totals"][0]
    assert rep["status"] == "ok"
    assert np.abs(entries - total / 3).max() <= 1e-6 * total


def test_line_cloud_scene_exact(tmp_path):
    code, out = _run(tmp_path, "solve-curtain", "--scene", str(SCENES / "line_cloud.json"))
    assert code == 0
    assert _report(out)["solution"]["residual"] == 0.0


def test_csv_cloud_scene_resolves_relative_path(tmp_path):
    code, out = _run(tmp_path, "solve-curtain", "--scene", str(SCENES / "csv_clouds.json"))
    assert code == 0
    rep = _report(out)
    assert rep["masses"]["totals"][0] == pytest.approx(14.0)


def test_spline_scene_emits_pieces_and_figure(tmp_path):
    code, out = _run(tmp_path, "spline", "--scene", str(SCENES / "spline_demo.json"),
                     "--epsilon", "0.02", "--svg")
    assert code == 0
    rep = _report(out)
    assert rep["spline"]["pieces"]
    assert {p["type"] for p in rep["spline"]["pieces"]} <= {"arc", "segment"}
    assert (out / "figure.svg").is_file()


def test_demo_counterexample_scene(tmp_path):
    code, out = _run(tmp_path, "demo-counterexample",
                     "--scene", str(SCENES / "three_discs.json"))
    assert code == 0
    rep = _report(out)["counterexample"]
    assert rep["floor_fraction"] >= 0.45  # one disc stays essentially whole
    assert rep["two_disc_residual"] <= 1e-6 * rep["disc_mass"]
    lines = (out / "report.csv").read_text().splitlines()
    assert lines[0] == "key,value"


def test_verify_reports_all_checks(tmp_path):
    code, out = _run(tmp_path, "verify")
    assert code == 0
    rep = _report(out)
    assert rep["status"] == "pass"
    assert all(c["ok"] for c in rep["checks"])
    names = [c["name"] for c in rep["checks"]]
    assert "zonotope.hexagon-area" in names
    assert "solver.curtain-two-squares" in names


def test_verify_validates_scene(tmp_path):
    code, out = _run(tmp_path, "verify", "--scene", str(SCENES / "two_squares.json"))
    assert code == 0
    assert _report(out)["scene"]["kind"] == "curtain"


def test_scene_simplex_and_density(tmp_path):
    scn = tmp_path / "skew.json"
    scn.write_text(json.dumps({
        "version": "fandiv/1", "kind": "curtain",
        "simplex": [[2, -1], [-1, 2], [-1, -1]],
        "measures": [
            {"type": "body", "vertices": [[0, 0], [1, 0], [1, 1], [0, 1]],
             "density": 2.0},
            {"type": "disc", "center": [2.5, 0.0], "radius": 0.7},
        ],
    }))
    code, out = _run(tmp_path, "solve-curtain", "--scene", str(scn))
    assert code == 0
    rep = _report(out)
    assert rep["masses"]["totals"][0] == pytest.approx(2.0)  # density scales area
    assert rep["solution"]["relative_residual"] <= 1e-6
    assert rep["masses"]["deviations"][0] <= 1e-6 * 2.0


# ---------------------------------------------------------------------------
# determinism


def test_reports_are_byte_identical_across_runs(tmp_path):
    _, out1 = _run(tmp_path / "a", "solve-curtain",
                   "--scene", str(SCENES / "two_squares.json"), "--svg")
    _, out2 = _run(tmp_path / "b", "solve-curtain",
                   "--scene", str(SCENES / "two_squares.json"), "--svg")
    assert filecmp.cmp(out1 / "report.json", out2 / "report.json", shallow=False)
    assert filecmp.cmp(out1 / "report.csv", out2 / "report.csv", shallow=False)
    assert filecmp.cmp(out1 / "figure.svg", out2 / "figure.svg", shallow=False)


def test_figure_rerenders_identically_from_stored_report(tmp_path):
    _, out = _run(tmp_path, "solve-fan",
                  "--scene", str(SCENES / "hexagon_thirds.json"), "--svg")
    again = tmp_path / "again.svg"
    render_report(_report(out), again)
    assert filecmp.cmp(out / "figure.svg", again, shallow=False)


# ---------------------------------------------------------------------------
# failure paths


def test_missing_scene_file_exits_1(tmp_path, capsys):
    code, _ = _run(tmp_path, "solve-curtain", "--scene", str(tmp_path / "nope.json"))
    assert code == 1
    assert "scene" in capsys.readouterr().err


def test_invalid_scene_key_exits_1(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({
        "version": "fandiv/1", "kind": "curtain", "surprise": 1,
        "measures": [{"type": "cloud", "points": [[0, 0]]}],
    }))
    code, _ = _run(tmp_path, "solve-curtain", "--scene", str(bad))
    assert code == 1


def test_kind_mismatch_exits_1(tmp_path):
    code, _ = _run(tmp_path, "solve-fan", "--scene", str(SCENES / "two_squares.json"))
    assert code == 1


def test_dimension_mismatch_exits_1(tmp_path, capsys):
    scn = tmp_path / "bad_dim.json"
    scn.write_text(json.dumps({
        "version": "fandiv/1", "kind": "curtain",
        "measures": [{"type": "cloud", "points": [[0.0, 0.0], [1.0, 1.0]]}],
    }))
    code, _ = _run(tmp_path, "solve-curtain", "--scene", str(scn))
    assert code == 1
    assert "n*(q-1)" in capsys.readouterr().err


def test_usage_error_exits_1(tmp_path, capsys):
    assert main(["solve-curtain", "--no-such-flag"]) == 1
    assert main([]) == 1
    capsys.readouterr()


def test_budget_exit_2_still_writes_report(tmp_path):
    code, out = _run(tmp_path, "solve-curtain",
                     "--scene", str(SCENES / "two_squares.json"),
                     "--epsilon", "1e-15", "--budget", "50")
    assert code == 2
    rep = _report(out)
    assert rep["status"] == "budget"
    assert rep["solution"]["residual"] > 0
    assert (out / "report.csv").is_file()


def test_floor_status_exits_0_with_warning(tmp_path, capsys):
    code, out = _run(tmp_path, "solve-curtain", "--scene", str(SCENES / "csv_clouds.json"))
    assert code == 0
    rep = _report(out)
    assert rep["status"] == "floor"
    assert "floor" in capsys.readouterr().err


def test_console_entry_point_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "fandiv", "solve-curtain", "--scene",
         str(SCENES / "line_cloud.json"), "--out", "/tmp/fandiv-entry-test"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert "status ok" in proc.stdout
