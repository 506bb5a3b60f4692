"""CLI subcommands, exercised through main(argv)."""
from __future__ import annotations

import json

import pytest

from slagext.cli import main


@pytest.fixture
def parabola(tmp_path):
    path = tmp_path / "parabola.json"
    path.write_text(json.dumps(
        {"kind": "graph", "g_coeffs": ["0", "0", "0.5"], "degree_cap": 24}))
    return str(path)


def _read(path):
    with open(path) as fh:
        return json.load(fh)


def test_extend_all_branches(parabola, tmp_path):
    out = tmp_path / "chart"
    rep = tmp_path / "rep.json"
    rc = main(["extend", "--arc", parabola, "--n", "3", "--K", "2",
               "--out", str(out), "--report", str(rep)])
    assert rc == 0
    doc = _read(rep)
    assert doc["passed"] is True
    assert len(doc["outputs"]) == 3
    assert [c["branch"] for c in doc["charts"]] == [0, 1, 2]
    chart0 = _read(doc["outputs"][0])
    assert chart0["n"] == 3 and chart0["K"] == 2
    assert all(isinstance(c, str) for row in chart0["terms"] for c in row)


def test_extend_single_branch(parabola, tmp_path):
    out = tmp_path / "c.json"
    rc = main(["extend", "--arc", parabola, "--n", "2", "--K", "3",
               "--branch", "1", "--out", str(out)])
    assert rc == 0
    assert _read(out)["branch"] == 1


def test_residual_report(parabola, tmp_path, capsys):
    out = tmp_path / "c.json"
    main(["extend", "--arc", parabola, "--n", "2", "--K", "4", "--D", "20",
          "--branch", "0", "--out", str(out)])
    capsys.readouterr()
    rc = main(["residual", "--chart", str(out), "--sigma-max", "0.05"])
    assert rc == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["passed"] is True
    check = doc["checks"][0]
    assert float(check["max_pde"]) < 1e-6
    assert float(check["max_momentum"]) <= 1e-14
    assert isinstance(check["max_pde"], str)


def test_gt_check(parabola, tmp_path):
    rep = tmp_path / "gt.json"
    rc = main(["gt-check", "--arc", parabola, "--n", "3", "--out", str(rep)])
    assert rc == 0
    doc = _read(rep)
    assert doc["passed"] is True
    assert doc["base_partials_expected"] == ["1.0", "6.0", "6.0"]


def test_oracle_subcommands(parabola, capsys):
    rc = main(["oracle", "harvey-lawson", "--m", "2", "--c", "0.0",
               "--count", "30"])
    assert rc == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["oracle"]["passed"] is True

    rc = main(["oracle", "circle", "--n", "2", "--K", "5",
               "--sigma-max", "0.05", "--samples", "120"])
    assert rc == 0
    doc = json.loads(capsys.readouterr().out)
    assert float(doc["oracle"]["max_residual"]) < 1e-8

    rc = main(["oracle", "planes", "--n", "2", "--trials", "4"])
    assert rc == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["oracle"]["details"]["line_plane_counts"] == [2, 2, 2, 2]

    rc = main(["oracle", "branches", "--arc", parabola, "--n", "2"])
    assert rc == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["passed"] is True


def test_atlas_open_arc(parabola, tmp_path):
    rep = tmp_path / "atlas.json"
    rc = main(["atlas", "--arc", parabola, "--n", "2", "--K", "3",
               "--spacing", "0.25", "--sigma-max", "0.04",
               "--out", str(rep), "--chart-out", str(tmp_path / "at")])
    assert rc == 0
    doc = _read(rep)
    assert doc["chart_count"] >= 4
    assert float(doc["max_overlap_sup"]) <= 1e-6
    assert len(doc["outputs"]) == doc["chart_count"]


def test_atlas_gate_obstruction(tmp_path):
    rep = tmp_path / "atlas.json"
    rc = main(["atlas", "--arc", "circle", "--n", "3", "--K", "2",
               "--spacing", "0.8", "--out", str(rep)])
    assert rc == 2
    doc = _read(rep)
    assert doc["passed"] is False
    assert doc["gate"]["ok"] is False


def test_mesh_outputs(parabola, tmp_path, capsys):
    chart = tmp_path / "c.json"
    main(["extend", "--arc", parabola, "--n", "2", "--K", "2",
          "--branch", "0", "--out", str(chart)])
    obj = tmp_path / "m.obj"
    rc = main(["mesh", "--chart", str(chart), "--mode", "reduced",
               "--resolution", "5", "--sigma-max", "0.05",
               "--out", str(obj)])
    assert rc == 0
    lines = obj.read_text().splitlines()
    assert sum(1 for l in lines if l.startswith("v ")) == 25
    assert sum(1 for l in lines if l.startswith("f ")) == 16

    csv_path = tmp_path / "m.csv"
    rc = main(["mesh", "--chart", str(chart), "--mode", "embedded",
               "--resolution", "3", "--sigma-max", "0.05",
               "--directions", "4", "--out", str(csv_path)])
    assert rc == 0
    rows = csv_path.read_text().splitlines()
    assert rows[0] == "x0,y0,x1,y1,x2,y2"
    assert len(rows) == 1 + 3 * 3 * 4


def test_same_seed_is_bit_identical(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        rc = main(["oracle", "planes", "--n", "3", "--trials", "5",
                   "--seed", "11", "--out", str(path)])
        assert rc == 0
    assert a.read_bytes() == b.read_bytes()


def test_bad_arc_path_is_an_error(capsys):
    rc = main(["extend", "--arc", "/nonexistent/arc.json", "--n", "2"])
    assert rc == 1
    assert "error:" in capsys.readouterr().err


def test_precision_env_round_trip(parabola, tmp_path, monkeypatch):
    monkeypatch.setenv("SLAG_PRECISION", "mp25")
    out = tmp_path / "c.json"
    rc = main(["extend", "--arc", parabola, "--n", "2", "--K", "2",
               "--branch", "0", "--out", str(out)])
    assert rc == 0
    assert _read(out)["precision"] == "mp25"
