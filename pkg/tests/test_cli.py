import json

import pytest

from spindistill.cli import main
from spindistill.sweep import read_sweep_csv


def write_model_config(tmp_path, model=None):
    cfg = {"model": model or {"kind": "uniform", "N": 1, "j_max": 0.02, "z": 1e-3}}
    path = tmp_path / "model.json"
    path.write_text(json.dumps(cfg))
    return str(path)


def test_couplings_command(tmp_path, capsys):
    assert main(["couplings", "--kind", "uniform", "--n", "3", "--j-max", "0.02"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["N"] == 3
    assert max(data["values"]) == pytest.approx(0.02)


def test_couplings_invalid_exit_code(capsys):
    assert main(["couplings", "--kind", "gaussian", "--n", "3"]) == 2  # alpha missing


def test_stationary_command(tmp_path, capsys):
    cfg = write_model_config(tmp_path)
    assert main(["stationary", "--config", cfg, "--h", "1.1"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["degeneracy_count"] == 1
    assert 0.0 <= data["entropy"] <= 2 * 0.6932


def test_stationary_degenerate_is_numerical_failure(tmp_path, capsys):
    cfg = write_model_config(tmp_path, {"kind": "custom", "values": [0.01, 0.01]})
    assert main(["stationary", "--config", cfg, "--h", "1.0"]) == 4
    assert main(["stationary", "--config", cfg, "--h", "1.0", "--project-degenerate"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["degeneracy_count"] == 2


def test_capacity_exit_code(tmp_path, capsys):
    cfg = write_model_config(tmp_path, {"kind": "uniform", "N": 7, "j_max": 0.02})
    assert main(["stationary", "--config", cfg, "--h", "1.0"]) == 3


def test_spectrum_command(tmp_path):
    cfg = write_model_config(tmp_path)
    out = tmp_path / "spec.csv"
    assert main(["spectrum", "--config", cfg, "--h", "0.9", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("j,re_lambda")
    assert len(lines) == 17


def test_converge_command(tmp_path, capsys):
    cfg = write_model_config(tmp_path)
    assert main(["converge", "--config", cfg, "--h", "1.9", "--verify"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["n_puls"] >= 1
    assert data["verified"] is True


def test_sweep_command_with_config(tmp_path, capsys):
    cfg = {
        "model": {"kind": "uniform", "N": 1, "j_max": 0.02, "z": 1e-3},
        "field_grid": [0.8, 0.9],
        "quantities": ["entropy"],
    }
    path = tmp_path / "sweep.json"
    path.write_text(json.dumps(cfg))
    out = tmp_path / "rows.csv"
    assert main(["sweep", "--config", str(path), "--out", str(out)]) == 0
    meta, rows = read_sweep_csv(out)
    assert len(rows) == 2
    assert rows[0].h == 0.8


def test_sweep_requires_exactly_one_source(tmp_path):
    assert main(["sweep", "--out", str(tmp_path / "x.csv")]) == 2


def test_sweep_invalid_config_exit(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"model": {}, "field_grid": [1.0], "quantities": ["nope"]}))
    assert main(["sweep", "--config", str(path), "--out", str(tmp_path / "x.csv")]) == 2


def test_presets_listing(capsys):
    assert main(["presets"]) == 0
    out = capsys.readouterr().out
    assert "fig1b_zoom" in out
    assert "[slow]" in out


def test_presets_dump_and_run(tmp_path, capsys):
    assert main(["presets", "--name", "fig1b_zoom", "--out", str(tmp_path / "p.json")]) == 0
    data = json.loads((tmp_path / "p.json").read_text())
    assert data["model"]["N"] == 3
    assert data["field_grid"]["step"] <= 2e-3


def test_validate_command(tmp_path):
    out = tmp_path / "report.json"
    assert main(["validate", "--seed", "3", "--out", str(out)]) == 0
    report = json.loads(out.read_text())
    assert all(entry["pass"] for entry in report.values())
