import json

import pytest

from alsbr.cli import build_parser, main
from alsbr.experiments import read_csv


def test_sweep_writes_under_output_dir(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("ALSBR_OUTPUT_DIR", str(tmp_path))
    code = main(["sweep", "--d-sp", "1,5", "--d-rp", "4.64", "--gamma-max", "30 dB", "-o", "s.csv"])
    assert code == 0
    assert "wrote 2 rows" in capsys.readouterr().out
    meta, rows = read_csv(tmp_path / "s.csv")
    assert [r["d_sp"] for r in rows] == [1.0, 5.0]
    assert "gamma_max = 30.0 dB" in meta


def test_sweep_from_config_with_flag_override(tmp_path):
    cfg = tmp_path / "c.ini"
    cfg.write_text("[geometry]\nd_sp = 1:2:1\nd_rp = 10\n[schemes]\nschemes = cbr\n")
    out = tmp_path / "o.csv"
    assert main(["sweep", "--config", str(cfg), "--schemes", "cubr,cbr", "-o", str(out)]) == 0
    _, rows = read_csv(out)
    assert len(rows) == 2 and rows[0]["rate_cubr"] > 0


def test_sweep_requires_units(tmp_path, capsys):
    code = main(["sweep", "--gamma-max", "30", "-o", str(tmp_path / "x.csv")])
    assert code == 2
    assert "unit" in capsys.readouterr().err


def test_figure_subcommand(tmp_path, monkeypatch):
    monkeypatch.setenv("ALSBR_OUTPUT_DIR", str(tmp_path))
    assert main(["figure", "5"]) == 0
    meta, rows = read_csv(tmp_path / "fig5.csv")
    assert "figure = 5" in meta
    assert len(rows) == 3 * 14


def test_unknown_figure_rejected():
    with pytest.raises(SystemExit):
        build_parser().parse_args(["figure", "9"])


def test_validate_subcommand(tmp_path, capsys):
    out = tmp_path / "report.json"
    code = main(["validate", "asymptotic", "-o", str(out)])
    report = json.loads(out.read_text())
    assert code == (0 if report["passed"] else 1)
    assert report["suite"] == "asymptotic"
    assert "criterion 6:" in capsys.readouterr().err


def test_validate_failure_exit_code(capsys):
    # an impossible tolerance makes the asymptotic suite fail
    assert main(["validate", "asymptotic", "--asym-rel-tol", "1e-12"]) == 1
    assert "FAIL" in capsys.readouterr().err
