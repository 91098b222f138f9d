import math

import pytest

from alsbr.errors import DomainError
from alsbr.experiments import (
    FIGURE_COLUMNS,
    ExperimentConfig,
    evaluate_point,
    figure_config,
    format_csv,
    load_config,
    parse_snr,
    parse_values,
    read_csv,
    reproduce_figure,
    run_sweep,
)
from alsbr.rates import rate_cbr, rate_cubr
from alsbr.solver import solve_rho
from alsbr.validation import baseline_hops

SMALL = ExperimentConfig(d_sp=(1.0, 4.0, 9.0), d_rp=(4.64, 2.93))


@pytest.mark.parametrize("text,db", [("30 dB", 30.0), ("10 db", 10.0), ("1000 linear", 30.0), ("-3.5 dB", -3.5)])
def test_parse_snr(text, db):
    assert parse_snr(text) == pytest.approx(db)


@pytest.mark.parametrize("text", ["30", "30dB", "30 watts", "0 linear", "-1 linear"])
def test_parse_snr_needs_units(text):
    with pytest.raises((DomainError, ValueError)):
        parse_snr(text)


@pytest.mark.parametrize(
    "text,vals",
    [("1, 2, 4", (1.0, 2.0, 4.0)), ("1:3:1", (1.0, 2.0, 3.0)), ("0.5:1.5:0.25", (0.5, 0.75, 1.0, 1.25, 1.5)),
     ("2.93", (2.93,)), ("1:20:1", tuple(float(v) for v in range(1, 21)))],
)
def test_parse_values(text, vals):
    assert parse_values(text) == vals


@pytest.mark.parametrize("text", ["", "3:1:1", "1:2:0", "1:2"])
def test_parse_values_rejects(text):
    with pytest.raises(DomainError):
        parse_values(text)


def test_load_config_round_trip(tmp_path):
    path = tmp_path / "run.ini"
    path.write_text(
        "[system]\ngamma_max = 1000 linear\ngamma_p = 10 dB\nalpha = 3.5\n"
        "[geometry]\nd_sp = 1:3:1   # inclusive\nd_rp = 10\n"
        "[schemes]\nschemes = alsbr, cbr\n"
        "[simulation]\nenabled = yes\nslots = 5000\nseed = 4\n"
        "[solver]\nrate_tolerance = 1e-8\n[output]\npath = out.csv\n"
    )
    cfg = load_config(path)
    assert cfg.gamma_max_db == pytest.approx(30.0)
    assert cfg.alpha == 3.5
    assert cfg.d_sp == (1.0, 2.0, 3.0) and cfg.d_rp == (10.0,)
    assert cfg.schemes == ("alsbr", "cbr")
    assert cfg.monte_carlo and cfg.simulation.slots == 5000 and cfg.simulation.seed == 4
    assert cfg.solver.rate_tolerance == 1e-8
    assert cfg.output == "out.csv"
    assert load_config(path.read_text()) == cfg


@pytest.mark.parametrize(
    "text",
    ["[system]\ngamma_max = 30\n", "[nonsense]\nx = 1\n", "[geometry]\nd_xx = 1\n",
     "[schemes]\nschemes = alsbr, dbr\n", "[geometry]\nd_rp = -1\n", "[simulation]\nenabled = maybe\n"],
)
def test_load_config_rejects(text):
    with pytest.raises(DomainError):
        load_config(text)


def test_defaults_are_baseline():
    cfg = ExperimentConfig()
    sys = cfg.system()
    assert sys.gamma_max == pytest.approx(1000.0) and sys.gamma_p == pytest.approx(10.0) and sys.alpha == 3.0
    assert cfg.d_rp == (10.0, 4.64, 2.93)
    assert (1.0, 10.0) in cfg.points() and (20.0, 2.93) in cfg.points()


def test_evaluate_point_matches_library():
    row = evaluate_point(SMALL, 4.0, 4.64)
    _, hops = baseline_hops(4.0, 4.64)
    sol = solve_rho(hops)
    assert row.rho == sol.rho and row.rate_alsbr == sol.rate
    assert row.rate_cubr == rate_cubr(hops) and row.rate_cbr == rate_cbr(hops)
    assert row.ratio_alsbr_cubr == pytest.approx(row.rate_alsbr / row.rate_cubr, rel=1e-15)
    assert row.log2_rho == pytest.approx(math.log2(row.rho))
    assert math.isnan(row.mc_alsbr) and row.status == "ok"


def test_scheme_subset_leaves_nan():
    row = evaluate_point(ExperimentConfig(schemes=("cbr",)), 2.0, 10.0)
    assert math.isnan(row.rho) and math.isnan(row.rate_cubr) and row.rate_cbr > 0


def test_solver_failure_is_recorded():
    from alsbr.solver import SolverSpec

    cfg = ExperimentConfig(d_sp=(3.0,), d_rp=(4.64,), solver=SolverSpec(max_iterations=1, rate_tolerance=1e-15))
    row = evaluate_point(cfg, 3.0, 4.64)
    assert row.status.startswith("solver-failed")
    assert math.isnan(row.rate_alsbr) and row.rate_cubr > 0


def test_monte_carlo_columns():
    from alsbr.montecarlo import SimulationConfig

    cfg = ExperimentConfig(d_sp=(3.0,), d_rp=(4.64,), monte_carlo=True, simulation=SimulationConfig(slots=50_000))
    row = evaluate_point(cfg, 3.0, 4.64)
    for name in ("alsbr", "cubr", "cbr"):
        mc, err, exact = getattr(row, f"mc_{name}"), getattr(row, f"mc_{name}_stderr"), getattr(row, f"rate_{name}")
        assert abs(mc - exact) <= 5 * err


def test_csv_is_reproducible(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "sub" / "b.csv"
    rows = run_sweep(SMALL, path=a)
    run_sweep(SMALL, path=b)
    assert a.read_bytes() == b.read_bytes()
    meta, parsed = read_csv(a)
    assert any(m.startswith("alsbr ") for m in meta)
    assert any("numpy" in m for m in meta)
    assert len(parsed) == len(rows) == 6
    for row, rec in zip(rows, parsed):
        assert rec["rate_alsbr"] == row.rate_alsbr
        assert rec["ratio_alsbr_cbr"] == pytest.approx(rec["rate_alsbr"] / rec["rate_cbr"], rel=1e-15)
        assert rec["d_sp_over_d_rp"] == pytest.approx(rec["d_sp"] / rec["d_rp"])
        assert rec["status"] == "ok"
    header = a.read_text().splitlines()[len(meta)]
    assert header.startswith("d_sp[linear],d_rp[linear]") and "rate_alsbr[bit/slot]" in header


def test_parallel_sweep_keeps_order():
    # compare rendered text: NaN columns never compare equal
    assert format_csv(run_sweep(SMALL, jobs=2), SMALL) == format_csv(run_sweep(SMALL, jobs=1), SMALL)


@pytest.mark.parametrize("fig", sorted(FIGURE_COLUMNS))
def test_figure_configs(fig):
    cfg = figure_config(fig)
    assert cfg.d_rp == (10.0, 4.64, 2.93)
    if fig == 5:
        ratios = {round(d / r, 12) for d, r in cfg.points()}
        assert 1.0 in ratios and min(ratios) < 1 < max(ratios)
    else:
        assert {d for d, _ in cfg.points()} >= {1.0, 20.0}


def test_unknown_figure():
    with pytest.raises(DomainError, match="unknown figure"):
        figure_config(7)


def test_reproduce_figure_logs_overrides(tmp_path):
    path = tmp_path / "f3.csv"
    rows = reproduce_figure(3, path=path, d_sp=(2.0, 6.0))
    assert len(rows) == 6
    meta, _ = read_csv(path)
    assert "figure = 3" in meta
    assert any(m.startswith("override d_sp") for m in meta)


def test_format_csv_floats_round_trip():
    rows = run_sweep(ExperimentConfig(d_sp=(7.0,), d_rp=(10.0,)))
    text = format_csv(rows, SMALL)
    cells = text.splitlines()[-1].split(",")
    assert float(cells[5]) == rows[0].rate_alsbr
