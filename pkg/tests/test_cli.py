"""Command line surface: subcommands, exit codes, file outputs,
byte-for-byte determinism."""

import os

import pytest

from mmrclimate.cli import main
from mmrclimate.config import bundled_data_path, load_config, save_config


@pytest.fixture()
def outdir(tmp_path):
    return str(tmp_path / "out")


def run(args, outdir=None, config=None):
    argv = []
    if config:
        argv += ["--config", str(config)]
    if outdir:
        argv += ["--output-dir", str(outdir)]
    return main(argv + args)


@pytest.fixture(scope="module")
def small_config_path(tmp_path_factory):
    """Reduced ensemble so matrix-heavy commands stay fast."""
    from dataclasses import replace
    from mmrclimate.economy import ClimateModel

    cfg = load_config()
    cfg = replace(
        cfg,
        deltas=(0.02, 0.05),
        alpha_grid=(0.000125,),
        beta_grid=(0.018,),
        ensemble=(ClimateModel("HAD", 0.002286), ClimateModel("MIROC", 0.00244)),
    )
    path = tmp_path_factory.mktemp("cfg") / "small.ini"
    save_config(cfg, str(path))
    return str(path)


class TestSolve:
    def test_writes_annual_samples_and_prints_cost(self, outdir, capsys):
        assert run(["solve", "--delta", "0.05", "--model", "HAD"], outdir) == 0
        out = capsys.readouterr().out
        assert "J* = 0.50" in out
        path = os.path.join(outdir, "solution_d0.05_HAD.csv")
        lines = open(path).read().splitlines()
        header = lines[1]
        assert header.startswith("year,t_years,baseline_gtc_yr,abatement_gtc_yr")
        assert len(lines) == 2 + 501   # stamp + header + years 0..500
        assert lines[2].startswith("2020,0,")

    def test_zero_discount_refused(self, outdir, capsys):
        code = run(["solve", "--delta", "0", "--model", "HAD"], outdir)
        assert code == 3
        assert "transversality" in capsys.readouterr().err

    def test_unknown_model_lists_ensemble(self, outdir, capsys):
        code = run(["solve", "--delta", "0.05", "--model", "NOPE"], outdir)
        assert code == 2
        err = capsys.readouterr().err
        for name in ("GFDL", "BCC", "FIO", "HAD", "IPSL", "MIROC"):
            assert name in err


class TestFitBaseline:
    def test_fit_writes_report_and_config(self, outdir, tmp_path, capsys):
        target = tmp_path / "fitted.ini"
        code = run(["fit-baseline", "--write-config", str(target)], outdir)
        assert code == 0
        assert "r_squared=0.92" in capsys.readouterr().out
        assert os.path.exists(os.path.join(outdir, "fit_report.txt"))
        refit = load_config(str(target))
        original = load_config()
        assert refit.baseline.theta == original.baseline.theta
        assert refit.baseline.phi == original.baseline.phi
        assert refit.baseline.b0 == original.baseline.b0

    def test_config_round_trip_is_exact(self, tmp_path):
        cfg = load_config()
        path = tmp_path / "copy.ini"
        save_config(cfg, str(path))
        again = load_config(str(path))
        assert again == cfg

    def test_missing_data_file(self, outdir, capsys):
        code = run(["fit-baseline", "--data", "/nonexistent.csv"], outdir)
        assert code == 2
        assert "no such data file" in capsys.readouterr().err

    def test_as_printed_variant_fails_honestly(self, outdir, capsys):
        code = run(["fit-baseline", "--variant", "as-printed"], outdir)
        if code == 0:
            out = capsys.readouterr().out
            r2 = float(out.split("r_squared=")[1].split()[0])
            assert r2 < 0.9
        else:
            assert code == 3


class TestRegretTable:
    def test_outputs_and_flags(self, outdir, small_config_path, capsys):
        code = run(["--no-timestamp", "regret-table"], outdir, small_config_path)
        assert code == 0
        csv_text = open(os.path.join(outdir, "regret_matrix.csv")).read()
        rows = csv_text.strip().splitlines()
        assert len(rows) == 1 + 4 + 1          # header, 4 states, max regret
        assert rows[0].count(",") == 5         # label + 5 policies
        values = [float(cell) for cell in rows[1].split(",")[1:]]
        assert len(values) == 5 and min(values) >= -1e-9
        table = open(os.path.join(outdir, "regret_table.txt")).read()
        assert "max regret" in table
        assert "*" in table                    # MMR flag
        svg = open(os.path.join(outdir, "regret_heatmap.svg")).read()
        assert svg.count("<rect") == 1 + 4 * 5 + 5
        assert svg.count('fill="#ffffff"') >= 4   # zero diagonal is white

    def test_full_matrix_diagonal_white(self, outdir, capsys):
        code = run(["--no-timestamp", "regret-table"], outdir)
        assert code == 0
        svg = open(os.path.join(outdir, "regret_heatmap.svg")).read()
        assert svg.count("<rect") == 1 + 42 * 43 + 43
        assert svg.count('fill="#ffffff"') >= 42

    def test_alpha_beta_override(self, outdir, capsys):
        code = run(["--no-timestamp", "regret-table",
                    "--alpha", "0.0002", "--beta", "0.014"],
                   outdir, None)
        assert code == 0
        assert "d=0.02/MIROC" in capsys.readouterr().out

    def test_deterministic_bytes(self, tmp_path, small_config_path):
        a, b = str(tmp_path / "a"), str(tmp_path / "b")
        assert run(["--no-timestamp", "regret-table"], a, small_config_path) == 0
        assert run(["--no-timestamp", "regret-table"], b, small_config_path) == 0
        for name in ("regret_matrix.csv", "regret_table.txt", "regret_heatmap.svg"):
            assert open(os.path.join(a, name), "rb").read() == \
                open(os.path.join(b, name), "rb").read()


class TestMmrAndTmax:
    def test_mmr_prints_selection(self, small_config_path, capsys):
        assert run(["mmr"], config=small_config_path) == 0
        out = capsys.readouterr().out
        assert "minimax-regret policy: d=0.02/" in out

    def test_tmax_reports_every_model(self, outdir, small_config_path, capsys):
        code = run(["tmax", "--delta", "0.02", "--model", "HAD"],
                   outdir, small_config_path)
        assert code == 0
        out = capsys.readouterr().out
        assert out.count("Tmax =") == 2
        assert os.path.exists(os.path.join(outdir, "tmax.csv"))

    def test_tmax_no_abatement_reports_asymptote(self, outdir, small_config_path,
                                                 capsys):
        code = run(["tmax", "--no-abatement"], outdir, small_config_path)
        assert code == 0
        out = capsys.readouterr().out
        assert "no peak" in out
        assert "asymptote 14.7" in out

    def test_tmax_requires_full_provenance(self, outdir, small_config_path, capsys):
        code = run(["tmax", "--delta", "0.02"], outdir, small_config_path)
        assert code == 2


class TestSweep:
    def test_writes_summary_and_tables(self, outdir, small_config_path, capsys):
        code = run(["--no-timestamp", "sweep"], outdir, small_config_path)
        assert code == 0
        summary = open(os.path.join(outdir, "sweep_summary.csv")).read()
        assert summary.splitlines()[0].startswith("alpha,beta,mmr_delta")
        assert len(summary.strip().splitlines()) == 2
        assert os.path.exists(os.path.join(outdir, "sweep_mmr.txt"))
        assert os.path.exists(os.path.join(outdir, "sweep_tmax.txt"))


class TestSinglePair:
    def test_one_state_matrix_has_two_policies(self, tmp_path, capsys):
        from dataclasses import replace
        from mmrclimate.economy import ClimateModel

        cfg = replace(load_config(), deltas=(0.05,),
                      ensemble=(ClimateModel("HAD", 0.002286),))
        path = tmp_path / "pair.ini"
        save_config(cfg, str(path))
        out = str(tmp_path / "o")
        assert run(["--no-timestamp", "regret-table"], out, str(path)) == 0
        rows = open(os.path.join(out, "regret_matrix.csv")).read().strip().splitlines()
        assert len(rows) == 3                       # header, one state, max regret
        assert rows[0] == "actual_world,d=0.05/HAD,no-abatement"


class TestReportScale:
    def test_scale_multiplies_costs_and_keeps_selection(self, small_config_path,
                                                        tmp_path, capsys):
        base = load_config(small_config_path)
        assert run(["mmr"], config=small_config_path) == 0
        out_one = capsys.readouterr().out
        from dataclasses import replace

        doubled = replace(base, report_scale=2.0)
        path = tmp_path / "double.ini"
        save_config(doubled, str(path))
        assert run(["mmr"], config=str(path)) == 0
        out_two = capsys.readouterr().out
        pick = lambda s, key: s.split(key)[1].splitlines()[0].strip()
        assert pick(out_one, "policy:") == pick(out_two, "policy:")
        v1 = float(pick(out_one, "maximum regret:"))
        v2 = float(pick(out_two, "maximum regret:"))
        assert v2 == pytest.approx(2.0 * v1, abs=2e-6)   # printed at 6 decimals


class TestConfigHandling:
    def test_env_var_selects_config(self, outdir, small_config_path, capsys,
                                    monkeypatch):
        monkeypatch.setenv("MMRCLIMATE_CONFIG", small_config_path)
        assert run(["mmr"]) == 0
        assert "minimax-regret" in capsys.readouterr().out

    def test_empty_grid_is_config_error(self, tmp_path, capsys):
        text = open(bundled_data_path("default_config.ini")).read()
        broken = text.replace("alpha_grid = 7.5e-05 0.000125 0.0002",
                              "alpha_grid =")
        path = tmp_path / "broken.ini"
        path.write_text(broken)
        assert run(["sweep"], str(tmp_path / "o"), str(path)) == 2
        assert "nonempty" in capsys.readouterr().err

    def test_unreadable_config(self, tmp_path, capsys):
        assert run(["mmr"], config=str(tmp_path / "missing.ini")) == 2
