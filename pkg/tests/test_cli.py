"""Front-end tests: argument handling, CSV output, determinism, exit codes."""

import math

import pytest

from pdm_osc.cli import main
from pdm_osc.output import SeriesTable


def read(path):
    with open(path, "r", encoding="utf-8", newline="") as fh:
        return fh.read()


def data_rows(text):
    rows = [line for line in text.strip().splitlines() if not line.startswith("#")]
    header, body = rows[0], rows[1:]
    return header.split(","), [[float(c) for c in line.split(",")] for line in body]


class TestSpectrumCommand:
    def test_values(self, tmp_path, capsys):
        rc = main(["spectrum", "--alpha", "1", "--k", "-0.5", "--m", "0",
                   "--n-max", "1", "--out", str(tmp_path)])
        assert rc == 0
        header, body = data_rows(read(tmp_path / "spectrum_m0.csv"))
        assert header[0].startswith("n_r")
        assert body[0][1] == pytest.approx(1.6180339887498949, abs=1e-12)
        assert body[1][1] == pytest.approx(5.8541019662496847, abs=1e-12)

    def test_flat_ladder_column(self, tmp_path):
        main(["spectrum", "--alpha", "1", "--k", "0", "--m", "0",
              "--n-max", "3", "--out", str(tmp_path)])
        _, body = data_rows(read(tmp_path / "spectrum_m0.csv"))
        assert [row[1] for row in body] == [1.0, 3.0, 5.0, 7.0]

    def test_metadata_echo(self, tmp_path):
        main(["spectrum", "--alpha", "2", "--k", "-0.25", "--lam", "2",
              "--m", "1", "--out", str(tmp_path)])
        text = read(tmp_path / "spectrum_m1.csv")
        assert "# alpha: 2" in text
        assert "# k_list: -0.25" in text
        assert "# lam: 2" in text
        assert "# delta_sq_list: -0.5" in text  # k = delta_sq / lam echo
        assert "# command: spectrum" in text

    def test_multiple_k_columns(self, tmp_path):
        main(["spectrum", "--k-list", "-0.1,-0.3", "--m", "0", "--n-max", "2",
              "--out", str(tmp_path)])
        header, body = data_rows(read(tmp_path / "spectrum_m0.csv"))
        assert len(header) == 3
        assert len(body) == 3


class TestThermoCommand:
    def test_single_point_stdout(self, capsys):
        rc = main(["thermo", "--T", "10", "--k", "-0.3", "--m", "1", "--strategy", "direct"])
        assert rc == 0
        out = capsys.readouterr().out
        fields = dict(part.split("=") for part in out.split())
        import pdm_osc as p

        pr = p.SystemParams(alpha=1.0, k=-0.3)
        inp = p.ThermoInput.from_temperature(pr, 1, 10.0)
        assert float(fields["Z"]) == pytest.approx(p.partition_direct(inp).z, rel=1e-15)
        assert float(fields["U"]) == pytest.approx(p.average_energy(inp), rel=1e-15)
        assert float(fields["C"]) == pytest.approx(p.heat_capacity(inp), rel=1e-15)
        assert float(fields["F"]) == pytest.approx(p.free_energy(inp), rel=1e-15)
        assert float(fields["S"]) == pytest.approx(p.entropy(inp), rel=1e-15)

    def test_grid_writes_five_tables(self, tmp_path):
        rc = main(["thermo", "--k", "-0.3", "--m", "1", "--T-min", "1", "--T-max", "10",
                   "--T-count", "5", "--T-spacing", "linear", "--out", str(tmp_path)])
        assert rc == 0
        for q in ("Z", "U", "C", "F", "S"):
            assert (tmp_path / f"thermo_m1_{q}.csv").exists()
        header, body = data_rows(read(tmp_path / "thermo_m1_Z.csv"))
        assert len(body) == 5

    def test_log_spacing_grid(self, tmp_path):
        rc = main(["thermo", "--k", "-0.3", "--m", "1", "--T-min", "1", "--T-max", "100",
                   "--T-count", "3", "--T-spacing", "log", "--out", str(tmp_path)])
        assert rc == 0
        _, body = data_rows(read(tmp_path / "thermo_m1_Z.csv"))
        assert [row[0] for row in body] == pytest.approx([1.0, 10.0, 100.0])

    def test_auto_spacing_above_one_is_linear(self, tmp_path):
        rc = main(["thermo", "--k", "-0.3", "--m", "1", "--T-min", "2", "--T-max", "10",
                   "--T-count", "5", "--out", str(tmp_path)])
        assert rc == 0
        _, body = data_rows(read(tmp_path / "thermo_m1_Z.csv"))
        assert [row[0] for row in body] == pytest.approx([2.0, 4.0, 6.0, 8.0, 10.0])

    def test_paper_strategy_both_variants(self, tmp_path):
        rc = main(["thermo", "--k", "-0.3", "--m", "1", "--strategy", "paper",
                   "--variant", "both", "--T-min", "5", "--T-max", "10",
                   "--T-count", "3", "--T-spacing", "linear", "--out", str(tmp_path)])
        assert rc == 0
        header, _ = data_rows(read(tmp_path / "thermo_m1_Z.csv"))
        assert len(header) == 3  # T plus two variant columns
        assert any("corrected" in h for h in header)
        assert any("verbatim" in h for h in header)


class TestFiguresCommand:
    def test_default_k_list_and_determinism(self, tmp_path):
        out1, out2 = tmp_path / "a", tmp_path / "b"
        args = ["figures", "--m", "1", "--T-count", "60", "--out"]
        assert main(args + [str(out1)]) == 0
        assert main(args + [str(out2)]) == 0
        for q in ("Z", "U", "C", "F", "S"):
            b1 = read(out1 / f"figures_m1_{q}.csv").encode()
            b2 = read(out2 / f"figures_m1_{q}.csv").encode()
            assert b1 == b2
        header, _ = data_rows(read(out1 / "figures_m1_Z.csv"))
        assert len(header) == 4  # T plus three default k columns

    def test_svg_output(self, tmp_path):
        rc = main(["figures", "--m", "1", "--T-count", "24", "--format", "both",
                   "--out", str(tmp_path)])
        assert rc == 0
        svg = read(tmp_path / "figures_m1_C.svg")
        assert svg.startswith("<svg")
        assert "polyline" in svg


class TestWavefunctionCommand:
    def test_samples(self, tmp_path):
        rc = main(["wavefunction", "--k", "-0.5", "--m", "1", "--n-max", "2",
                   "--r-count", "50", "--out", str(tmp_path)])
        assert rc == 0
        header, body = data_rows(read(tmp_path / "wavefunction_m1.csv"))
        assert len(header) == 4
        assert len(body) == 50

    def test_needs_single_k(self, tmp_path, capsys):
        rc = main(["wavefunction", "--k-list", "-0.5,-0.3", "--out", str(tmp_path)])
        assert rc == 2


class TestConfigHandling:
    def test_config_file_and_precedence(self, tmp_path, capsys):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("alpha = 2.0\nk = -0.25\nm = 1  # comment\n", encoding="utf-8")
        rc = main(["spectrum", "--config", str(cfg), "--alpha", "3.0",
                   "--n-max", "1", "--out", str(tmp_path)])
        assert rc == 0
        text = read(tmp_path / "spectrum_m1.csv")
        assert "# alpha: 3" in text      # CLI beats config
        assert "# k_list: -0.25" in text  # config beats default

    def test_bad_config_line(self, tmp_path, capsys):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("alpha 2.0\n", encoding="utf-8")
        rc = main(["spectrum", "--config", str(cfg)])
        assert rc == 2
        err = capsys.readouterr().err
        assert err.startswith("config-error")
        assert "\n" == err[-1] and err.count("\n") == 1  # single line

    def test_invalid_alpha(self, capsys):
        rc = main(["spectrum", "--alpha", "-1"])
        assert rc == 2
        assert "field=alpha" in capsys.readouterr().err

    def test_k_and_k_list_conflict(self, capsys):
        rc = main(["spectrum", "--k", "-0.5", "--k-list", "-0.1,-0.2"])
        assert rc == 2
        assert "field=k" in capsys.readouterr().err

    def test_bad_T_grid(self, capsys):
        rc = main(["thermo", "--T-min", "5", "--T-max", "1"])
        assert rc == 2
        assert "field=T_grid" in capsys.readouterr().err


class TestValidateCommand:
    def test_quick_passes(self, capsys):
        rc = main(["validate", "--quick"])
        assert rc == 0
        out = capsys.readouterr().out
        assert "all checks passed" in out
        assert "quantization_roundtrip" in out

    def test_negative_control_names_ode_residual(self, capsys):
        rc = main(["validate", "--quick", "--inject-energy-perturbation"])
        assert rc == 1
        captured = capsys.readouterr()
        assert "FAILED: ode_residual" in captured.err


class TestSeriesTable:
    def test_nan_rejected_with_location(self):
        table = SeriesTable(
            x_label="x", y_label="y", x=[0.0, 1.0],
            columns=[("a", [1.0, math.nan])],
        )
        with pytest.raises(ValueError) as err:
            table.to_csv()
        assert "row 1" in str(err.value)
        assert "'a'" in str(err.value)

    def test_ragged_rejected(self):
        table = SeriesTable(x_label="x", y_label="y", x=[0.0, 1.0], columns=[("a", [1.0])])
        with pytest.raises(ValueError):
            table.to_csv()

    def test_float_formatting_roundtrip(self):
        value = 1.0 / 3.0
        table = SeriesTable(x_label="x", y_label="y", x=[value], columns=[("a", [value * 7])])
        _, body = data_rows(table.to_csv())
        assert body[0][0] == value
        assert body[0][1] == value * 7

    def test_newline_endings(self):
        table = SeriesTable(x_label="x", y_label="y", x=[0.0], columns=[("a", [1.0])],
                            metadata=[("key", "val")])
        text = table.to_csv()
        assert "\r" not in text
        assert text.endswith("\n")
