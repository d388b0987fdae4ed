"""Command-line tests through the Typer runner."""

import json
import logging
import pytest
from piezobeam import __version__
from piezobeam.config import Config
from piezobeam.main import app


@pytest.mark.integration
def test_help_lists_commands(runner):
    """Test that --help lists every subcommand."""
    result = runner.invoke(app, ["--help"])

    assert result.exit_code == 0
    for command in ("freq", "compare", "sweep", "calibrate", "fem-report"):
        assert command in result.output


@pytest.mark.integration
def test_version(runner):
    result = runner.invoke(app, ["--version"])

    assert result.exit_code == 0
    assert __version__ in result.output


@pytest.mark.integration
def test_freq_writes_csv_and_json(runner, run_config_data, write_config, tmp_path):
    """Test freq output files: CSV header and JSON report with config echo."""
    config_path = write_config(run_config_data)
    out_csv = tmp_path / "freq.csv"
    out_json = tmp_path / "freq.json"

    result = runner.invoke(app, ["freq", "-c", str(config_path), "--out-csv", str(out_csv), "--out-json", str(out_json)])

    assert result.exit_code == 0, result.output
    assert "f_closed_form" in result.output

    lines = out_csv.read_text().split("\n")
    assert lines[0].startswith("m,symmetry,f_closed_form,f_sixth_order")
    assert lines[1].startswith("1,symmetric,4.5")
    assert len([line for line in lines if line]) == 4

    report = json.loads(out_json.read_text())
    assert list(report) == ["config", "section", "length", "units", "modes"]
    assert report["config"]["piezo"] == "PZT-5A"
    assert report["units"] == "hz"
    assert report["modes"][0]["f_closed_form"] == pytest.approx(45198.0, rel=2e-4)
    assert out_json.read_text().endswith("}\n")


@pytest.mark.integration
def test_freq_rad_per_s(runner, run_config_data, write_config, tmp_path):
    """Test that --rad-per-s scales every frequency column by 2 pi."""
    out_json = tmp_path / "freq.json"
    result = runner.invoke(app, ["freq", "-c", str(write_config(run_config_data)), "--rad-per-s", "--out-json", str(out_json)])

    assert result.exit_code == 0, result.output
    report = json.loads(out_json.read_text())
    assert report["units"] == "rad_per_s"
    assert report["modes"][0]["f_closed_form"] == pytest.approx(2 * 3.141592653589793 * 45198.0, rel=2e-4)


@pytest.mark.integration
def test_freq_with_fem_columns(runner, run_config_data, write_config, tmp_path):
    """Test the FEM columns when the config enables the oracle."""
    data = dict(run_config_data, modes=[1, 2], fem={"enabled": True, "n_elems": 64})
    out_json = tmp_path / "freq.json"

    result = runner.invoke(app, ["freq", "-c", str(write_config(data)), "--out-json", str(out_json)])

    assert result.exit_code == 0, result.output
    rows = json.loads(out_json.read_text())["modes"]
    assert all(abs(row["diff_fem_vs_sixth"]) < 2e-3 for row in rows)


@pytest.mark.integration
def test_compare_reference_count_mismatch(runner, run_config_data, write_config):
    """Test exit status 2 with a coded message when the reference list is short."""
    result = runner.invoke(app, ["compare", "-c", str(write_config(run_config_data)), "-r", "44800"])

    assert result.exit_code == 2
    assert "length_mismatch" in result.output


@pytest.mark.integration
def test_compare_prints_errors(runner, run_config_data, write_config):
    result = runner.invoke(app, [
        "compare", "-c", str(write_config(run_config_data)),
        "-r", "44800", "-r", "360000", "-r", "857000", "--model", "sixth_order",
    ])

    assert result.exit_code == 0, result.output
    assert "error_percent" in result.output
    assert "sixth_order vs reference" in result.output


@pytest.mark.integration
def test_calibrate_with_target(runner, run_config_data, write_config, tmp_path):
    """Test calibrate --target prints the length and writes JSON."""
    out_json = tmp_path / "cal.json"
    result = runner.invoke(app, ["calibrate", "-c", str(write_config(run_config_data)), "--target", "45200", "--out-json", str(out_json)])

    assert result.exit_code == 0, result.output
    assert "L = 5.9998" in result.output
    assert json.loads(out_json.read_text())["length"] == pytest.approx(5.99987e-3, rel=1e-4)


@pytest.mark.integration
def test_calibrate_without_target_fails(runner, run_config_data, write_config):
    result = runner.invoke(app, ["calibrate", "-c", str(write_config(run_config_data))])

    assert result.exit_code == 2
    assert "invalid_config" in result.output


@pytest.mark.integration
def test_freq_with_calibrated_length(runner, run_config_data, write_config, tmp_path):
    """Test that a {"calibrate": f} length is solved before the frequencies."""
    out_json = tmp_path / "freq.json"
    data = dict(run_config_data, length={"calibrate": 4.52e4})

    result = runner.invoke(app, ["freq", "-c", str(write_config(data)), "--out-json", str(out_json)])

    assert result.exit_code == 0, result.output
    report = json.loads(out_json.read_text())
    assert report["length"] == pytest.approx(5.99987e-3, rel=1e-4)
    assert report["modes"][0]["f_closed_form"] == pytest.approx(4.52e4, rel=1e-10)


@pytest.mark.integration
def test_sweep_small_grid(runner, run_config_data, write_config, tmp_path):
    """Test a two-point sweep end to end."""
    data = dict(run_config_data, fem={"n_elems": 16}, sweep={"steps": 2}, output={"csv": str(tmp_path / "sweep.csv")})

    result = runner.invoke(app, ["sweep", "-c", str(write_config(data))])

    assert result.exit_code == 0, result.output
    lines = (tmp_path / "sweep.csv").read_text().splitlines()
    assert lines[0] == "ratio,h1,h2,f1_analytic,f1_fem,rel_diff"
    assert len(lines) == 3


@pytest.mark.integration
def test_sweep_requires_sweep_block(runner, run_config_data, write_config):
    result = runner.invoke(app, ["sweep", "-c", str(write_config(run_config_data))])

    assert result.exit_code == 2
    assert "sweep" in result.output


@pytest.mark.integration
def test_fem_report_with_dumps(runner, run_config_data, write_config, tmp_path):
    """Test fem-report over two meshes with matrix dumps of the finest one."""
    dump_dir = tmp_path / "matrices"
    out_csv = tmp_path / "conv.csv"

    result = runner.invoke(app, [
        "fem-report", "-c", str(write_config(run_config_data)),
        "--mesh", "8", "--mesh", "16", "--modes", "2",
        "--dump-matrices", str(dump_dir), "--out-csv", str(out_csv),
    ])

    assert result.exit_code == 0, result.output
    assert sorted(p.name for p in dump_dir.iterdir()) == [
        "mass_16_condensed.txt", "mass_16_coupled.txt",
        "stiffness_16_condensed.txt", "stiffness_16_coupled.txt",
    ]
    assert len(out_csv.read_text().splitlines()) == 1 + 2 * 2


@pytest.mark.integration
def test_missing_config_file(runner, tmp_path):
    result = runner.invoke(app, ["freq", "-c", str(tmp_path / "nope.json")])

    assert result.exit_code == 2
    assert "invalid_config" in result.output


@pytest.mark.integration
def test_unknown_material(runner, run_config_data, write_config):
    result = runner.invoke(app, ["freq", "-c", str(write_config(dict(run_config_data, substrate="quartz")))])

    assert result.exit_code == 2
    assert "unknown_material" in result.output


@pytest.mark.integration
def test_sweep_json_carries_section_data(runner, run_config_data, write_config, tmp_path):
    """Test that the sweep report holds the base section and one section per grid point."""
    out_json = tmp_path / "sweep.json"
    data = dict(run_config_data, fem={"n_elems": 16}, sweep={"steps": 3})

    result = runner.invoke(app, ["sweep", "-c", str(write_config(data)), "--out-json", str(out_json)])

    assert result.exit_code == 0, result.output
    report = json.loads(out_json.read_text())
    assert report["section"]["Dbar"] > report["section"]["D11"] > 0
    assert len(report["point_sections"]) == len(report["rows"]) == 3
    assert report["point_sections"][0]["D11"] < report["point_sections"][-1]["D11"]


@pytest.mark.integration
def test_repeated_runs_are_byte_identical(runner, run_config_data, write_config, tmp_path):
    """Test that running freq twice writes exactly the same CSV and JSON bytes."""
    config_path = write_config(dict(run_config_data, fem={"enabled": True, "n_elems": 16}))
    out_csv = tmp_path / "freq.csv"
    out_json = tmp_path / "freq.json"
    args = ["freq", "-c", str(config_path), "--out-csv", str(out_csv), "--out-json", str(out_json)]

    assert runner.invoke(app, args).exit_code == 0
    first = (out_csv.read_bytes(), out_json.read_bytes())
    assert runner.invoke(app, args).exit_code == 0

    assert (out_csv.read_bytes(), out_json.read_bytes()) == first


@pytest.mark.integration
def test_invalid_log_level_falls_back_to_warning(runner, run_config_data, write_config, monkeypatch, mocker):
    """Test that a bad PIEZOBEAM_LOG_LEVEL is reported instead of crashing logging setup."""
    monkeypatch.setattr(Config, "LOG_LEVEL", "FOO")
    basic_config = mocker.patch("piezobeam.main.logging.basicConfig")

    result = runner.invoke(app, ["freq", "-c", str(write_config(run_config_data))])

    assert result.exit_code == 0, result.output
    assert basic_config.call_args.kwargs["level"] == logging.WARNING
