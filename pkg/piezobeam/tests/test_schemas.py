"""Unit tests for Pydantic schemas."""

import json
import pytest
from pydantic import ValidationError
from piezobeam.models.error_codes import ConfigError, ErrorCode
from piezobeam.models.schemas import (
    FemSettings,
    LengthCalibration,
    ModeRow,
    RunConfig,
    SectionReport,
    SweepSettings,
)


@pytest.mark.unit
def test_run_config_valid(run_config_data):
    """Test valid RunConfig creation."""
    run = RunConfig.model_validate(run_config_data)

    assert run.piezo == "PZT-5A"
    assert run.length == 6e-3
    assert run.modes == [1, 3, 5]
    assert run.target_hz is None


@pytest.mark.unit
def test_run_config_defaults(run_config_data):
    """Test RunConfig default values."""
    run = RunConfig.model_validate(run_config_data)

    assert run.width == 1.0
    assert run.fem.enabled is False
    assert run.fem.n_elems == 256
    assert run.fem.include_axial is True
    assert run.sweep is None
    assert run.output.csv is None


@pytest.mark.unit
def test_run_config_calibration_length(run_config_data):
    """Test that a {"calibrate": f} length is parsed as a target."""
    run = RunConfig.model_validate(dict(run_config_data, length={"calibrate": 4.52e4}))

    assert isinstance(run.length, LengthCalibration)
    assert run.target_hz == 4.52e4


@pytest.mark.unit
@pytest.mark.parametrize("field, value", [
    ("h1", 0.0),
    ("h2", -5e-4),
    ("length", 0.0),
    ("modes", []),
    ("modes", [1, 0]),
    ("width", -1.0),
])
def test_run_config_invalid_values(run_config_data, field, value):
    """Test RunConfig rejects non-physical values."""
    with pytest.raises(ValidationError):
        RunConfig.model_validate(dict(run_config_data, **{field: value}))


@pytest.mark.unit
def test_run_config_rejects_unknown_keys(run_config_data):
    """Test that a misspelled key is not silently ignored."""
    with pytest.raises(ValidationError):
        RunConfig.model_validate(dict(run_config_data, lenght=6e-3))


@pytest.mark.unit
def test_run_config_rejects_bad_calibration(run_config_data):
    with pytest.raises(ValidationError):
        RunConfig.model_validate(dict(run_config_data, length={"calibrate": -1.0}))


@pytest.mark.unit
def test_fem_settings_minimum_mesh():
    with pytest.raises(ValidationError):
        FemSettings(n_elems=1)


@pytest.mark.unit
def test_sweep_settings_defaults():
    """Test the default 13-point grid over 0.2-1.4."""
    sweep = SweepSettings()

    assert (sweep.ratio_min, sweep.ratio_max, sweep.steps) == (0.2, 1.4, 13)
    assert sweep.vary == "h1_fixed_h2"


@pytest.mark.unit
def test_sweep_settings_invalid_range():
    """Test that ratio_min must be below ratio_max."""
    with pytest.raises(ValidationError):
        SweepSettings(ratio_min=1.4, ratio_max=0.2)
    with pytest.raises(ValidationError):
        SweepSettings(vary="h2_only")


@pytest.mark.unit
def test_output_settings_alias(run_config_data, tmp_path):
    """Test that the output block accepts "json" and echoes it back."""
    data = dict(run_config_data, output={"json": str(tmp_path / "out.json")})
    run = RunConfig.model_validate(data)

    assert run.output.json_file == tmp_path / "out.json"
    assert run.echo()["output"]["json"] == str(tmp_path / "out.json")


@pytest.mark.unit
def test_from_file_resolves_material_path(run_config_data, write_config, tmp_path):
    """Test that a relative material_file resolves against the config directory."""
    path = write_config(dict(run_config_data, material_file="materials.json"))

    run = RunConfig.from_file(path)

    assert run.material_file == tmp_path / "materials.json"


@pytest.mark.unit
def test_from_file_reports_field_errors(run_config_data, write_config):
    """Test that validation errors name the field and the offending value."""
    path = write_config(dict(run_config_data, h1=-2e-4))

    with pytest.raises(ConfigError) as exc_info:
        RunConfig.from_file(path)

    assert exc_info.value.error_code == ErrorCode.INVALID_CONFIG
    assert "h1" in str(exc_info.value)
    assert "-0.0002" in str(exc_info.value)


@pytest.mark.unit
def test_from_file_missing_and_malformed(tmp_path):
    """Test ConfigError for missing files and broken JSON."""
    with pytest.raises(ConfigError, match="not found"):
        RunConfig.from_file(tmp_path / "missing.json")

    broken = tmp_path / "broken.json"
    broken.write_text("{", encoding="utf-8")
    with pytest.raises(ConfigError, match="invalid JSON"):
        RunConfig.from_file(broken)


@pytest.mark.unit
def test_section_report_from_section(section):
    """Test that the section report carries every section scalar."""
    report = SectionReport.from_section(section)

    assert report.Dbar == section.Dbar
    assert list(report.model_dump()) == [
        "z0", "A11", "B11", "D11", "F", "rho0", "rho1", "rho2", "eta1", "eta2", "Dbar",
    ]


@pytest.mark.unit
def test_mode_row_optional_fem_columns():
    """Test ModeRow without FEM columns."""
    row = ModeRow(m=1, symmetry="symmetric", f_closed_form=1.0, f_sixth_order=1.0, diff_sixth_vs_closed=0.0)

    assert row.f_fem is None
    assert json.loads(row.model_dump_json())["diff_fem_vs_sixth"] is None
