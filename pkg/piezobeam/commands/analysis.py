"""Single-layup commands: freq, compare and calibrate."""

import logging
import math
from enum import Enum
from pathlib import Path
from typing import List, Optional, Sequence

import typer

from piezobeam.commands.common import build_layup, handle_errors, resolve_run, write_outputs
from piezobeam.models.error_codes import ConfigError, LengthMismatchError, ParameterError
from piezobeam.models.schemas import (
    CalibrationReport,
    CompareReport,
    CompareRow,
    FreqReport,
    ModeRow,
    RunConfig,
    SectionReport,
)
from piezobeam.services import reporting
from piezobeam.services.fem_oracle import solve_flexural
from piezobeam.services.materials import default_materials_path, load_materials
from piezobeam.services.modal_analytic import (
    calibrate_length,
    frequency_closed_form,
    frequency_sixth_order,
)
from piezobeam.services.section import section_properties

logger = logging.getLogger(__name__)


class CompareModel(str, Enum):
    CLOSED_FORM = "closed_form"
    SIXTH_ORDER = "sixth_order"
    FEM = "fem"


class RelativeTo(str, Enum):
    MODEL = "model"
    REFERENCE = "reference"


def _relative(a: Optional[float], b: Optional[float]) -> Optional[float]:
    if a is None or b is None:
        return None
    return (a - b) / b


def cmd_freq(run: RunConfig, units: str = "hz", out_csv: Optional[Path] = None,
             out_json: Optional[Path] = None) -> FreqReport:
    """
    Per-mode frequencies from the closed form, the sixth-order model and,
    when enabled, the FEM oracle.

    Args:
        run: Validated run configuration
        units: "hz" or "rad_per_s"

    Returns:
        FreqReport, also written to the configured CSV/JSON paths
    """
    if units not in ("hz", "rad_per_s"):
        raise ParameterError(f"units must be 'hz' or 'rad_per_s' (got {units!r})")
    resolved = resolve_run(run)
    section, L = resolved.section, resolved.length
    scale = 1.0 if units == "hz" else 2.0 * math.pi

    fem = None
    if run.fem.enabled:
        fem = solve_flexural(resolved.layup, section, run.fem.n_elems, max(run.modes), resolved.fem_flags)

    rows = []
    for m in run.modes:
        closed = frequency_closed_form(section, L, m)
        sixth = frequency_sixth_order(section, L, m)
        f_fem = fem[m - 1] * scale if fem is not None else None
        f_closed = closed.freq_hz * scale
        f_sixth = sixth.freq_hz * scale
        rows.append(ModeRow(
            m=m,
            symmetry=closed.symmetry.value,
            f_closed_form=f_closed,
            f_sixth_order=f_sixth,
            f_fem=f_fem,
            diff_sixth_vs_closed=_relative(f_sixth, f_closed),
            diff_fem_vs_closed=_relative(f_fem, f_closed),
            diff_fem_vs_sixth=_relative(f_fem, f_sixth),
        ))

    report = FreqReport(
        config=run.echo(),
        section=SectionReport.from_section(section),
        length=L,
        units=units,
        modes=rows,
    )
    write_outputs(run, rows, report, out_csv, out_json)
    return report


def cmd_compare(run: RunConfig, reference: Sequence[float], model: str = "closed_form",
                relative_to: str = "model", out_csv: Optional[Path] = None,
                out_json: Optional[Path] = None) -> CompareReport:
    """
    Percentage error of model frequencies against reference values.

    error = |f_model - f_ref| / f_model * 100 by default; relative_to
    "reference" divides by f_ref instead.
    """
    model = CompareModel(model).value
    relative_to = RelativeTo(relative_to).value
    if not reference:
        raise ParameterError("reference list must not be empty")
    if len(reference) != len(run.modes):
        raise LengthMismatchError(
            f"{len(run.modes)} modes requested but {len(reference)} reference frequencies given"
        )

    resolved = resolve_run(run)
    section, L = resolved.section, resolved.length

    if model == CompareModel.FEM.value:
        fem = solve_flexural(resolved.layup, section, run.fem.n_elems, max(run.modes), resolved.fem_flags)
        computed = [fem[m - 1] for m in run.modes]
    elif model == CompareModel.SIXTH_ORDER.value:
        computed = [frequency_sixth_order(section, L, m).freq_hz for m in run.modes]
    else:
        computed = [frequency_closed_form(section, L, m).freq_hz for m in run.modes]

    rows = []
    for m, f_model, f_ref in zip(run.modes, computed, reference):
        denominator = f_model if relative_to == RelativeTo.MODEL.value else f_ref
        rows.append(CompareRow(
            m=m,
            f_model=f_model,
            f_reference=float(f_ref),
            error_percent=abs(f_model - f_ref) / denominator * 100.0,
        ))

    report = CompareReport(
        config=run.echo(),
        section=SectionReport.from_section(section),
        length=L,
        model=model,
        relative_to=relative_to,
        rows=rows,
    )
    write_outputs(run, rows, report, out_csv, out_json)
    return report


def cmd_calibrate(run: RunConfig, target: Optional[float] = None, mode: int = 1,
                  out_json: Optional[Path] = None) -> CalibrationReport:
    """Solve for the beam length that puts mode ``mode`` at the target frequency."""
    target = target if target is not None else run.target_hz
    if target is None:
        raise ConfigError('no calibration target: pass --target or set "length": {"calibrate": f}')
    if not target > 0:
        raise ParameterError(f"target frequency must be > 0 (got {target})")

    materials = load_materials(run.material_file or default_materials_path())
    section = section_properties(build_layup(run, materials))
    length = calibrate_length(section, target, mode)

    report = CalibrationReport(
        config=run.echo(),
        section=SectionReport.from_section(section),
        mode=mode,
        target_hz=target,
        length=length,
        freq_hz=frequency_closed_form(section, length, mode).freq_hz,
    )
    json_path = out_json or run.output.json_file
    if json_path:
        reporting.write_json(json_path, report)
    return report


ConfigOption = typer.Option(..., "--config", "-c", help="Run configuration JSON file")
OutCsvOption = typer.Option(None, "--out-csv", help="Override the CSV output path")
OutJsonOption = typer.Option(None, "--out-json", help="Override the JSON output path")


@handle_errors
def freq(
    config_path: Path = ConfigOption,
    out_csv: Optional[Path] = OutCsvOption,
    out_json: Optional[Path] = OutJsonOption,
    rad_per_s: bool = typer.Option(False, "--rad-per-s", help="Report angular frequencies"),
):
    """Resonance frequencies per mode."""
    run = RunConfig.from_file(config_path)
    report = cmd_freq(run, "rad_per_s" if rad_per_s else "hz", out_csv, out_json)
    unit = "rad/s" if rad_per_s else "Hz"
    typer.echo(reporting.render_table(report.modes, title=f"L = {report.length:.9e} m, frequencies in {unit}"))


@handle_errors
def compare(
    config_path: Path = ConfigOption,
    reference: List[float] = typer.Option(..., "--reference", "-r", help="Reference frequency in Hz, one per mode"),
    model: CompareModel = typer.Option(CompareModel.CLOSED_FORM, "--model", help="Model column to compare"),
    relative_to: RelativeTo = typer.Option(RelativeTo.MODEL, "--relative-to", help="Error denominator"),
    out_csv: Optional[Path] = OutCsvOption,
    out_json: Optional[Path] = OutJsonOption,
):
    """Percentage error against reference frequencies."""
    run = RunConfig.from_file(config_path)
    report = cmd_compare(run, reference, model.value, relative_to.value, out_csv, out_json)
    typer.echo(reporting.render_table(report.rows, title=f"{report.model} vs reference"))


@handle_errors
def calibrate(
    config_path: Path = ConfigOption,
    target: Optional[float] = typer.Option(None, "--target", help="Target frequency in Hz"),
    mode: int = typer.Option(1, "--mode", min=1, help="Mode index the target refers to"),
    out_json: Optional[Path] = OutJsonOption,
):
    """Beam length matching a target frequency."""
    run = RunConfig.from_file(config_path)
    report = cmd_calibrate(run, target, mode, out_json)
    typer.echo(f"L = {report.length:.9e} m (mode {report.mode}, f = {report.freq_hz:.9e} Hz)")
