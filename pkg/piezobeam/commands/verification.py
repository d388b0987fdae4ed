"""FEM verification command: mesh-refinement report and matrix dumps."""

import logging
from pathlib import Path
from typing import List, Optional, Sequence

import typer

from piezobeam.commands.common import handle_errors, resolve_run, write_outputs
from piezobeam.models.schemas import ConvergenceReport, RunConfig, SectionReport
from piezobeam.services import reporting
from piezobeam.services.convergence import convergence_report
from piezobeam.services.fem_oracle import assemble, condense_electric, dump_triplets

logger = logging.getLogger(__name__)

DEFAULT_MESHES = (16, 32, 64, 128)


def cmd_fem_report(run: RunConfig, meshes: Optional[Sequence[int]] = None, count: Optional[int] = None,
                   dump_dir: Optional[Path] = None, out_csv: Optional[Path] = None,
                   out_json: Optional[Path] = None) -> ConvergenceReport:
    """
    Convergence table of the first ``count`` flexural frequencies.

    With ``dump_dir`` the coupled and condensed matrices of the finest mesh
    are written as triplet files.
    """
    resolved = resolve_run(run)
    meshes = list(meshes) if meshes else list(DEFAULT_MESHES)
    count = count or max(run.modes)

    report = convergence_report(resolved.layup, resolved.section, meshes, count, resolved.fem_flags)
    report = report.model_copy(update={
        "config": run.echo(),
        "section": SectionReport.from_section(resolved.section),
        "length": resolved.length,
    })

    if dump_dir is not None:
        coupled = assemble(resolved.layup, resolved.section, max(report.meshes), resolved.fem_flags)
        written = dump_triplets(coupled, dump_dir) + dump_triplets(condense_electric(coupled), dump_dir)
        logger.info(f"Dumped {len(written)} matrix files to {dump_dir}")

    write_outputs(run, report.rows, report, out_csv, out_json)
    return report


@handle_errors
def fem_report(
    config_path: Path = typer.Option(..., "--config", "-c", help="Run configuration JSON file"),
    mesh: Optional[List[int]] = typer.Option(None, "--mesh", help="Element count; repeat for a refinement sequence"),
    modes: Optional[int] = typer.Option(None, "--modes", min=1, help="Number of flexural modes to track"),
    dump_matrices: Optional[Path] = typer.Option(None, "--dump-matrices", help="Directory for K/M triplet files"),
    out_csv: Optional[Path] = typer.Option(None, "--out-csv", help="Override the CSV output path"),
    out_json: Optional[Path] = typer.Option(None, "--out-json", help="Override the JSON output path"),
):
    """Mesh convergence of the FEM oracle."""
    run = RunConfig.from_file(config_path)
    report = cmd_fem_report(run, mesh, modes, dump_matrices, out_csv, out_json)
    typer.echo(reporting.render_table(report.rows, title=f"meshes {report.meshes}, L = {report.length:.9e} m"))
    if report.non_monotone_modes:
        typer.echo(f"warning: non-monotone refinement for modes {report.non_monotone_modes}", err=True)
