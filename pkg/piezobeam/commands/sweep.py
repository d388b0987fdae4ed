"""Thickness-ratio sweep: mode-1 closed form against the FEM oracle."""

import asyncio
import logging
from pathlib import Path
from typing import List, NamedTuple, Optional

import numpy as np
import typer

from piezobeam.commands.common import ResolvedRun, handle_errors, resolve_run, write_outputs
from piezobeam.config import config
from piezobeam.models.error_codes import ConfigError, SweepError
from piezobeam.models.schemas import RunConfig, SectionReport, SweepReport, SweepRow
from piezobeam.services import reporting
from piezobeam.services.fem_oracle import solve_flexural
from piezobeam.services.modal_analytic import frequency_closed_form
from piezobeam.services.section import section_properties
from piezobeam.utils.performance import timed

logger = logging.getLogger(__name__)


class SweepPoint(NamedTuple):
    ratio: float
    h1: float
    h2: float


def sweep_points(run: RunConfig) -> List[SweepPoint]:
    """
    Uniform ratio grid mapped to layer thicknesses.

    ``h1_fixed_h2`` keeps h2 and sets h1 = r h2; ``fixed_total`` keeps
    h1 + h2 and splits it as h2 = T / (1 + r), h1 = r h2.
    """
    settings = run.sweep
    if settings is None:
        raise ConfigError("config has no sweep block")

    points = []
    total = run.h1 + run.h2
    for r in np.linspace(settings.ratio_min, settings.ratio_max, settings.steps):
        r = float(r)
        if settings.vary == "fixed_total":
            h2 = total / (1.0 + r)
        else:
            h2 = run.h2
        points.append(SweepPoint(ratio=r, h1=r * h2, h2=h2))
    return points


def evaluate_point(resolved: ResolvedRun, point: SweepPoint) -> SweepRow:
    layup = resolved.layup.with_thicknesses(point.h1, point.h2)
    section = section_properties(layup)
    f_analytic = frequency_closed_form(section, layup.length, 1).freq_hz
    f_fem = solve_flexural(layup, section, resolved.config.fem.n_elems, 1, resolved.fem_flags)[0]
    return SweepRow(
        ratio=point.ratio,
        h1=point.h1,
        h2=point.h2,
        f1_analytic=f_analytic,
        f1_fem=f_fem,
        rel_diff=(f_fem - f_analytic) / f_analytic,
    )


async def run_sweep(resolved: ResolvedRun, points: List[SweepPoint],
                    workers: Optional[int] = None) -> List[SweepRow]:
    """
    Evaluate sweep points concurrently, at most ``workers`` at a time.

    Rows come back in grid order. The first failing point aborts the sweep
    with a SweepError naming its ratio.
    """
    semaphore = asyncio.Semaphore(workers or config.SWEEP_WORKERS)

    async def _evaluate(point: SweepPoint) -> SweepRow:
        async with semaphore:
            try:
                return await asyncio.to_thread(evaluate_point, resolved, point)
            except Exception as e:
                logger.error(f"Sweep point r={point.ratio:.6g} failed: {e}")
                raise SweepError(point.ratio, e) from e

    tasks = [_evaluate(point) for point in points]
    return list(await asyncio.gather(*tasks))


def cmd_sweep(run: RunConfig, out_csv: Optional[Path] = None,
              out_json: Optional[Path] = None) -> SweepReport:
    """Run the thickness-ratio sweep at the configured (or calibrated) length."""
    points = sweep_points(run)
    resolved = resolve_run(run)

    with timed(f"Sweep of {len(points)} points"):
        rows = asyncio.run(run_sweep(resolved, points))

    point_sections = [
        SectionReport.from_section(section_properties(resolved.layup.with_thicknesses(p.h1, p.h2)))
        for p in points
    ]
    report = SweepReport(
        config=run.echo(),
        section=SectionReport.from_section(resolved.section),
        length=resolved.length,
        vary=run.sweep.vary,
        n_elems=run.fem.n_elems,
        rows=rows,
        point_sections=point_sections,
    )
    write_outputs(run, rows, report, out_csv, out_json)
    return report


@handle_errors
def sweep(
    config_path: Path = typer.Option(..., "--config", "-c", help="Run configuration JSON file"),
    out_csv: Optional[Path] = typer.Option(None, "--out-csv", help="Override the CSV output path"),
    out_json: Optional[Path] = typer.Option(None, "--out-json", help="Override the JSON output path"),
):
    """Mode-1 frequency against thickness ratio, analytic and FEM."""
    run = RunConfig.from_file(config_path)
    report = cmd_sweep(run, out_csv, out_json)
    typer.echo(reporting.render_table(report.rows, title=f"vary={report.vary}, L = {report.length:.9e} m"))
