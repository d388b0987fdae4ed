"""Shared plumbing for CLI commands: run resolution, outputs and errors."""

import logging
from dataclasses import dataclass
from functools import wraps
from pathlib import Path
from typing import Callable, Dict, Iterable, Optional

import typer
from pydantic import BaseModel

from piezobeam.models.error_codes import categorize_error, get_user_friendly_message
from piezobeam.models.schemas import RunConfig
from piezobeam.services import reporting
from piezobeam.services.fem_oracle import FemFlags
from piezobeam.services.materials import Material, default_materials_path, get_material, load_materials, reduce
from piezobeam.services.modal_analytic import calibrate_length
from piezobeam.services.section import Layup, Section, section_properties

logger = logging.getLogger(__name__)

ERROR_EXIT_CODE = 2


@dataclass(frozen=True)
class ResolvedRun:
    """A run configuration with materials, layup and section resolved."""

    config: RunConfig
    materials: Dict[str, Material]
    layup: Layup
    section: Section

    @property
    def length(self) -> float:
        return self.layup.length

    @property
    def fem_flags(self) -> FemFlags:
        return FemFlags(
            include_rho1_coupling=self.config.fem.include_rho1,
            include_axial=self.config.fem.include_axial,
        )


def build_layup(run: RunConfig, materials: Dict[str, Material], length: float = 1.0) -> Layup:
    piezo = get_material(materials, run.piezo)
    substrate = get_material(materials, run.substrate)
    return Layup(
        piezo=reduce(piezo, run.h1),
        substrate=reduce(substrate, run.h2),
        length=length,
        width=run.width,
    )


def resolve_run(run: RunConfig) -> ResolvedRun:
    """
    Load materials, build the layup and fix the beam length.

    A ``{"calibrate": f}`` length is resolved against the mode-1 closed form.
    """
    materials = load_materials(run.material_file or default_materials_path())
    layup = build_layup(run, materials)
    section = section_properties(layup)

    if run.target_hz is not None:
        length = calibrate_length(section, run.target_hz, 1)
    else:
        length = float(run.length)

    layup = layup.with_length(length)
    logger.info(f"Resolved run: {run.piezo}/{run.substrate}, h1={run.h1:.3e}, h2={run.h2:.3e}, L={length:.6e}")
    return ResolvedRun(config=run, materials=materials, layup=layup, section=section)


def write_outputs(
    run: RunConfig,
    rows: Iterable[BaseModel],
    report: BaseModel,
    out_csv: Optional[Path] = None,
    out_json: Optional[Path] = None,
) -> None:
    """Write CSV rows and the JSON report; CLI paths override the config."""
    csv_path = out_csv or run.output.csv
    json_path = out_json or run.output.json_file
    if csv_path:
        reporting.write_csv(csv_path, rows)
    if json_path:
        reporting.write_json(json_path, report)


def handle_errors(func: Callable) -> Callable:
    """
    Decorator translating failures into a one-line message and exit status 2.

    typer.Exit passes through untouched.
    """
    @wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except (typer.Exit, typer.Abort):
            raise
        except Exception as e:
            code = categorize_error(e)
            message = get_user_friendly_message(code, str(e))
            logger.error(f"{func.__name__} failed with {code.value}: {e}")
            typer.echo(f"error [{code.value}]: {message} ({e})", err=True)
            raise typer.Exit(code=ERROR_EXIT_CODE)

    return wrapper
