"""piezobeam - modal analysis of a two-layer piezoelectric beam

Command-line entry point: frequencies, comparisons, thickness sweeps,
length calibration and FEM verification.
"""

import logging
import sys

import typer

from piezobeam import __version__
from piezobeam.commands.analysis import calibrate, compare, freq
from piezobeam.commands.sweep import sweep
from piezobeam.commands.verification import fem_report
from piezobeam.config import config

logger = logging.getLogger(__name__)

app = typer.Typer(
    name="piezobeam",
    help="Free vibration of a simply supported piezoelectric/elastic bilayer beam.",
    no_args_is_help=True,
    add_completion=False,
)


def _version(value: bool):
    if value:
        typer.echo(f"piezobeam {__version__}")
        raise typer.Exit()


@app.callback()
def main(
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Log at INFO level"),
    version: bool = typer.Option(False, "--version", callback=_version, is_eager=True, help="Show the version"),
):
    """Validate settings, then configure logging before any command runs."""
    problem = None
    try:
        config.validate_settings()
    except ValueError as e:
        problem = e

    level = logging.INFO if verbose else logging.getLevelName(config.LOG_LEVEL)
    if not isinstance(level, int):
        level = logging.WARNING
    logging.basicConfig(level=level, format=config.LOG_FORMAT, stream=sys.stderr)

    if problem is not None:
        logger.warning(f"⚠ {problem}")
    logger.info(f"Settings: {config.get_settings_status()}")


app.command("freq")(freq)
app.command("compare")(compare)
app.command("sweep")(sweep)
app.command("calibrate")(calibrate)
app.command("fem-report")(fem_report)


if __name__ == "__main__":
    app()
