"""Configuration management for piezobeam."""

import os
from pathlib import Path
from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()

PACKAGE_DIR = Path(__file__).resolve().parent


class Config:
    """Process-wide settings loaded from environment variables.

    Per-run inputs (materials, geometry, modes) live in the JSON run
    configuration, see ``models.schemas.RunConfig``.
    """

    LOG_LEVEL: str = os.getenv("PIEZOBEAM_LOG_LEVEL", "WARNING").upper()

    # Material database used when a run config names no file
    MATERIALS_FILE: Path = Path(
        os.getenv("PIEZOBEAM_MATERIALS_FILE", str(PACKAGE_DIR / "data" / "table1.json"))
    )

    # Sweep concurrency
    SWEEP_WORKERS: int = int(os.getenv("PIEZOBEAM_SWEEP_WORKERS", "4"))

    # Finite-element oracle
    FEM_ELEMENTS: int = int(os.getenv("PIEZOBEAM_FEM_ELEMENTS", "256"))
    FEM_CACHE_SIZE: int = int(os.getenv("PIEZOBEAM_FEM_CACHE_SIZE", "64"))
    MONOTONE_TOLERANCE: float = float(os.getenv("PIEZOBEAM_MONOTONE_TOLERANCE", "1e-9"))

    # Length calibration
    CALIBRATION_RTOL: float = float(os.getenv("PIEZOBEAM_CALIBRATION_RTOL", "1e-13"))

    # Report formatting (9 significant digits, locale independent)
    FLOAT_FORMAT: str = "{:.8e}"

    LOG_FORMAT: str = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

    @classmethod
    def validate_settings(cls) -> None:
        """Validate numeric settings; raise ValueError listing every bad entry."""
        problems = []

        if cls.SWEEP_WORKERS < 1:
            problems.append(f"PIEZOBEAM_SWEEP_WORKERS={cls.SWEEP_WORKERS} (must be >= 1)")
        if cls.FEM_ELEMENTS < 2:
            problems.append(f"PIEZOBEAM_FEM_ELEMENTS={cls.FEM_ELEMENTS} (must be >= 2)")
        if cls.FEM_CACHE_SIZE < 1:
            problems.append(f"PIEZOBEAM_FEM_CACHE_SIZE={cls.FEM_CACHE_SIZE} (must be >= 1)")
        if not 0 <= cls.MONOTONE_TOLERANCE < 1e-3:
            problems.append(f"PIEZOBEAM_MONOTONE_TOLERANCE={cls.MONOTONE_TOLERANCE} (must be in [0, 1e-3))")
        if not 0 < cls.CALIBRATION_RTOL < 1e-6:
            problems.append(f"PIEZOBEAM_CALIBRATION_RTOL={cls.CALIBRATION_RTOL} (must be in (0, 1e-6))")
        if cls.LOG_LEVEL not in {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}:
            problems.append(f"PIEZOBEAM_LOG_LEVEL={cls.LOG_LEVEL}")

        if problems:
            raise ValueError(
                f"Invalid settings: {', '.join(problems)}. "
                f"Please check your .env file."
            )

    @classmethod
    def get_settings_status(cls) -> dict:
        """Get the effective settings for startup logging.

        Returns:
            Dictionary with setting names and their resolved values
        """
        return {
            "LOG_LEVEL": cls.LOG_LEVEL,
            "MATERIALS_FILE": str(cls.MATERIALS_FILE),
            "SWEEP_WORKERS": cls.SWEEP_WORKERS,
            "FEM_ELEMENTS": cls.FEM_ELEMENTS,
            "FEM_CACHE_SIZE": cls.FEM_CACHE_SIZE,
            "MONOTONE_TOLERANCE": cls.MONOTONE_TOLERANCE,
            "CALIBRATION_RTOL": cls.CALIBRATION_RTOL,
        }

    @classmethod
    def format_float(cls, value: float) -> str:
        return cls.FLOAT_FORMAT.format(value)


# Create config instance
config = Config()
