"""Pydantic schemas for run configuration and reports."""

import json
from pathlib import Path
from typing import List, Literal, Optional, Union

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    PositiveFloat,
    ValidationError,
    field_validator,
    model_validator,
)

from piezobeam.config import config
from piezobeam.models.error_codes import ConfigError


def format_validation_error(exc: ValidationError) -> str:
    """Render a ValidationError as 'field: message (got value)' entries."""
    parts = []
    for err in exc.errors():
        loc = ".".join(str(p) for p in err["loc"]) or "config"
        message = err["msg"].removeprefix("Value error, ")
        parts.append(f"{loc}: {message} (got {err.get('input')!r})")
    return "; ".join(parts)


class LengthCalibration(BaseModel):
    """Beam length to be calibrated from a target first-mode frequency."""

    model_config = ConfigDict(extra="forbid")

    calibrate: float = Field(..., gt=0, description="Target first-mode frequency in Hz")


class FemSettings(BaseModel):
    model_config = ConfigDict(extra="forbid")

    enabled: bool = Field(default=False, description="Add FEM frequencies to frequency reports")
    n_elems: int = Field(default_factory=lambda: config.FEM_ELEMENTS, ge=2, description="Number of beam elements")
    include_rho1: bool = Field(default=False, description="Include the rho1 axial-rotary inertia coupling")
    include_axial: bool = Field(default=True, description="Keep axial DOFs in the model")


class SweepSettings(BaseModel):
    model_config = ConfigDict(extra="forbid")

    ratio_min: float = Field(default=0.2, gt=0, description="Smallest thickness ratio h1/h2")
    ratio_max: float = Field(default=1.4, gt=0, description="Largest thickness ratio h1/h2")
    steps: int = Field(default=13, ge=2, description="Number of uniformly spaced ratios")
    vary: Literal["h1_fixed_h2", "fixed_total"] = Field(
        default="h1_fixed_h2",
        description="Hold h2 and vary h1, or hold h1 + h2 fixed",
    )

    @model_validator(mode="after")
    def check_range(self) -> "SweepSettings":
        if not self.ratio_min < self.ratio_max:
            raise ValueError(f"ratio_min ({self.ratio_min}) must be < ratio_max ({self.ratio_max})")
        return self


class OutputSettings(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    csv: Optional[Path] = Field(default=None, description="CSV report path")
    json_file: Optional[Path] = Field(default=None, alias="json", description="JSON report path")


class RunConfig(BaseModel):
    """Run configuration loaded from a JSON file; SI units throughout."""

    model_config = ConfigDict(extra="forbid")

    material_file: Optional[Path] = Field(default=None, description="Material database; shipped table when absent")
    piezo: str = Field(..., min_length=1, description="Name of the piezoelectric layer material")
    substrate: str = Field(..., min_length=1, description="Name of the substrate material")
    h1: float = Field(..., gt=0, description="Piezoelectric layer thickness, m")
    h2: float = Field(..., gt=0, description="Substrate thickness, m")
    width: float = Field(default=1.0, gt=0, description="Beam width, m (reporting only)")
    length: Union[PositiveFloat, LengthCalibration] = Field(..., description="Beam length in m, or a calibration target")
    modes: List[int] = Field(..., min_length=1, description="Mode indices m >= 1")
    fem: FemSettings = Field(default_factory=FemSettings)
    sweep: Optional[SweepSettings] = None
    output: OutputSettings = Field(default_factory=OutputSettings)

    @field_validator("modes")
    @classmethod
    def validate_modes(cls, v: List[int]) -> List[int]:
        """Validate that every mode index is positive."""
        bad = [m for m in v if m < 1]
        if bad:
            raise ValueError(f"mode indices must be >= 1 (got {bad})")
        return v

    @property
    def target_hz(self) -> Optional[float]:
        return self.length.calibrate if isinstance(self.length, LengthCalibration) else None

    @classmethod
    def from_file(cls, path: Path) -> "RunConfig":
        """
        Load a run configuration; a relative material_file resolves against
        the configuration file's directory.

        Raises:
            ConfigError: on unreadable files, bad JSON or invalid fields
        """
        path = Path(path)
        try:
            raw = json.loads(path.read_text(encoding="utf-8"))
        except (FileNotFoundError, IsADirectoryError):
            raise ConfigError(f"config file not found: {path}")
        except json.JSONDecodeError as e:
            raise ConfigError(f"{path}: invalid JSON: {e}")

        try:
            run = cls.model_validate(raw)
        except ValidationError as e:
            raise ConfigError(f"{path}: {format_validation_error(e)}")

        if run.material_file is not None and not run.material_file.is_absolute():
            run = run.model_copy(update={"material_file": path.parent / run.material_file})
        return run

    def echo(self) -> dict:
        return self.model_dump(mode="json", by_alias=True)


class SectionReport(BaseModel):
    """Resolved section scalars, embedded in every JSON report."""

    z0: float
    A11: float
    B11: float
    D11: float
    F: float
    rho0: float
    rho1: float
    rho2: float
    eta1: float
    eta2: float
    Dbar: float

    @classmethod
    def from_section(cls, section) -> "SectionReport":
        return cls(**{name: getattr(section, name) for name in cls.model_fields})


class ModeRow(BaseModel):
    m: int
    symmetry: str
    f_closed_form: float
    f_sixth_order: float
    f_fem: Optional[float] = None
    diff_sixth_vs_closed: float
    diff_fem_vs_closed: Optional[float] = None
    diff_fem_vs_sixth: Optional[float] = None


class FreqReport(BaseModel):
    config: dict
    section: SectionReport
    length: float
    units: Literal["hz", "rad_per_s"]
    modes: List[ModeRow]


class CompareRow(BaseModel):
    m: int
    f_model: float
    f_reference: float
    error_percent: float


class CompareReport(BaseModel):
    config: dict
    section: SectionReport
    length: float
    model: Literal["closed_form", "sixth_order", "fem"]
    relative_to: Literal["model", "reference"]
    rows: List[CompareRow]


class SweepRow(BaseModel):
    ratio: float
    h1: float
    h2: float
    f1_analytic: float
    f1_fem: float
    rel_diff: float


class SweepReport(BaseModel):
    config: dict
    section: SectionReport
    length: float
    vary: str
    n_elems: int
    rows: List[SweepRow]
    # section scalars of each grid point, in row order
    point_sections: List[SectionReport]


class CalibrationReport(BaseModel):
    config: dict
    section: SectionReport
    mode: int
    target_hz: float
    length: float
    freq_hz: float


class ConvergenceRow(BaseModel):
    n_elems: int
    mode: int
    freq_hz: float
    rel_change: Optional[float] = None
    observed_order: Optional[float] = None
    extrapolated_hz: Optional[float] = None


class ConvergenceReport(BaseModel):
    meshes: List[int]
    modes: int
    rows: List[ConvergenceRow]
    non_monotone_modes: List[int] = Field(default_factory=list)
    config: Optional[dict] = None
    section: Optional[SectionReport] = None
    length: Optional[float] = None
