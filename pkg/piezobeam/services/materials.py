"""Material database: raw layer constants and their plane-reduced form."""

import json
import logging
from dataclasses import dataclass, replace
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from piezobeam.config import config
from piezobeam.models.error_codes import ErrorCode, GeometryError, MaterialError

logger = logging.getLogger(__name__)

PIEZO_FIELDS = ("e31", "e33", "e15", "eps11", "eps33")


class MaterialKind(str, Enum):
    ELASTIC = "elastic"
    PIEZOELECTRIC = "piezoelectric"


class Material(BaseModel):
    """Raw constants of one layer, SI units throughout.

    ``c44``, ``c66`` and ``e15`` are stored but unused by the Bernoulli
    beam model.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    name: str = Field(..., min_length=1, description="Unique material name")
    kind: MaterialKind
    c11: float = Field(..., description="Elastic stiffness c11, N/m^2")
    c12: float = Field(..., description="Elastic stiffness c12, N/m^2")
    c13: Optional[float] = Field(None, description="Elastic stiffness c13, N/m^2 (elastic kind: defaults to c12)")
    c33: Optional[float] = Field(None, description="Elastic stiffness c33, N/m^2 (elastic kind: defaults to c11)")
    c44: Optional[float] = None
    c66: Optional[float] = None
    rho: float = Field(..., description="Mass density, kg/m^3")
    e31: float = 0.0
    e33: float = 0.0
    e15: float = 0.0
    eps11: float = Field(0.0, description="Clamped permittivity, F/m")
    eps33: float = Field(0.0, description="Clamped permittivity, F/m")
    comment: Optional[str] = None

    @model_validator(mode="before")
    @classmethod
    def close_isotropic(cls, data: Any) -> Any:
        """Fill c33 = c11 and c13 = c12 for elastic layers that omit them."""
        if not isinstance(data, dict) or data.get("kind") != MaterialKind.ELASTIC.value:
            return data
        data = dict(data)
        if data.get("c33") is None and "c11" in data:
            data["c33"] = data["c11"]
        if data.get("c13") is None and "c12" in data:
            data["c13"] = data["c12"]
        return data

    @model_validator(mode="after")
    def check_invariants(self) -> "Material":
        if self.c13 is None or self.c33 is None:
            raise ValueError("c13 and c33 are required for piezoelectric materials")
        if self.rho <= 0:
            raise ValueError(f"rho must be > 0 (got {self.rho})")
        if self.c11 <= 0:
            raise ValueError(f"c11 must be > 0 (got {self.c11})")
        if self.c33 <= 0:
            raise ValueError(f"c33 must be > 0 (got {self.c33})")
        if self.c11 * self.c33 - self.c13 ** 2 <= 0:
            raise ValueError(
                f"c13 must satisfy c11*c33 - c13^2 > 0 "
                f"(got c11={self.c11}, c13={self.c13}, c33={self.c33})"
            )
        if self.kind is MaterialKind.ELASTIC:
            for name in PIEZO_FIELDS:
                value = getattr(self, name)
                if value != 0:
                    raise ValueError(f"{name} must be 0 for elastic materials (got {value})")
        else:
            if self.eps11 <= 0:
                raise ValueError(f"eps11 must be > 0 for piezoelectric materials (got {self.eps11})")
            if self.eps33 <= 0:
                raise ValueError(f"eps33 must be > 0 for piezoelectric materials (got {self.eps33})")
        return self

    @property
    def is_piezoelectric(self) -> bool:
        return self.kind is MaterialKind.PIEZOELECTRIC


@dataclass(frozen=True)
class ReducedLayer:
    """Plane-reduced constants of one layer (sigma3 = 0, gamma2 = 0)."""

    name: str
    cbar11: float
    ebar31: float
    epsbar11: float
    epsbar33: float
    rho: float
    h: float

    def __post_init__(self):
        if self.h <= 0:
            raise GeometryError(f"{self.name}: thickness must be > 0 (got {self.h})")
        if self.cbar11 <= 0:
            raise GeometryError(f"{self.name}: cbar11 must be > 0 (got {self.cbar11})")
        if self.rho <= 0:
            raise GeometryError(f"{self.name}: rho must be > 0 (got {self.rho})")

    def with_thickness(self, h: float) -> "ReducedLayer":
        return replace(self, h=h)


def default_materials_path() -> Path:
    """Return the material file used when a run names none."""
    return config.MATERIALS_FILE


def _describe(exc: ValidationError) -> str:
    parts = []
    for err in exc.errors():
        loc = ".".join(str(p) for p in err["loc"])
        message = err["msg"].removeprefix("Value error, ")
        if loc:
            parts.append(f"{loc}={err.get('input')!r}: {message}")
        else:
            parts.append(message)
    return "; ".join(parts)


def load_materials(path: Path) -> Dict[str, Material]:
    """
    Load and validate a material database file.

    Args:
        path: JSON file whose top level is an array of material objects

    Returns:
        Mapping of material name to validated Material

    Raises:
        MaterialError: on parse failure, invalid entries or duplicate names
    """
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise MaterialError(f"material file not found: {path}", ErrorCode.MATERIAL_PARSE_ERROR)
    except json.JSONDecodeError as e:
        raise MaterialError(f"{path}: {e}", ErrorCode.MATERIAL_PARSE_ERROR)

    if not isinstance(raw, list):
        raise MaterialError(
            f"{path}: top level must be an array of materials (got {type(raw).__name__})",
            ErrorCode.MATERIAL_PARSE_ERROR,
        )

    materials: Dict[str, Material] = {}
    for index, entry in enumerate(raw):
        label = entry.get("name", f"#{index}") if isinstance(entry, dict) else f"#{index}"
        try:
            material = Material.model_validate(entry)
        except ValidationError as e:
            raise MaterialError(f"{path}: material {label}: {_describe(e)}")

        if material.name in materials:
            raise MaterialError(
                f"{path}: duplicate material name {material.name!r}",
                ErrorCode.DUPLICATE_MATERIAL,
            )
        materials[material.name] = material

    logger.info(f"Loaded {len(materials)} materials from {path}")
    return materials


def get_material(materials: Dict[str, Material], name: str) -> Material:
    try:
        return materials[name]
    except KeyError:
        known = ", ".join(sorted(materials)) or "none"
        raise MaterialError(
            f"unknown material {name!r} (known: {known})",
            ErrorCode.UNKNOWN_MATERIAL,
        )


def reduce(m: Material, h: float) -> ReducedLayer:
    """
    Compute the plane-reduced constants of a layer.

    Args:
        m: Validated material
        h: Layer thickness in m

    Returns:
        ReducedLayer with cbar11 = c11 - c13^2/c33 and, for piezoelectric
        layers, ebar31 = e31 - (c13/c33) e33 and epsbar33 = eps33 + e33^2/c33
    """
    if h <= 0:
        raise GeometryError(f"{m.name}: thickness must be > 0 (got {h})")

    cbar11 = m.c11 - m.c13 ** 2 / m.c33
    if m.is_piezoelectric:
        ebar31 = m.e31 - (m.c13 / m.c33) * m.e33
        epsbar11 = m.eps11
        epsbar33 = m.eps33 + m.e33 ** 2 / m.c33
    else:
        ebar31 = epsbar11 = epsbar33 = 0.0

    return ReducedLayer(
        name=m.name,
        cbar11=cbar11,
        ebar31=ebar31,
        epsbar11=epsbar11,
        epsbar33=epsbar33,
        rho=m.rho,
        h=h,
    )
