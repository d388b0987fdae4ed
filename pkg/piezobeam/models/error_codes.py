"""Standardized error codes and exceptions for piezobeam."""

from enum import Enum
from typing import Optional

import numpy as np
from pydantic import ValidationError


class ErrorCode(str, Enum):
    """
    Standardized error codes for analysis failures.

    The CLI maps every failure to one of these codes so that scripted callers
    can react to the failure family without parsing free text.
    """

    # Material database
    MATERIAL_PARSE_ERROR = "material_parse_error"
    MATERIAL_INVALID = "material_invalid"
    DUPLICATE_MATERIAL = "duplicate_material"
    UNKNOWN_MATERIAL = "unknown_material"

    # Input issues
    INVALID_CONFIG = "invalid_config"
    INVALID_GEOMETRY = "invalid_geometry"
    INVALID_PARAMETERS = "invalid_parameters"
    LENGTH_MISMATCH = "length_mismatch"

    # Analytic model
    NO_COUPLING = "no_coupling"
    NO_PHYSICAL_ROOT = "no_physical_root"
    BRACKET_FAILURE = "bracket_failure"

    # Finite-element oracle
    SINGULAR_ELECTRIC_BLOCK = "singular_electric_block"
    INDEFINITE_MASS = "indefinite_mass"
    EIGENSOLVER_FAILURE = "eigensolver_failure"
    SWEEP_FAILURE = "sweep_failure"

    # Generic
    UNKNOWN_ERROR = "unknown_error"
    INTERNAL_ERROR = "internal_error"


class PiezobeamError(Exception):
    """Base exception carrying a standardized error code."""

    error_code: ErrorCode = ErrorCode.INTERNAL_ERROR

    def __init__(self, message: str, error_code: Optional[ErrorCode] = None):
        super().__init__(message)
        self.message = message
        if error_code is not None:
            self.error_code = error_code


class MaterialError(PiezobeamError):
    error_code = ErrorCode.MATERIAL_INVALID


class ConfigError(PiezobeamError):
    error_code = ErrorCode.INVALID_CONFIG


class GeometryError(PiezobeamError):
    error_code = ErrorCode.INVALID_GEOMETRY


class ParameterError(PiezobeamError):
    error_code = ErrorCode.INVALID_PARAMETERS


class LengthMismatchError(PiezobeamError):
    error_code = ErrorCode.LENGTH_MISMATCH


class NoCouplingError(PiezobeamError):
    error_code = ErrorCode.NO_COUPLING


class RootNotFoundError(PiezobeamError):
    error_code = ErrorCode.NO_PHYSICAL_ROOT


class BracketError(PiezobeamError):
    error_code = ErrorCode.BRACKET_FAILURE


class SingularElectricBlockError(PiezobeamError):
    error_code = ErrorCode.SINGULAR_ELECTRIC_BLOCK


class IndefiniteMassError(PiezobeamError):
    error_code = ErrorCode.INDEFINITE_MASS


class EigenSolverError(PiezobeamError):
    error_code = ErrorCode.EIGENSOLVER_FAILURE


class SweepError(PiezobeamError):
    """Raised when a sweep point fails; carries the offending thickness ratio."""

    error_code = ErrorCode.SWEEP_FAILURE

    def __init__(self, ratio: float, cause: Exception):
        super().__init__(f"sweep failed at ratio {ratio:.6g}: {cause}")
        self.ratio = ratio
        self.cause = cause


def get_user_friendly_message(error_code: ErrorCode, original_message: str = "") -> str:
    """
    Get a user-friendly error message based on the error code.

    Args:
        error_code: The standardized error code
        original_message: Original error message for context

    Returns:
        User-friendly error message with actionable guidance
    """
    messages = {
        ErrorCode.MATERIAL_PARSE_ERROR: "Material file could not be parsed. Expected a JSON array of material objects.",
        ErrorCode.MATERIAL_INVALID: "A material entry violates a physical constraint. Check the reported field.",
        ErrorCode.DUPLICATE_MATERIAL: "Material names must be unique within a material file.",
        ErrorCode.UNKNOWN_MATERIAL: "Material not found in the material file. Check the piezo/substrate names.",

        ErrorCode.INVALID_CONFIG: "Run configuration is invalid. Check the reported fields.",
        ErrorCode.INVALID_GEOMETRY: "Layer thicknesses, length and width must all be positive.",
        ErrorCode.INVALID_PARAMETERS: "Invalid parameters. Please adjust the command options.",
        ErrorCode.LENGTH_MISMATCH: "Reference list must have one frequency per requested mode.",

        ErrorCode.NO_COUPLING: "The section has no piezoelectric coupling, so the electric potential is undefined.",
        ErrorCode.NO_PHYSICAL_ROOT: "No positive frequency satisfies the characteristic relation. Check the section data.",
        ErrorCode.BRACKET_FAILURE: "Could not bracket a beam length for the requested target frequency.",

        ErrorCode.SINGULAR_ELECTRIC_BLOCK: "Electric block is singular. The piezoelectric permittivity must be positive.",
        ErrorCode.INDEFINITE_MASS: "Mass matrix is not positive definite on the mechanical degrees of freedom.",
        ErrorCode.EIGENSOLVER_FAILURE: "Eigenvalue solver failed to converge.",
        ErrorCode.SWEEP_FAILURE: "Thickness sweep aborted at a failing point.",

        ErrorCode.UNKNOWN_ERROR: f"An unexpected error occurred: {original_message}",
        ErrorCode.INTERNAL_ERROR: "Internal error. Please report this with the failing configuration.",
    }

    return messages.get(error_code, f"Error: {original_message}")


def categorize_error(exception: Exception) -> ErrorCode:
    """
    Categorize an exception into a standardized error code.

    Args:
        exception: The exception to categorize

    Returns:
        Appropriate ErrorCode for the exception
    """
    if isinstance(exception, PiezobeamError):
        return exception.error_code

    if isinstance(exception, ValidationError):
        return ErrorCode.INVALID_CONFIG

    if isinstance(exception, np.linalg.LinAlgError):
        return ErrorCode.EIGENSOLVER_FAILURE

    if isinstance(exception, (FileNotFoundError, IsADirectoryError)):
        return ErrorCode.INVALID_CONFIG

    error_str = str(exception).lower()
    if any(keyword in error_str for keyword in ["did not converge", "convergence"]):
        return ErrorCode.EIGENSOLVER_FAILURE

    return ErrorCode.UNKNOWN_ERROR
