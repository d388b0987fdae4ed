"""Electric potential recovery for analytic modes.

Inside the piezoelectric layer the potential is z (h1 - z) phi(x); phi is
eliminated from the bending equation as

    phi = -(eta1 / F) [D11 w'''' + rho2 omega^2 w'' - rho0 omega^2 w] - eta2 w''

and must satisfy eta1 phi'' + phi + eta2 w'' = 0.
"""

import logging
from dataclasses import dataclass

import numpy as np

from piezobeam.models.error_codes import NoCouplingError, ParameterError
from piezobeam.services.modal_analytic import ModalResult, shape_derivative
from piezobeam.services.section import Layup, Section

logger = logging.getLogger(__name__)

MIN_GRID = 16
THROUGH_THICKNESS = "z*(h1 - z)"


def potential_derivative(result: ModalResult, section: Section, x, order: int = 0):
    """Analytic derivative of phi(x) of the given order."""
    if not section.has_coupling:
        raise NoCouplingError("F = 0: the section has no piezoelectric coupling, phi is undefined")

    w2 = result.omega ** 2
    bracket = (
        section.D11 * shape_derivative(result, x, order + 4)
        + section.rho2 * w2 * shape_derivative(result, x, order + 2)
        - section.rho0 * w2 * shape_derivative(result, x, order)
    )
    return -(section.eta1 / section.F) * bracket - section.eta2 * shape_derivative(result, x, order + 2)


@dataclass(frozen=True, eq=False)
class ElectricProfile:
    x: np.ndarray
    phi: np.ndarray
    phi_dd: np.ndarray
    w_dd: np.ndarray
    eta1: float
    eta2: float
    through_thickness: str = THROUGH_THICKNESS

    @property
    def spacing(self) -> float:
        return float(self.x[1] - self.x[0])

    def residual(self) -> float:
        """Relative norm of eta1 phi'' + phi + eta2 w'' using analytic phi''."""
        r = self.eta1 * self.phi_dd + self.phi + self.eta2 * self.w_dd
        return float(np.linalg.norm(r) / np.linalg.norm(self.phi))

    def finite_difference_residual(self) -> float:
        """Same residual with phi'' from central differences on interior points."""
        phi = self.phi
        phi_dd = (phi[2:] - 2.0 * phi[1:-1] + phi[:-2]) / self.spacing ** 2
        r = self.eta1 * phi_dd + phi[1:-1] + self.eta2 * self.w_dd[1:-1]
        return float(np.linalg.norm(r) / np.linalg.norm(phi[1:-1]))


def electric_profile(result: ModalResult, section: Section, grid: int) -> ElectricProfile:
    """
    Sample phi(x) for a mode on a uniform grid over [-L/2, L/2].

    Raises:
        NoCouplingError: when F = 0
        ParameterError: when grid < 16
    """
    if grid < MIN_GRID:
        raise ParameterError(f"grid must have at least {MIN_GRID} points (got {grid})")
    if not section.has_coupling:
        raise NoCouplingError("F = 0: the section has no piezoelectric coupling, phi is undefined")

    x = np.linspace(-0.5 * result.length, 0.5 * result.length, grid)
    profile = ElectricProfile(
        x=x,
        phi=potential_derivative(result, section, x, 0),
        phi_dd=potential_derivative(result, section, x, 2),
        w_dd=shape_derivative(result, x, 2),
        eta1=section.eta1,
        eta2=section.eta2,
    )
    logger.debug(f"Electric profile m={result.m} ({result.model.value}): residual {profile.residual():.3e}")
    return profile


def bending_moment(result: ModalResult, section: Section, x):
    """Bending moment amplitude M = -D11 w'' + F phi (B11 = 0)."""
    moment = -section.D11 * shape_derivative(result, x, 2)
    if section.has_coupling:
        moment = moment + section.F * potential_derivative(result, section, x, 0)
    return moment


@dataclass(frozen=True, eq=False)
class FieldSample:
    potential: np.ndarray
    E1: np.ndarray
    E3: np.ndarray
    D1: np.ndarray
    D3: np.ndarray
    sigma11: np.ndarray


def field_components(result: ModalResult, section: Section, layup: Layup, x, z) -> FieldSample:
    """
    Through-thickness fields of a mode at (x, z); x and z broadcast.

    The substrate carries only the bending stress; electric quantities
    vanish there.
    """
    z = np.asarray(z, dtype=float)
    h1, h2 = layup.h1, layup.h2
    if np.any(z < -h2 * (1 + 1e-12)) or np.any(z > h1 * (1 + 1e-12)):
        raise ParameterError(f"z must lie in [-h2, h1] = [{-h2:.6e}, {h1:.6e}]")

    w_dd = shape_derivative(result, x, 2)
    if section.has_coupling:
        phi = potential_derivative(result, section, x, 0)
        phi_d = potential_derivative(result, section, x, 1)
    else:
        phi = phi_d = np.zeros_like(w_dd)

    strain = -(z - section.z0) * w_dd
    in_piezo = z >= 0
    piezo, substrate = layup.piezo, layup.substrate

    potential = np.where(in_piezo, z * (h1 - z) * phi, 0.0)
    E1 = np.where(in_piezo, z * (z - h1) * phi_d, 0.0)
    E3 = np.where(in_piezo, (2 * z - h1) * phi, 0.0)
    D1 = piezo.epsbar11 * E1
    D3 = np.where(in_piezo, piezo.ebar31 * strain + piezo.epsbar33 * E3, 0.0)
    sigma11 = np.where(
        in_piezo,
        piezo.cbar11 * strain - piezo.ebar31 * E3,
        substrate.cbar11 * strain,
    )
    return FieldSample(potential=potential, E1=E1, E3=E3, D1=D1, D3=D3, sigma11=sigma11)
