"""Laminate-level scalars of the two-layer piezoelectric cross-section.

The piezoelectric layer occupies z in [0, h1] and the substrate z in
[-h2, 0]. Every quantity is per unit width.
"""

import logging
from dataclasses import dataclass, replace

import numpy as np

from piezobeam.models.error_codes import ErrorCode, GeometryError, ParameterError, PiezobeamError
from piezobeam.services.materials import ReducedLayer

logger = logging.getLogger(__name__)

B11_TOLERANCE = 1e-12


@dataclass(frozen=True)
class Layup:
    piezo: ReducedLayer
    substrate: ReducedLayer
    length: float
    width: float = 1.0

    def __post_init__(self):
        if self.length <= 0:
            raise GeometryError(f"length must be > 0 (got {self.length})")
        if self.width <= 0:
            raise GeometryError(f"width must be > 0 (got {self.width})")

    @property
    def h1(self) -> float:
        return self.piezo.h

    @property
    def h2(self) -> float:
        return self.substrate.h

    @property
    def thickness_ratio(self) -> float:
        return self.h1 / self.h2

    def with_length(self, length: float) -> "Layup":
        return replace(self, length=length)

    def with_thicknesses(self, h1: float, h2: float) -> "Layup":
        return replace(
            self,
            piezo=self.piezo.with_thickness(h1),
            substrate=self.substrate.with_thickness(h2),
        )


@dataclass(frozen=True)
class Section:
    """Section scalars; ``c_elec`` and ``d_elec`` are the through-thickness
    electric integrals of (2z - h1)^2 and z^2 (h1 - z)^2."""

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
    c_elec: float
    d_elec: float

    @property
    def has_coupling(self) -> bool:
        return self.F != 0.0


def _moment(a: float, b: float, z_ref: float, k: int) -> float:
    """Integral of (z - z_ref)^k over [a, b]."""
    return ((b - z_ref) ** (k + 1) - (a - z_ref) ** (k + 1)) / (k + 1)


def _layer_bounds(layup: Layup, z_shift: float = 0.0):
    piezo = (z_shift, z_shift + layup.h1)
    substrate = (z_shift - layup.h2, z_shift)
    return piezo, substrate


def neutral_axis(layup: Layup) -> float:
    """Reference coordinate z0 for which B11 vanishes."""
    c1, h1 = layup.piezo.cbar11, layup.h1
    c2, h2 = layup.substrate.cbar11, layup.h2
    return (c1 * h1 ** 2 - c2 * h2 ** 2) / (2.0 * (c1 * h1 + c2 * h2))


def bending_coupling(layup: Layup, z_ref: float) -> float:
    """B11 evaluated about an arbitrary reference coordinate."""
    (p_lo, p_hi), (s_lo, s_hi) = _layer_bounds(layup)
    return (
        layup.piezo.cbar11 * _moment(p_lo, p_hi, z_ref, 1)
        + layup.substrate.cbar11 * _moment(s_lo, s_hi, z_ref, 1)
    )


def _electric(F: float, D11: float, piezo: ReducedLayer, c_elec: float, d_elec: float):
    if piezo.epsbar33 == 0.0:
        return 0.0, 0.0, D11
    eta1 = -d_elec / c_elec
    eta2 = F / c_elec
    return eta1, eta2, D11 + F * eta2


def section_properties(layup: Layup) -> Section:
    """
    Evaluate every section integral in closed form.

    Args:
        layup: Two-layer layup

    Returns:
        Section with B11 checked against |A11| (h1 + h2) 1e-12
    """
    piezo, substrate = layup.piezo, layup.substrate
    h1 = layup.h1
    (p_lo, p_hi), (s_lo, s_hi) = _layer_bounds(layup)
    z0 = neutral_axis(layup)

    A11 = piezo.cbar11 * h1 + substrate.cbar11 * layup.h2
    B11 = bending_coupling(layup, z0)
    D11 = piezo.cbar11 * _moment(p_lo, p_hi, z0, 2) + substrate.cbar11 * _moment(s_lo, s_hi, z0, 2)
    F = -piezo.ebar31 * h1 ** 3 / 6.0

    rho0, rho1, rho2 = (
        piezo.rho * _moment(p_lo, p_hi, z0, k) + substrate.rho * _moment(s_lo, s_hi, z0, k)
        for k in (0, 1, 2)
    )

    c_elec = piezo.epsbar33 * h1 ** 3 / 3.0
    d_elec = piezo.epsbar11 * h1 ** 5 / 30.0
    eta1, eta2, Dbar = _electric(F, D11, piezo, c_elec, d_elec)

    if abs(B11) > abs(A11) * (h1 + layup.h2) * B11_TOLERANCE:
        raise PiezobeamError(f"B11 = {B11:.3e} does not vanish at z0 = {z0:.6e}", ErrorCode.INTERNAL_ERROR)

    section = Section(
        z0=z0, A11=A11, B11=B11, D11=D11, F=F,
        rho0=rho0, rho1=rho1, rho2=rho2,
        eta1=eta1, eta2=eta2, Dbar=Dbar,
        c_elec=c_elec, d_elec=d_elec,
    )
    logger.debug(f"Section for h1={h1:.3e}, h2={layup.h2:.3e}: {section}")
    return section


def _gauss_panels(a: float, b: float, n: int):
    """Nodes and weights of a composite 3-point Gauss-Legendre rule on [a, b]."""
    xi, wi = np.polynomial.legendre.leggauss(3)
    edges = np.linspace(a, b, n + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    nodes = (mid[:, None] + half[:, None] * xi[None, :]).ravel()
    weights = (half[:, None] * wi[None, :]).ravel()
    return nodes, weights


def quadrature_check(layup: Layup, n: int, z_shift: float = 0.0) -> Section:
    """
    Recompute the section by composite numerical quadrature.

    The laminate is placed at z in [z_shift - h2, z_shift + h1]; z0 comes
    back in the shifted coordinates, everything else is shift invariant.
    """
    if n < 2:
        raise ParameterError(f"quadrature panel count must be >= 2 (got {n})")

    piezo, substrate = layup.piezo, layup.substrate
    h1 = layup.h1
    (p_lo, p_hi), (s_lo, s_hi) = _layer_bounds(layup, z_shift)
    zp, wp = _gauss_panels(p_lo, p_hi, n)
    zs, ws = _gauss_panels(s_lo, s_hi, n)

    def integrate(fp, fs):
        return float(np.dot(wp, fp(zp)) + np.dot(ws, fs(zs)))

    A11 = integrate(lambda z: piezo.cbar11 + 0 * z, lambda z: substrate.cbar11 + 0 * z)
    first = integrate(lambda z: piezo.cbar11 * z, lambda z: substrate.cbar11 * z)
    z0 = first / A11

    B11 = integrate(lambda z: piezo.cbar11 * (z - z0), lambda z: substrate.cbar11 * (z - z0))
    D11 = integrate(lambda z: piezo.cbar11 * (z - z0) ** 2, lambda z: substrate.cbar11 * (z - z0) ** 2)

    # E3 = (2 zeta - h1) phi with zeta the coordinate from the piezo bottom face
    zeta = lambda z: z - z_shift
    F = -integrate(lambda z: piezo.ebar31 * (2 * zeta(z) - h1) * (z - z0), lambda z: 0 * z)

    rho0, rho1, rho2 = (
        integrate(lambda z, k=k: piezo.rho * (z - z0) ** k, lambda z, k=k: substrate.rho * (z - z0) ** k)
        for k in (0, 1, 2)
    )

    c_elec = integrate(lambda z: piezo.epsbar33 * (2 * zeta(z) - h1) ** 2, lambda z: 0 * z)
    d_elec = integrate(lambda z: piezo.epsbar11 * zeta(z) ** 2 * (h1 - zeta(z)) ** 2, lambda z: 0 * z)
    eta1, eta2, Dbar = _electric(F, D11, piezo, c_elec, d_elec)

    return Section(
        z0=z0, A11=A11, B11=B11, D11=D11, F=F,
        rho0=rho0, rho1=rho1, rho2=rho2,
        eta1=eta1, eta2=eta2, Dbar=Dbar,
        c_elec=c_elec, d_elec=d_elec,
    )
