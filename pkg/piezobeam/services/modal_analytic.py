"""Free vibration of the simply-supported piezoelectric beam.

Modes are cosine (odd m, symmetric about midspan) or sine (even m,
antisymmetric) in x in [-L/2, L/2]. Deflection shapes are

    w(x) = b1 cosh(n1 x) + b2 sinh(n1 x) + b3 cos(k x) + b4 sin(k x)

with k = m pi / L for the simply-supported family, where b1 = b2 = 0.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple, Tuple

import numpy as np
from scipy.optimize import brentq

from piezobeam.config import config
from piezobeam.models.error_codes import BracketError, GeometryError, ParameterError, RootNotFoundError
from piezobeam.services.section import Section

logger = logging.getLogger(__name__)

MAX_BRACKET_EXPANSIONS = 60


class Symmetry(str, Enum):
    SYMMETRIC = "symmetric"
    ANTISYMMETRIC = "antisymmetric"


class ModalModel(str, Enum):
    CLOSED_FORM = "closed_form"
    SIXTH_ORDER = "sixth_order"


class CharacteristicRoots(NamedTuple):
    alpha2: float
    beta4: float
    n1: float
    n3: float
    mode_index: float


@dataclass(frozen=True)
class ModalResult:
    m: int
    symmetry: Symmetry
    omega: float
    freq_hz: float
    n1: float
    n3: float
    alpha2: float
    beta4: float
    shape: Tuple[float, float, float, float]
    length: float
    model: ModalModel

    @property
    def wavenumber(self) -> float:
        """Trial wavenumber m pi / L of the simply-supported shape."""
        return self.m * math.pi / self.length


def _check_mode(m: int, L: float) -> None:
    if int(m) != m or m < 1:
        raise ParameterError(f"mode index must be an integer >= 1 (got {m})")
    if L <= 0:
        raise GeometryError(f"length must be > 0 (got {L})")


def symmetry_of(m: int) -> Symmetry:
    return Symmetry.SYMMETRIC if m % 2 == 1 else Symmetry.ANTISYMMETRIC


def _shape_coefficients(m: int) -> Tuple[float, float, float, float]:
    if m % 2 == 1:
        return (0.0, 0.0, 1.0, 0.0)
    return (0.0, 0.0, 0.0, 1.0)


def characteristic_roots(section: Section, L: float, omega: float) -> CharacteristicRoots:
    """
    Roots of the reduced fourth-order equation w'''' + 2 alpha2 w'' - beta4 w = 0.

    Args:
        section: Section scalars
        L: Beam length, used only for the mode index n3 L / pi
        omega: Trial angular frequency, rad/s

    Returns:
        CharacteristicRoots with the hyperbolic (n1) and trigonometric (n3)
        wavenumbers
    """
    if omega <= 0:
        raise ParameterError(f"omega must be > 0 (got {omega})")

    w2 = omega * omega
    alpha2 = (section.rho2 - section.eta1 * section.rho0) * w2 / (2.0 * section.Dbar)
    beta4 = section.rho0 * w2 / section.Dbar
    root = math.sqrt(alpha2 * alpha2 + beta4)
    n3 = math.sqrt(alpha2 + root)
    # -alpha2 + root rewritten without cancellation
    n1 = math.sqrt(beta4 / (alpha2 + root))
    return CharacteristicRoots(alpha2, beta4, n1, n3, n3 * L / math.pi)


def _result(section: Section, L: float, m: int, omega: float, model: ModalModel) -> ModalResult:
    roots = characteristic_roots(section, L, omega)
    return ModalResult(
        m=m,
        symmetry=symmetry_of(m),
        omega=omega,
        freq_hz=omega / (2.0 * math.pi),
        n1=roots.n1,
        n3=roots.n3,
        alpha2=roots.alpha2,
        beta4=roots.beta4,
        shape=_shape_coefficients(m),
        length=L,
        model=model,
    )


def frequency_closed_form(section: Section, L: float, m: int) -> ModalResult:
    """
    Closed-form simply-supported frequency of the reduced model.

    omega = k^2 sqrt(Dbar / (rho0 + k^2 (rho2 - eta1 rho0))) with k = m pi / L.
    """
    _check_mode(m, L)
    k2 = (m * math.pi / L) ** 2
    omega = k2 * math.sqrt(section.Dbar / (section.rho0 + k2 * (section.rho2 - section.eta1 * section.rho0)))
    return _result(section, L, int(m), omega, ModalModel.CLOSED_FORM)


def _sixth_order_coefficients(section: Section, k2: float) -> Tuple[float, float]:
    """Coefficients (a, b) of the sixth-order relation a * omega^2 + b = 0."""
    s = section
    a = -s.eta1 * s.rho2 * k2 * k2 + (s.rho2 - s.eta1 * s.rho0) * k2 + s.rho0
    b = s.eta1 * s.D11 * k2 ** 3 - s.Dbar * k2 * k2
    return a, b


def sixth_order_characteristic(section: Section, L: float, m: int, omega: float) -> float:
    """
    Sixth-order characteristic relation at n = m pi / L:

        eta1 D11 n^6 - (eta1 rho2 omega^2 + Dbar) n^4 + (rho2 - eta1 rho0) omega^2 n^2 + rho0 omega^2
    """
    _check_mode(m, L)
    a, b = _sixth_order_coefficients(section, (m * math.pi / L) ** 2)
    return a * omega * omega + b


def frequency_sixth_order(section: Section, L: float, m: int) -> ModalResult:
    """
    Frequency of the full sixth-order model for the trial shape cos/sin(m pi x / L).

    The relation is linear in omega^2, so omega^2 = -b / a directly.

    Raises:
        RootNotFoundError: when -b / a is not a positive finite number
    """
    _check_mode(m, L)
    a, b = _sixth_order_coefficients(section, (m * math.pi / L) ** 2)

    if a == 0.0 or not 0.0 < -b / a < math.inf:
        raise RootNotFoundError(
            f"no positive omega^2 root of the sixth-order relation for m={m}, L={L:.6e} "
            f"(a={a:.6e}, b={b:.6e})"
        )
    return _result(section, L, int(m), math.sqrt(-b / a), ModalModel.SIXTH_ORDER)


def _check_position(result: ModalResult, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    half = 0.5 * result.length
    if np.any(np.abs(x) > half * (1.0 + 1e-12)):
        raise ParameterError(f"x must lie in [-L/2, L/2] = [{-half:.6e}, {half:.6e}]")
    return x


def shape_derivative(result: ModalResult, x, order: int):
    """Analytic derivative of the deflection shape of the given order."""
    if order < 0:
        raise ParameterError(f"derivative order must be >= 0 (got {order})")
    x = _check_position(result, x)
    b1, b2, b3, b4 = result.shape
    k, n1 = result.wavenumber, result.n1

    # d^p cos(kx) = k^p cos(kx + p pi/2); hyperbolic pair alternates
    value = (
        b3 * k ** order * np.cos(k * x + order * math.pi / 2)
        + b4 * k ** order * np.sin(k * x + order * math.pi / 2)
    )
    if b1 or b2:
        cosh, sinh = np.cosh(n1 * x), np.sinh(n1 * x)
        even = order % 2 == 0
        value = value + n1 ** order * (
            b1 * (cosh if even else sinh) + b2 * (sinh if even else cosh)
        )
    return value


def mode_shape(result: ModalResult, x):
    """Deflection amplitude, normalized to max |w| = 1."""
    return shape_derivative(result, x, 0)


def calibrate_length(section: Section, target_hz: float, m: int = 1) -> float:
    """
    Find L such that the closed-form mode m has frequency target_hz.

    The frequency is strictly decreasing in L, so the root is bracketed by
    expanding around the classical Euler-Bernoulli estimate and refined
    with Brent's method.
    """
    if not target_hz > 0:
        raise ParameterError(f"target frequency must be > 0 (got {target_hz})")
    _check_mode(m, 1.0)

    def mismatch(L: float) -> float:
        return frequency_closed_form(section, L, m).freq_hz - target_hz

    estimate = m * math.pi * math.sqrt(math.sqrt(section.Dbar / section.rho0) / (2.0 * math.pi * target_hz))
    lo, hi = 0.5 * estimate, 2.0 * estimate
    for _ in range(MAX_BRACKET_EXPANSIONS):
        if mismatch(lo) > 0 > mismatch(hi):
            break
        lo, hi = 0.5 * lo, 2.0 * hi
    else:
        raise BracketError(f"could not bracket a length for target {target_hz} Hz (m={m})")

    try:
        L = brentq(mismatch, lo, hi, xtol=1e-16 * estimate, rtol=config.CALIBRATION_RTOL, maxiter=500)
    except (RuntimeError, ValueError) as e:
        raise BracketError(f"length calibration failed for target {target_hz} Hz: {e}")

    logger.info(f"Calibrated L = {L:.9e} m for m={m} at {target_hz} Hz")
    return L
