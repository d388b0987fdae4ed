"""Tests for electric potential recovery and through-thickness fields."""

import numpy as np
import pytest
from piezobeam.models.error_codes import NoCouplingError, ParameterError
from piezobeam.services.electric import (
    bending_moment,
    electric_profile,
    field_components,
    potential_derivative,
)
from piezobeam.services.modal_analytic import frequency_closed_form, frequency_sixth_order
from piezobeam.services.section import section_properties

L = 6e-3


@pytest.mark.unit
@pytest.mark.parametrize("m", [1, 2, 3, 5])
def test_sixth_order_profile_satisfies_charge_equation(section, m):
    """Test eta1 phi'' + phi + eta2 w'' = 0 for modes of the full model."""
    profile = electric_profile(frequency_sixth_order(section, L, m), section, 201)

    assert profile.residual() <= 1e-8


@pytest.mark.unit
def test_finite_difference_residual_small_on_fine_grid(section):
    """Test the central-difference residual on a 1001 point grid."""
    profile = electric_profile(frequency_sixth_order(section, L, 1), section, 1001)

    assert profile.finite_difference_residual() <= 1e-8


@pytest.mark.unit
def test_finite_difference_residual_is_second_order(section):
    """Test that halving the spacing divides the residual by about four."""
    result = frequency_sixth_order(section, L, 3)
    coarse = electric_profile(result, section, 201).finite_difference_residual()
    fine = electric_profile(result, section, 401).finite_difference_residual()

    assert 3.5 < coarse / fine < 4.5


@pytest.mark.unit
def test_closed_form_profile_carries_reduction_defect(section):
    """Test that closed-form modes leave a residual the full model does not."""
    closed = electric_profile(frequency_closed_form(section, L, 3), section, 201).residual()
    sixth = electric_profile(frequency_sixth_order(section, L, 3), section, 201).residual()

    assert closed > 100 * sixth


@pytest.mark.unit
def test_profile_metadata(section):
    profile = electric_profile(frequency_sixth_order(section, L, 1), section, 64)

    assert profile.x.shape == (64,)
    assert profile.x[0] == pytest.approx(-L / 2)
    assert profile.x[-1] == pytest.approx(L / 2)
    assert profile.eta1 == section.eta1
    assert profile.through_thickness == "z*(h1 - z)"


@pytest.mark.unit
def test_potential_follows_deflection(section):
    """Test that phi is proportional to w for the trigonometric shape."""
    result = frequency_sixth_order(section, L, 1)
    x = np.linspace(-L / 4, L / 4, 11)
    ratio = potential_derivative(result, section, x) / np.cos(result.wavenumber * x)

    np.testing.assert_allclose(ratio, ratio[0], rtol=1e-10)


@pytest.mark.unit
def test_bending_moment_vanishes_at_supports(section):
    """Test M(+-L/2) = 0 for a simply supported mode."""
    result = frequency_sixth_order(section, L, 2)
    peak = np.max(np.abs(bending_moment(result, section, np.linspace(-L / 2, L / 2, 101))))

    assert abs(bending_moment(result, section, -L / 2)) <= 1e-12 * peak
    assert abs(bending_moment(result, section, L / 2)) <= 1e-12 * peak


@pytest.mark.unit
def test_no_coupling_raises(inert_layup):
    """Test NoCouplingError when F = 0."""
    inert = section_properties(inert_layup)
    result = frequency_closed_form(inert, L, 1)

    with pytest.raises(NoCouplingError):
        electric_profile(result, inert, 64)
    with pytest.raises(NoCouplingError):
        potential_derivative(result, inert, 0.0)


@pytest.mark.unit
def test_profile_rejects_coarse_grid(section):
    with pytest.raises(ParameterError):
        electric_profile(frequency_closed_form(section, L, 1), section, 10)


@pytest.mark.unit
def test_fields_through_thickness(layup, section):
    """Test potential boundary values and vanishing electric fields in the substrate."""
    result = frequency_sixth_order(section, L, 1)
    x = 0.1 * L
    fields = field_components(result, section, layup, x, np.array([-layup.h2, -0.5 * layup.h2, 0.0, layup.h1]))

    np.testing.assert_allclose(fields.potential, 0.0, atol=0.0)
    assert fields.E3[0] == 0.0 and fields.D3[1] == 0.0
    assert fields.E3[2] == pytest.approx(-layup.h1 * potential_derivative(result, section, x))
    assert fields.E3[3] == pytest.approx(layup.h1 * potential_derivative(result, section, x))


@pytest.mark.unit
def test_axial_field_is_minus_potential_gradient(layup, section):
    """Test E1 against a central difference of the potential in x."""
    result = frequency_sixth_order(section, L, 2)
    z = 0.3 * layup.h1
    x0, dx = 0.1 * L, 1e-7

    ahead = float(field_components(result, section, layup, x0 + dx, z).potential)
    behind = float(field_components(result, section, layup, x0 - dx, z).potential)
    E1 = field_components(result, section, layup, x0, z).E1

    assert -(ahead - behind) / (2 * dx) == pytest.approx(float(E1), rel=1e-6)


@pytest.mark.unit
def test_stress_sign_follows_curvature(layup, section):
    """Test that the substrate stress changes sign across the neutral axis."""
    result = frequency_closed_form(section, L, 1)
    fields = field_components(result, section, layup, 0.0, np.array([-layup.h2, section.z0 + 1e-6]))

    assert np.sign(fields.sigma11[0]) != np.sign(fields.sigma11[1])


@pytest.mark.unit
def test_fields_reject_positions_outside_laminate(layup, section):
    result = frequency_closed_form(section, L, 1)

    with pytest.raises(ParameterError):
        field_components(result, section, layup, 0.0, 2 * layup.h1)
