import cmath

import numpy as np
import pytest

from core.errors import BranchCutError, DegenerateCaseError, ParameterError
from core.model import (ComplexEnergy, ModelParams, PhysicalParams, Point2, Variant, beta,
                        dimensionless_from_physical, energy_scale, eta, get_unit_system, parse_complex,
                        parse_point, principal_sqrt, zeta_pm)


SI = get_unit_system("si")


def test_zero_physical_parameters_give_zero_case():
    params = dimensionless_from_physical(PhysicalParams(effective_mass=SI.electron_mass), "R")
    assert (params.kappa, params.b, params.gamma) == (0.0, 0.0, 0.0)


def test_free_electron_g_factor_gives_gamma_minus_one():
    physical = PhysicalParams(effective_mass=SI.electron_mass, g_factor=2.0)
    assert dimensionless_from_physical(physical, "D").gamma == pytest.approx(-1.0, rel=1e-15)


@pytest.mark.parametrize("units", ["si", "gaussian"])
def test_one_flux_quantum_per_two_pi_gives_unit_field(units):
    system = get_unit_system(units)
    physical = PhysicalParams(effective_mass=system.electron_mass, field=system.flux_quantum() / (2 * np.pi),
                              units=units)
    assert dimensionless_from_physical(physical, "R").b == pytest.approx(1.0, rel=1e-12)


def test_kappa_scales_with_length_unit():
    physical = PhysicalParams(effective_mass=0.05 * SI.electron_mass, rashba_alpha=1e-11, length_unit=1e-8)
    doubled = PhysicalParams(effective_mass=0.05 * SI.electron_mass, rashba_alpha=1e-11, length_unit=2e-8)
    k1 = dimensionless_from_physical(physical, "R").kappa
    k2 = dimensionless_from_physical(doubled, "R").kappa
    assert k2 == pytest.approx(2 * k1)
    assert energy_scale(doubled) == pytest.approx(energy_scale(physical) / 4)


def test_dresselhaus_reads_its_own_coupling():
    physical = PhysicalParams(effective_mass=SI.electron_mass, rashba_alpha=1e-11, dresselhaus_alpha=0.0)
    assert dimensionless_from_physical(physical, "D").kappa == 0.0


@pytest.mark.parametrize("bad", [np.nan, np.inf, "abc"])
def test_non_finite_parameters_rejected(bad):
    with pytest.raises(ParameterError):
        ModelParams("R", bad)


def test_physical_parameters_validated():
    with pytest.raises(ParameterError):
        PhysicalParams(effective_mass=-1.0)
    with pytest.raises(ParameterError):
        PhysicalParams(effective_mass=1.0, units="planck")


def test_variant_parse():
    assert Variant.parse("rashba") is Variant.RASHBA
    assert Variant.parse("d") is Variant.DRESSELHAUS
    with pytest.raises(ParameterError):
        Variant.parse("X")


@pytest.mark.parametrize("variant, kappa, b, gamma, expected", [
    ("R", 1.0, 1.0, 0.0, 0.5),
    ("D", 1.0, 1.0, 1.0, 0.0),
    ("D", 1.0, 1.0, 0.0, -0.5),
    ("R", 0.7, 0.0, 3.0, 0.0),
])
def test_beta(variant, kappa, b, gamma, expected):
    assert beta(ModelParams(variant, kappa, b, gamma)) == pytest.approx(expected)


def test_beta_undefined_without_coupling_in_field():
    with pytest.raises(DegenerateCaseError):
        beta(ModelParams("R", 0.0, 1.0, 0.0))


def test_eta_examples():
    free = ModelParams("R", 0.0)
    assert eta(free, 1.0) == 1.0
    params = ModelParams("R", 1.0, 1.0, 0.0)  # kappa^2 + beta^2 = 1.25
    assert eta(params, -1.25 + 1j) == pytest.approx((1 + 1j) / np.sqrt(2))
    assert eta(ModelParams("R", 1.0), 3 + 4j) == pytest.approx(cmath.sqrt(4 + 4j))


def test_eta_on_cut_needs_side():
    params = ModelParams("R", 1.0, 1.0, 0.0)
    with pytest.raises(BranchCutError):
        eta(params, -1.25)
    with pytest.raises(BranchCutError):
        eta(params, -3.0)
    assert eta(params, -3.0, side="upper") == pytest.approx(1j * np.sqrt(1.75))
    assert eta(params, -3.0, side="lower") == pytest.approx(-1j * np.sqrt(1.75))


def test_principal_sqrt_rejects_unknown_side():
    with pytest.raises(ParameterError):
        principal_sqrt(-1.0, side="left")


def test_zeta_collapses_without_coupling():
    params = ModelParams("D", 0.0)
    z = 0.3 + 0.7j
    assert zeta_pm(params, z, 1) == pytest.approx(z)
    assert zeta_pm(params, z, -1) == pytest.approx(z)


@pytest.mark.parametrize("variant", ["R", "D"])
def test_zeta_difference_is_four_kappa_eta(variant):
    params = ModelParams(variant, 0.8, -1.3, 0.4)
    z = 1.1 + 0.2j
    e = eta(params, z)
    assert zeta_pm(params, z, 1) - zeta_pm(params, z, -1) == pytest.approx(4 * params.kappa * e)
    # the field shift enters with opposite signs in the two spin blocks
    shift = zeta_pm(params, z, 1, 1) - zeta_pm(params, z, 1, -1)
    expected = 2 * params.b if variant == "R" else -2 * params.b
    assert shift == pytest.approx(expected)


@pytest.mark.parametrize("text, expected", [
    ("-2+0.5i", -2 + 0.5j),
    (" -2 + 0.5i", -2 + 0.5j),
    ("3", 3 + 0j),
    ("i", 1j),
    ("-i", -1j),
    ("1-j", 1 - 1j),
    ("2.5e-1+1e2i", 0.25 + 100j),
])
def test_parse_complex(text, expected):
    assert parse_complex(text) == expected


@pytest.mark.parametrize("text", ["", "1+", "a+bi", "1,2"])
def test_parse_complex_rejects_garbage(text):
    with pytest.raises(ParameterError):
        parse_complex(text)


def test_points_and_energies():
    r, rp = parse_point("1.5, -2"), Point2(0.5, 1.0)
    assert (r - rp).as_tuple() == (1.0, -3.0)
    assert (r + rp).as_tuple() == (2.0, -1.0)
    assert r.wedge(rp) == pytest.approx(1.5 * 1.0 - (-2.0) * 0.5)
    assert ComplexEnergy.parse("1-2i").conjugate().z == 1 + 2j
    with pytest.raises(ParameterError):
        parse_point("1;2")
    with pytest.raises(ParameterError):
        ComplexEnergy(complex(np.inf, 0))
