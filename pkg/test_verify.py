import numpy as np
import pytest

from core.errors import AccuracyError, GeometryError, ParameterError, PoleError, PreconditionError
from core.green import KernelRequest, green0_landau, green_function
from core.model import ModelParams, Point2
from core.spectrum import spin_orbit_levels
from core.verify import (SUITES, MatrixOperator, ResidualReport, check_energy_resolvent, check_fd_order,
                         check_projector_orthonormality, check_resolvent_identity, check_susy_proposition,
                         check_v2h_identity, extrapolate_coincidence_limit, fock_basis_levels, fock_hamiltonian,
                         hausdorff_distance, laguerre_table, landau_projector, run_suite, spectral_sum_green0)


# =============================================================================
# MATRIX IDENTITIES
# =============================================================================

@pytest.mark.parametrize("alpha", [0.5, 0.0, -1.3])
def test_resolvent_identity_diagonal(alpha):
    A = MatrixOperator(np.diag([1.0, 2.0, 3.0]), self_adjoint=True)
    report = check_resolvent_identity(A, alpha, 1j)
    assert report.passed
    assert report.residual_max < 1e-12


def test_resolvent_identity_random_trials():
    reports = run_suite("resolvent", trials=100, seed=3)
    assert len(reports) > 90
    assert all(r.passed for r in reports)


def test_resolvent_identity_preconditions():
    with pytest.raises(ParameterError):
        check_resolvent_identity(MatrixOperator(np.diag([1.0, 2.0])), 0.5, 1j)
    with pytest.raises(PreconditionError):
        check_resolvent_identity(MatrixOperator(np.diag([1.0, 2.0]), self_adjoint=True), 0.0, 1.0)


@pytest.mark.parametrize("matrix, m", [
    (np.zeros((3, 2)), 1.0),
    (np.array([[1.0]]), 0.0),
    (np.array([[2.0, 0.0], [0.0, 1.0], [1.0, 1.0]]), 0.3),
])
def test_susy_proposition_examples(matrix, m):
    assert check_susy_proposition(MatrixOperator(matrix), m).passed


def test_susy_proposition_random_trials():
    reports = run_suite("susy", trials=30, seed=5)
    assert len(reports) == 30
    assert all(r.passed for r in reports)


def test_susy_proposition_rejects_negative_mass():
    with pytest.raises(ParameterError):
        check_susy_proposition(MatrixOperator(np.eye(2)), -0.1)


def test_matrix_operator_validation():
    with pytest.raises(ParameterError):
        MatrixOperator(np.array([[0.0, 1.0], [0.0, 0.0]]), self_adjoint=True)
    with pytest.raises(ParameterError):
        MatrixOperator(np.zeros((65, 2)))
    with pytest.raises(ParameterError):
        MatrixOperator(np.array([[np.nan]]))
    op = MatrixOperator(np.array([[1.0, 2j]]))
    assert (op.rows, op.cols) == (1, 2)
    assert op.adjoint[1, 0] == -2j


def test_hausdorff_distance():
    assert hausdorff_distance([0.0, 1.0], [0.0, 1.5]) == 0.5
    assert hausdorff_distance([0.0], [0.0, 2.0]) == 2.0
    assert hausdorff_distance([], []) == 0.0
    assert hausdorff_distance([], [1.0]) == np.inf


def test_residual_report():
    report = ResidualReport.make(0.5, 1.0, "demo", ratio=4.1)
    assert report.passed
    assert report.to_dict() == {"residual_max": 0.5, "tolerance": 1.0, "passed": True, "context": "demo",
                                "details": {"ratio": 4.1}}
    assert not ResidualReport.make(2.0, 1.0, "demo").passed


# =============================================================================
# LANDAU PROJECTIONS AND SPECTRAL SUM
# =============================================================================

def test_laguerre_table():
    table = laguerre_table(3, 1.0)
    assert table[:3] == pytest.approx([1.0, 0.0, -0.5])
    assert table[3] == pytest.approx(1 - 3 + 1.5 - 1 / 6)


def test_projector_on_diagonal():
    # P_n(r, r) = |b|/2pi for every level
    for n in range(4):
        assert landau_projector(-2.0, (0.7, 0.1), (0.7, 0.1), n) == pytest.approx(1 / np.pi)


def test_projector_orthonormality():
    report = check_projector_orthonormality(1.0, (0.3, 0.2), (-0.4, 0.1), n_max=3, tolerance=1e-8)
    assert report.passed, report


def test_landau_suite_passes():
    reports = run_suite("landau", trials=2, seed=11)
    assert len(reports) == 10
    assert all(r.passed for r in reports)


def test_spectral_sum_errors():
    with pytest.raises(ParameterError):
        spectral_sum_green0(0.0, (1, 0), (0, 0), -1.0, 100)
    with pytest.raises(ParameterError):
        spectral_sum_green0(1.0, (1, 0), (1, 0), -1.0, 100)
    with pytest.raises(ParameterError):
        spectral_sum_green0(1.0, (1, 0), (0, 0), -1.0, 0)
    with pytest.raises(PoleError):
        spectral_sum_green0(1.0, (1, 0), (0, 0), 3.0 + 1e-5j, 100)
    with pytest.raises(AccuracyError):
        spectral_sum_green0(1.0, (0.1, 0), (0, 0), -1.0, 10, tolerance=1e-8)


def test_spectral_sum_phase_and_self_convergence():
    b, r, rp, z = -1.5, Point2(0.9, 0.4), Point2(-0.2, 0.3), 0.7 + 0.6j
    closed = green0_landau(b, r, rp, z)
    errors = [abs(spectral_sum_green0(b, r, rp, z, n) - closed) for n in (50, 100)]
    assert errors[1] < errors[0] / 2
    coarse = spectral_sum_green0(b, r, rp, z, 1000)
    fine = spectral_sum_green0(b, r, rp, z, 2000)
    assert abs(fine - coarse) < 1e-9
    ratio = fine / closed
    assert ratio.real > 0
    assert abs(ratio.imag) < 1e-8


# =============================================================================
# FINITE DIFFERENCES
# =============================================================================

def _column(params, z, source=Point2(0.0, 0.0)):
    return lambda p: green_function(KernelRequest(params, p, source, z))


def test_fd_order_magnetic(dresselhaus):
    z = 0.5 + 0.5j
    report = check_fd_order(dresselhaus, _column(dresselhaus, z), z, (0.8, -0.3), source=(0.0, 0.0))
    assert report.passed, report.details


def test_fd_geometry_and_step(free_params):
    z = -1.0 + 0.5j
    with pytest.raises(GeometryError):
        check_fd_order(free_params, _column(free_params, z), z, (0.05, 0.0), source=(0.0, 0.0))
    with pytest.raises(ParameterError):
        check_fd_order(free_params, _column(free_params, z), z, (1.0, 0.0), h=1e-5, source=(0.0, 0.0))


# =============================================================================
# FOCK BASIS
# =============================================================================

@pytest.mark.parametrize("case", [("R", 1.0, 1.0, 0.0), ("D", 1.0, 1.0, 0.0), ("R", 0.5, 1.0, 1.0),
                                  ("D", 0.5, 1.0, 1.0), ("R", 0.8, -1.3, 0.4)])
def test_fock_levels_match_closed_form(case):
    params = ModelParams(*case)
    fock = fock_basis_levels(params, 64).lowest(6)
    closed = spin_orbit_levels(params, 20).lowest(6)
    assert fock == pytest.approx(closed, abs=1e-8)


@pytest.mark.parametrize("variant", ["R", "D"])
def test_v2h_identity(variant):
    assert check_v2h_identity(ModelParams(variant, 0.7, -1.1, 0.3)).passed


def test_fock_basis_validation():
    with pytest.raises(ParameterError):
        fock_basis_levels(ModelParams("R", 1.0, 1.0), 8)
    with pytest.raises(ParameterError):
        fock_hamiltonian(ModelParams("R", 1.0), 16)


def test_fock_hamiltonian_is_hermitian(rashba):
    h = fock_hamiltonian(rashba, 16)
    assert np.allclose(h, h.conj().T)


# =============================================================================
# EXTRAPOLATION AND SUITES
# =============================================================================

def test_extrapolate_coincidence_limit():
    f = lambda rho: 2.0 - 0.5j + 3.0 * rho ** 2 * np.log(rho) - rho ** 2
    assert extrapolate_coincidence_limit(f) == pytest.approx(2.0 - 0.5j, abs=1e-12)
    with pytest.raises(ParameterError):
        extrapolate_coincidence_limit(f, radii=(1e-2, 1e-3))


def test_run_suite_validation():
    with pytest.raises(ParameterError):
        run_suite("nonsense")
    with pytest.raises(ParameterError):
        run_suite("susy", trials=0)
    assert "all" not in SUITES


def test_run_suite_is_reproducible():
    first = [r.residual_max for r in run_suite("susy", trials=6, seed=1)]
    second = [r.residual_max for r in run_suite("susy", trials=6, seed=1)]
    assert first == second


@pytest.mark.parametrize("suite", ["symmetry", "paths"])
def test_kernel_suites_pass(suite):
    reports = run_suite(suite, trials=4, seed=2)
    assert reports
    assert all(r.passed for r in reports)


@pytest.mark.parametrize("suite, trials", [("renorm", 2), ("fd", 2), ("energy", 3)])
def test_remaining_suites_pass(suite, trials):
    reports = run_suite(suite, trials=trials, seed=4)
    assert reports
    assert all(r.passed for r in reports), [r.context for r in reports if not r.passed]


def test_level_suite_scans_poles_for_both_variants():
    reports = run_suite("levels", trials=1)
    assert all(r.passed for r in reports), [r.context for r in reports if not r.passed]
    contexts = [r.context for r in reports]
    assert sum(c.startswith("pole scan R") for c in contexts) == 2
    assert sum(c.startswith("pole scan D") for c in contexts) == 2


# =============================================================================
# RESOLVENT IDENTITY IN ENERGY
# =============================================================================

def test_energy_resolvent_free():
    report = check_energy_resolvent(ModelParams("R", 0.5), (0.75, 0.25), (0.0, 0.0), -2 + 1j, -2.5 - 0.5j)
    assert report.passed, report
    assert report.details["nodes"] == 36 ** 2


def test_energy_resolvent_magnetic():
    report = check_energy_resolvent(ModelParams("D", 1.0, 2.0, 0.0), (0.5, 0.5), (-0.25, 0.0), -2.5 + 1j, -2 - 1j)
    assert report.passed, report


def test_energy_resolvent_validation():
    params = ModelParams("R", 0.5)
    with pytest.raises(ParameterError):
        check_energy_resolvent(params, (1, 0), (0, 0), -2 + 1j, -2 + 1j)
    with pytest.raises(ParameterError):
        check_energy_resolvent(params, (1, 0), (0, 0), -2 + 1j, -3, h=0.0)
    with pytest.raises(ParameterError):
        check_energy_resolvent(params, (1, 0), (0, 0), -2 + 1j, -3, h=0.5, half_width=1.0)
    with pytest.raises(GeometryError):
        check_energy_resolvent(params, (0.05, 0.0), (0.0, 0.0), -2 + 1j, -3)
