"""Renormalized on-diagonal Green functions.

G_ren(z) = lim_{r' -> r} [G(r, r'; z) - S(r, r')],  S(r, r') = -(1/2pi) log|r - r'| sigma_0.

The limit is diagonal and independent of r in both the free and the magnetic case.
"""

from dataclasses import dataclass
from typing import Dict

import numpy as np

from .errors import BranchCutError, ParameterError, PoleError, WrongCaseError
from .green import (POLE_DISTANCE, check_free_energy, check_magnetic_energy, extrapolate_removable,
                    near_removable_point)
from .logger import get_logger
from .model import ModelParams, as_energy, as_point, beta, principal_sqrt, zeta_pm
from .specfun import EULER_GAMMA, digamma
from .spectrum import nearest_landau

logger = get_logger(__name__)

PSI_ONE = -EULER_GAMMA
FORMS = ("closed", "q")


@dataclass(frozen=True)
class RenormValue:
    diag_up: complex
    diag_down: complex

    @property
    def off_diagonal(self) -> complex:
        return 0j

    def as_matrix(self) -> np.ndarray:
        return np.array([[self.diag_up, 0j], [0j, self.diag_down]], dtype=complex)

    def to_record(self) -> Dict[str, float]:
        return {
            "up_re": self.diag_up.real,
            "up_im": self.diag_up.imag,
            "down_re": self.diag_down.real,
            "down_im": self.diag_down.imag,
        }


def singular_part(r, r_prime) -> float:
    """S(r, r') = -(1/2pi) log|r - r'| (scalar factor of sigma_0)."""
    r, rp = as_point(r), as_point(r_prime)
    rho = (r - rp).norm()
    if rho == 0.0:
        raise ParameterError("S(r, r') is undefined at r = r'")
    return float(-np.log(rho) / (2.0 * np.pi))


def _principal_log(w: complex) -> complex:
    w = complex(w)
    if w.imag == 0.0 and w.real <= 0.0:
        raise BranchCutError(f"log argument {w} lies on the branch cut (-inf, 0]")
    return complex(np.log(np.complex128(w)))


# =============================================================================
# FREE CASE
# =============================================================================

def q_free(z) -> complex:
    """Q(z) = (1/2pi)(psi(1) - log(-z)/2 + log 2)."""
    z = as_energy(z)
    return (PSI_ONE - 0.5 * _principal_log(-z) + np.log(2.0)) / (2.0 * np.pi)


def green_ren_free(params: ModelParams, z, form: str = "closed",
                   pole_distance: float = POLE_DISTANCE) -> RenormValue:
    """Renormalized free Green function, a multiple of the identity.

    ``form="closed"`` uses the logarithm-of-ratio display, ``form="q"`` the
    combination of Q at the two shifted arguments; they agree identically.
    """
    if params.b != 0.0:
        raise WrongCaseError("green_ren_free requires b = 0")
    if form not in FORMS:
        raise ParameterError(f"form must be one of {FORMS}, got {form!r}")
    z = as_energy(z)
    kappa = params.kappa
    check_free_energy(z, -kappa ** 2, pole_distance)
    s = principal_sqrt(-(z + kappa ** 2))
    zeta_p, zeta_m = s + 1j * kappa, s - 1j * kappa

    if form == "closed":
        value = PSI_ONE - 0.5 * _principal_log(-z / 4.0)
        if kappa != 0.0:
            value += kappa / (2j * s) * _principal_log(zeta_p / zeta_m)
        value /= 2.0 * np.pi
    else:
        q_p, q_m = q_free(-zeta_p ** 2), q_free(-zeta_m ** 2)
        value = -kappa / (2j * s) * (q_p - q_m) + 0.5 * (q_p + q_m)
    return RenormValue(complex(value), complex(value))


# =============================================================================
# MAGNETIC CASE
# =============================================================================

def q_landau(b: float, z, pole_distance: float = POLE_DISTANCE) -> complex:
    """Q(z) = -(1/4pi)(psi(1/2 - z/2|b|) - 2 psi(1) + log(|b|/2))."""
    if b == 0.0:
        raise WrongCaseError("q_landau requires b != 0; use q_free")
    z = as_energy(z)
    distance, n = nearest_landau(b, z)
    if distance < pole_distance:
        raise PoleError(f"z = {z} is the Landau level n = {n}", location=abs(b) * (2 * n + 1), level=n)
    a = 0.5 - z / (2.0 * abs(b))
    return complex(-(digamma(a) - 2.0 * PSI_ONE + np.log(abs(b) / 2.0)) / (4.0 * np.pi))


def green_ren_magnetic(params: ModelParams, z, pole_distance: float = POLE_DISTANCE) -> RenormValue:
    """Renormalized Green function in the field b != 0.

    up   = (beta - kappa)/(2 eta) (Q(zeta^-(b)) - Q(zeta^+(b))) + (Q(zeta^-(b)) + Q(zeta^+(b)))/2
    down = (-beta - kappa)/(2 eta) (Q(zeta^-(-b)) - Q(zeta^+(-b))) + (...)/2
    """
    if params.b == 0.0:
        raise WrongCaseError("green_ren_magnetic requires b != 0; use green_ren_free")
    z = as_energy(z)
    b = params.b
    if params.kappa == 0.0:
        shift = params.gamma * b
        return RenormValue(q_landau(b, z - shift, pole_distance), q_landau(b, z + shift, pole_distance))

    check_magnetic_energy(params, z, pole_distance)
    if near_removable_point(params, z):
        up, down = extrapolate_removable(lambda w: _spin_orbit_q(params, w, pole_distance), z)
        return RenormValue(complex(up), complex(down))
    up, down = _spin_orbit_q(params, z, pole_distance)
    return RenormValue(complex(up), complex(down))


def _spin_orbit_q(params: ModelParams, z: complex, pole_distance: float):
    bt = beta(params)
    eta_value = principal_sqrt(z + params.kappa ** 2 + bt ** 2, side="upper")
    inv = 1.0 / (2.0 * eta_value)
    entries = []
    for field_sign, weight in ((1, bt - params.kappa), (-1, -bt - params.kappa)):
        q_m = q_landau(params.b, zeta_pm(params, z, -1, field_sign, eta_value=eta_value), pole_distance)
        q_p = q_landau(params.b, zeta_pm(params, z, 1, field_sign, eta_value=eta_value), pole_distance)
        entries.append(weight * inv * (q_m - q_p) + 0.5 * (q_m + q_p))
    return entries


def green_ren(params: ModelParams, z, pole_distance: float = POLE_DISTANCE) -> RenormValue:
    if params.b == 0.0:
        return green_ren_free(params, z, pole_distance=pole_distance)
    return green_ren_magnetic(params, z, pole_distance)
