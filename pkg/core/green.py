"""Green functions of the spin-orbit Hamiltonians.

Every spinor kernel is assembled from scalar resolvent kernels through

    (H - z)^-1 = (V - kappa) / (2 eta) [R(V^2; (eta-kappa)^2) - R(V^2; (eta+kappa)^2)]
               + 1/2 [R(V^2; (eta-kappa)^2) + R(V^2; (eta+kappa)^2)],

with V = U + beta sigma_z and V^2 block diagonal.  The off-diagonal entries
need U applied to the scalar kernels; two evaluation paths exist:

* ``operator``: U is applied to analytic gradients of the scalar kernels.
* ``entrywise``: closed formulas in terms of K1 (free) or F0 (magnetic).

Both paths must agree; tests compare them.
"""

from dataclasses import dataclass
from typing import Callable, Dict, Tuple

import numpy as np

from .errors import DomainError, ParameterError, PoleError, SingularityError, SpectrumError, WrongCaseError
from .logger import get_logger
from .model import (ComplexEnergy, ModelParams, Point2, Variant, as_energy, as_point, beta,
                    principal_sqrt, zeta_pm)
from .specfun import DEFAULT_CONTROL, SeriesControl, bessel_k01, gamma_tricomi
from .spectrum import nearest_landau, nearest_level

logger = get_logger(__name__)

ON_AXIS_TOLERANCE = 1e-12
POLE_DISTANCE = 1e-10
PATHS = ("operator", "entrywise")
# below this |z + kappa^2 + beta^2| the magnetic kernels are extrapolated
ETA_REGULAR_RADIUS = 1e-6

FOUR_PI = 4.0 * np.pi
TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class SpinKernel:
    g11: complex
    g12: complex
    g21: complex
    g22: complex

    def as_matrix(self) -> np.ndarray:
        return np.array([[self.g11, self.g12], [self.g21, self.g22]], dtype=complex)

    @classmethod
    def from_matrix(cls, matrix) -> "SpinKernel":
        m = np.asarray(matrix, dtype=complex)
        return cls(complex(m[0, 0]), complex(m[0, 1]), complex(m[1, 0]), complex(m[1, 1]))

    @classmethod
    def scalar(cls, value: complex) -> "SpinKernel":
        return cls(complex(value), 0j, 0j, complex(value))

    def adjoint(self) -> "SpinKernel":
        """Conjugate transpose."""
        return SpinKernel(self.g11.conjugate(), self.g21.conjugate(), self.g12.conjugate(), self.g22.conjugate())

    def max_abs_diff(self, other: "SpinKernel") -> float:
        return float(np.max(np.abs(self.as_matrix() - other.as_matrix())))

    def to_record(self) -> Dict[str, float]:
        record = {}
        for name in ("g11", "g12", "g21", "g22"):
            value = getattr(self, name)
            record[f"{name}_re"] = value.real
            record[f"{name}_im"] = value.imag
        return record


@dataclass(frozen=True)
class KernelRequest:
    params: ModelParams
    r: Point2
    r_prime: Point2
    z: ComplexEnergy

    def __post_init__(self):
        object.__setattr__(self, "r", as_point(self.r))
        object.__setattr__(self, "r_prime", as_point(self.r_prime))
        if not isinstance(self.z, ComplexEnergy):
            object.__setattr__(self, "z", ComplexEnergy(self.z))


# =============================================================================
# GUARDS
# =============================================================================

def _separation(r: Point2, rp: Point2, on_axis_tolerance: float) -> Tuple[float, float, float]:
    X, Y = r.x - rp.x, r.y - rp.y
    rho = float(np.hypot(X, Y))
    if rho < on_axis_tolerance:
        raise SingularityError(f"Kernel is singular at r = r' (|r - r'| = {rho:.3g}); use the renormalized value")
    return X, Y, rho


def check_free_energy(z: complex, threshold: float, pole_distance: float):
    if z.real >= threshold and abs(z.imag) < pole_distance:
        raise SpectrumError(f"z = {z} lies in the continuous spectrum [{threshold:g}, inf)")


def check_magnetic_energy(params: ModelParams, z: complex, pole_distance: float):
    distance, energy = nearest_level(params, z)
    if distance < pole_distance:
        raise PoleError(f"z = {z} is within {distance:.3g} of the level {energy:.15g}", location=energy)


def near_removable_point(params: ModelParams, z: complex) -> bool:
    """True when |eta^2| = |z + kappa^2 + beta^2| is too small to divide by eta."""
    return abs(z + params.kappa ** 2 + beta(params) ** 2) < ETA_REGULAR_RADIUS


def extrapolate_removable(evaluate: Callable[[complex], np.ndarray], z: complex,
                          step: float = ETA_REGULAR_RADIUS) -> np.ndarray:
    """Value at z of a function analytic near z, from z + i step and z + i step/4.

    The (eta - kappa)/(2 eta) quotient has a removable singularity at eta = 0, but
    evaluating it there divides zero by zero.  Richardson extrapolation of the two
    shifted values is accurate to O(step^2).  The shift moves z further from the
    real axis, so |eta^2| >= step/4 at both samples.
    """
    shift = 1j * step if z.imag >= 0 else -1j * step
    far = np.asarray(evaluate(z + shift), dtype=complex)
    near = np.asarray(evaluate(z + 0.25 * shift), dtype=complex)
    return (4.0 * near - far) / 3.0


# =============================================================================
# SCALAR KERNELS
# =============================================================================

def _free_jet(w: complex, X: float, Y: float, rho: float, ctl: SeriesControl):
    """(G0, dG0/dx, dG0/dy, K1 part) of (1/2pi) K0(sqrt(-w) |r - r'|)."""
    root = principal_sqrt(-w)
    k0, k1 = bessel_k01(root * rho, ctl)
    value = k0 / TWO_PI
    radial = -root * k1 / (TWO_PI * rho)
    return value, radial * X, radial * Y, root * k1


def green0_free(r, r_prime, z, ctl: SeriesControl = DEFAULT_CONTROL,
                on_axis_tolerance: float = ON_AXIS_TOLERANCE, pole_distance: float = POLE_DISTANCE) -> complex:
    """(1/2pi) K0(sqrt(-z) |r - r'|), principal branch."""
    r, rp, z = as_point(r), as_point(r_prime), as_energy(z)
    _, _, rho = _separation(r, rp, on_axis_tolerance)
    check_free_energy(z, 0.0, pole_distance)
    return _free_jet(z, 0.0, 0.0, rho, ctl)[0]


def _landau_envelope(b: float, r: Point2, rp: Point2) -> Tuple[float, complex]:
    """x = |b| |r - r'|^2 / 2 and the gauge phase times e^{-x/2} / 4pi."""
    x = abs(b) * (r - rp).norm() ** 2 / 2.0
    return x, np.exp(-1j * b * r.wedge(rp) / 2.0 - x / 2.0) / FOUR_PI


def _landau_jet(b: float, r: Point2, rp: Point2, w: complex, ctl: SeriesControl, need_f: bool = True):
    """(G0, dG0/dx, dG0/dy, F0) of the magnetic scalar kernel at energy w."""
    absb = abs(b)
    X, Y = r.x - rp.x, r.y - rp.y
    x, envelope = _landau_envelope(b, r, rp)
    a = 0.5 - w / (2.0 * absb)
    g0 = complex(gamma_tricomi(a, 1, x, ctl) * envelope)
    f0 = complex(-gamma_tricomi(a + 1.0, 2, x, ctl) * envelope) if need_f else 0j
    dx = (-1j * b * rp.y / 2.0 - absb * X / 2.0) * g0 + absb * X * f0
    dy = (1j * b * rp.x / 2.0 - absb * Y / 2.0) * g0 + absb * Y * f0
    return g0, dx, dy, f0


def green0_landau(b: float, r, r_prime, z, ctl: SeriesControl = DEFAULT_CONTROL,
                  on_axis_tolerance: float = ON_AXIS_TOLERANCE, pole_distance: float = POLE_DISTANCE) -> complex:
    """Green function of the Landau Hamiltonian K^2 in the symmetric gauge.

    G0 = (1/4pi) Gamma(a) Psi(a, 1; x) exp(-i b r^r'/2 - x/2),
    a = 1/2 - z/(2|b|), x = |b| |r - r'|^2 / 2.
    """
    if b == 0.0:
        raise WrongCaseError("green0_landau requires b != 0; use green0_free")
    r, rp, z = as_point(r), as_point(r_prime), as_energy(z)
    _separation(r, rp, on_axis_tolerance)
    distance, n = nearest_landau(b, z)
    if distance < pole_distance:
        raise PoleError(f"z = {z} is the Landau level n = {n}", location=abs(b) * (2 * n + 1), level=n)
    return _landau_jet(b, r, rp, z, ctl, need_f=False)[0]


def f0_landau(b: float, r, r_prime, z, ctl: SeriesControl = DEFAULT_CONTROL,
              on_axis_tolerance: float = ON_AXIS_TOLERANCE, pole_distance: float = POLE_DISTANCE) -> complex:
    """F0 = (1/4pi)(z/2|b| - 1/2) Gamma(a) Psi(a+1, 2; x) exp(...).

    Finite at z = |b|; poles at the Landau levels n >= 1.
    """
    if b == 0.0:
        raise WrongCaseError("f0_landau requires b != 0")
    r, rp, z = as_point(r), as_point(r_prime), as_energy(z)
    _separation(r, rp, on_axis_tolerance)
    distance, n = nearest_landau(b, z)
    if n >= 1 and distance < pole_distance:
        raise PoleError(f"z = {z} is the Landau level n = {n}", location=abs(b) * (2 * n + 1), level=n)
    # computed on its own: G0 has a pole at z = |b| where F0 is finite
    x, envelope = _landau_envelope(b, r, rp)
    a = 0.5 - z / (2.0 * abs(b))
    return complex(-gamma_tricomi(a + 1.0, 2, x, ctl) * envelope)


# =============================================================================
# SPINOR ASSEMBLY
# =============================================================================

def _apply_pi(sign: int, b: float, r: Point2, value: complex, dx: complex, dy: complex) -> complex:
    """Pi_{+-} = K_x +- i K_y applied in the first argument."""
    return -1j * dx + sign * dy + (b * r.y / 2.0 - sign * 1j * b * r.x / 2.0) * value


def _apply_u(variant: Variant, entry: str, b: float, r: Point2, jet) -> complex:
    value, dx, dy = jet[0], jet[1], jet[2]
    if variant is Variant.RASHBA:
        if entry == "12":
            return 1j * _apply_pi(-1, b, r, value, dx, dy)
        return -1j * _apply_pi(1, b, r, value, dx, dy)
    if entry == "12":
        return -_apply_pi(1, b, r, value, dx, dy)
    return -_apply_pi(-1, b, r, value, dx, dy)


def combine_resolvents(d_up: complex, s_up: complex, d_dn: complex, s_dn: complex,
                       u_d_dn: complex, u_d_up: complex, beta_value: float, kappa: float,
                       eta_value: complex) -> SpinKernel:
    """Assemble (V - kappa)/(2 eta) diag(D) + 1/2 diag(S).

    ``d_*``/``s_*`` are differences/sums of the scalar kernels at
    (eta-kappa)^2 and (eta+kappa)^2 shifted per spin block; ``u_d_dn`` is
    U_12 applied to d_dn and ``u_d_up`` is U_21 applied to d_up.
    """
    if eta_value == 0:
        raise DomainError("eta = 0: the resolvent combination is singular at z = -kappa^2 - beta^2")
    inv = 1.0 / (2.0 * eta_value)
    return SpinKernel(
        g11=(beta_value - kappa) * inv * d_up + 0.5 * s_up,
        g12=u_d_dn * inv,
        g21=u_d_up * inv,
        g22=(-beta_value - kappa) * inv * d_dn + 0.5 * s_dn,
    )


def _operator_assembly(params: ModelParams, r: Point2, eta_value: complex, bt: float,
                       jets: Dict[Tuple[int, int], tuple], field: float) -> SpinKernel:
    # jets[(field_sign, sign)]: scalar jet at zeta^sign(field_sign b)
    up_m, up_p = jets[(1, -1)], jets[(1, 1)]
    dn_m, dn_p = jets[(-1, -1)], jets[(-1, 1)]
    u12 = (_apply_u(params.variant, "12", field, r, dn_m) - _apply_u(params.variant, "12", field, r, dn_p))
    u21 = (_apply_u(params.variant, "21", field, r, up_m) - _apply_u(params.variant, "21", field, r, up_p))
    return combine_resolvents(
        d_up=up_m[0] - up_p[0], s_up=up_m[0] + up_p[0],
        d_dn=dn_m[0] - dn_p[0], s_dn=dn_m[0] + dn_p[0],
        u_d_dn=u12, u_d_up=u21, beta_value=bt, kappa=params.kappa, eta_value=eta_value,
    )


def green_free(req: KernelRequest, path: str = "operator", ctl: SeriesControl = DEFAULT_CONTROL,
               on_axis_tolerance: float = ON_AXIS_TOLERANCE, pole_distance: float = POLE_DISTANCE) -> SpinKernel:
    """Spinor Green function without magnetic field."""
    params = req.params
    if params.b != 0.0:
        raise WrongCaseError("green_free requires b = 0")
    if path not in PATHS:
        raise ParameterError(f"path must be one of {PATHS}, got {path!r}")
    r, rp, z = req.r, req.r_prime, req.z.z
    X, Y, rho = _separation(r, rp, on_axis_tolerance)
    kappa = params.kappa
    check_free_energy(z, -kappa ** 2, pole_distance)

    s = principal_sqrt(-(z + kappa ** 2))
    if path == "operator":
        eta_value = 1j * s
        jets = {}
        for sign in (-1, 1):
            jet = _free_jet((eta_value + sign * kappa) ** 2, X, Y, rho, ctl)
            jets[(1, sign)] = jet
            jets[(-1, sign)] = jet
        return _operator_assembly(params, r, eta_value, 0.0, jets, 0.0)

    # Entrywise: zeta_pm = s +- i kappa
    zeta_p, zeta_m = s + 1j * kappa, s - 1j * kappa
    k0p, k1p = bessel_k01(zeta_p * rho, ctl)
    k0m, k1m = bessel_k01(zeta_m * rho, ctl)
    diagonal = (-kappa / (1j * s) * (k0p - k0m) + k0p + k0m) / FOUR_PI
    radial = (zeta_p * k1p - zeta_m * k1m) / (FOUR_PI * 1j * s * rho)
    if params.variant is Variant.RASHBA:
        g12 = (1j * Y - X) * radial
        g21 = (X + 1j * Y) * radial
    else:
        g12 = (Y - 1j * X) * radial
        g21 = (-Y - 1j * X) * radial
    return SpinKernel(complex(diagonal), complex(g12), complex(g21), complex(diagonal))


def zeeman_kernel(req: KernelRequest, ctl: SeriesControl = DEFAULT_CONTROL,
                  on_axis_tolerance: float = ON_AXIS_TOLERANCE, pole_distance: float = POLE_DISTANCE) -> SpinKernel:
    """diag(G0(z - gamma b), G0(z + gamma b)) for kappa = 0, b != 0."""
    params = req.params
    shift = params.gamma * params.b
    up = green0_landau(params.b, req.r, req.r_prime, req.z.z - shift, ctl, on_axis_tolerance, pole_distance)
    down = green0_landau(params.b, req.r, req.r_prime, req.z.z + shift, ctl, on_axis_tolerance, pole_distance)
    return SpinKernel(up, 0j, 0j, down)


def green_magnetic(req: KernelRequest, path: str = "operator", ctl: SeriesControl = DEFAULT_CONTROL,
                   on_axis_tolerance: float = ON_AXIS_TOLERANCE, pole_distance: float = POLE_DISTANCE) -> SpinKernel:
    """Spinor Green function in the uniform field b != 0."""
    params = req.params
    if params.b == 0.0:
        raise WrongCaseError("green_magnetic requires b != 0; use green_free")
    if path not in PATHS:
        raise ParameterError(f"path must be one of {PATHS}, got {path!r}")
    if params.kappa == 0.0:
        logger.debug("kappa = 0: decoupled Zeeman kernel")
        return zeeman_kernel(req, ctl, on_axis_tolerance, pole_distance)

    r, rp, z = req.r, req.r_prime, req.z.z
    X, Y, _ = _separation(r, rp, on_axis_tolerance)
    check_magnetic_energy(params, z, pole_distance)
    if near_removable_point(params, z):
        logger.debug(f"z = {z} at eta = 0: extrapolating the kernel from nearby energies")
        value = extrapolate_removable(
            lambda w: _magnetic_assembly(params, r, rp, w, X, Y, path, ctl).as_matrix(), z)
        return SpinKernel.from_matrix(value)
    return _magnetic_assembly(params, r, rp, z, X, Y, path, ctl)


def _magnetic_assembly(params: ModelParams, r: Point2, rp: Point2, z: complex, X: float, Y: float,
                       path: str, ctl: SeriesControl) -> SpinKernel:
    b = params.b
    bt = beta(params)
    eta_value = principal_sqrt(z + params.kappa ** 2 + bt ** 2, side="upper")

    jets = {}
    for field_sign in (1, -1):
        for sign in (-1, 1):
            zeta = zeta_pm(params, z, sign, field_sign, eta_value=eta_value)
            jets[(field_sign, sign)] = _landau_jet(b, r, rp, zeta, ctl)

    if path == "operator":
        return _operator_assembly(params, r, eta_value, bt, jets, b)

    absb = abs(b)
    inv = 1.0 / (2.0 * eta_value)
    up_m, up_p = jets[(1, -1)], jets[(1, 1)]
    dn_m, dn_p = jets[(-1, -1)], jets[(-1, 1)]
    dg_up, dg_dn = up_m[0] - up_p[0], dn_m[0] - dn_p[0]
    df_up, df_dn = up_m[3] - up_p[3], dn_m[3] - dn_p[3]
    plus_part, minus_part = (b + absb) / 2.0, (b - absb) / 2.0
    if params.variant is Variant.RASHBA:
        g12 = (1j * Y - X) * (plus_part * dg_dn - absb * df_dn) * inv
        g21 = (-1j * Y - X) * (minus_part * dg_up + absb * df_up) * inv
    else:
        g12 = -(Y - 1j * X) * (minus_part * dg_dn + absb * df_dn) * inv
        g21 = -(Y + 1j * X) * (plus_part * dg_up - absb * df_up) * inv
    return SpinKernel(
        g11=complex((bt - params.kappa) * inv * dg_up + 0.5 * (up_m[0] + up_p[0])),
        g12=complex(g12),
        g21=complex(g21),
        g22=complex((-bt - params.kappa) * inv * dg_dn + 0.5 * (dn_m[0] + dn_p[0])),
    )


def green_function(req: KernelRequest, path: str = "operator", ctl: SeriesControl = DEFAULT_CONTROL,
                   on_axis_tolerance: float = ON_AXIS_TOLERANCE, pole_distance: float = POLE_DISTANCE) -> SpinKernel:
    """Dispatch to the free, Zeeman or magnetic kernel."""
    if req.params.b == 0.0:
        return green_free(req, path, ctl, on_axis_tolerance, pole_distance)
    return green_magnetic(req, path, ctl, on_axis_tolerance, pole_distance)


KernelFunction = Callable[[Point2], SpinKernel]


def column_kernel(params: ModelParams, r_prime, z, path: str = "operator",
                  ctl: SeriesControl = DEFAULT_CONTROL) -> KernelFunction:
    """r -> G(r, r'; z) for fixed r' and z, as consumed by the finite-difference checks."""
    rp = as_point(r_prime)
    energy = ComplexEnergy(as_energy(z))

    def kernel(r: Point2) -> SpinKernel:
        return green_function(KernelRequest(params, as_point(r), rp, energy), path, ctl)

    return kernel
