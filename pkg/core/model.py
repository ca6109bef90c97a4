"""Parameters, unit conversion and derived scalars of the spin-orbit Hamiltonians.

Dimensionless Hamiltonian (length unit L, energy unit hbar^2 / (2 m* L^2)):

    H_J = K^2 + 2 kappa_J U_J + gamma b sigma_z,   K = -i grad - a,   a = (-b y / 2, b x / 2)

with U_R = sigma_x K_y - sigma_y K_x and U_D = sigma_y K_y - sigma_x K_x.  The
vector potential is chosen so that K_x K_y - K_y K_x = i b; see NUMERICS.md.

All square roots and logarithms use the principal branch with the cut along
(-inf, 0].
"""

import re
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Any, Dict, Optional, Union

import numpy as np

from .errors import BranchCutError, DegenerateCaseError, ParameterError
from .logger import get_logger

logger = get_logger(__name__)

Number = Union[int, float, complex]


class Variant(str, Enum):
    RASHBA = "R"
    DRESSELHAUS = "D"

    @classmethod
    def parse(cls, value: Union[str, "Variant"]) -> "Variant":
        if isinstance(value, Variant):
            return value
        text = str(value).strip().upper()
        aliases = {"R": cls.RASHBA, "RASHBA": cls.RASHBA, "D": cls.DRESSELHAUS, "DRESSELHAUS": cls.DRESSELHAUS}
        if text not in aliases:
            raise ParameterError(f"Unknown variant {value!r}; expected R or D")
        return aliases[text]


# =============================================================================
# UNIT SYSTEMS
# =============================================================================

@dataclass(frozen=True)
class UnitSystem:
    """Fundamental constants of a unit system (CODATA 2018 values)."""

    name: str
    hbar: float
    electron_mass: float
    charge: float
    light_speed: float
    # Gaussian flux quantum carries c, SI does not
    flux_has_c: bool

    def flux_quantum(self, hbar=None, charge=None, light_speed=None) -> float:
        hbar = self.hbar if hbar is None else hbar
        charge = self.charge if charge is None else charge
        light_speed = self.light_speed if light_speed is None else light_speed
        factor = light_speed if self.flux_has_c else 1.0
        return 2.0 * np.pi * hbar * factor / abs(charge)


UNIT_SYSTEMS: Dict[str, UnitSystem] = {
    "si": UnitSystem("si", hbar=1.054571817e-34, electron_mass=9.1093837015e-31,
                     charge=1.602176634e-19, light_speed=299792458.0, flux_has_c=False),
    "gaussian": UnitSystem("gaussian", hbar=1.054571817e-27, electron_mass=9.1093837015e-28,
                           charge=4.80320471e-10, light_speed=2.99792458e10, flux_has_c=True),
}


def get_unit_system(name: str) -> UnitSystem:
    try:
        return UNIT_SYSTEMS[str(name).lower()]
    except KeyError:
        raise ParameterError(f"Unknown unit system {name!r}; expected one of {sorted(UNIT_SYSTEMS)}")


# =============================================================================
# PARAMETER TYPES
# =============================================================================

def _require_finite(name: str, value: float) -> float:
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise ParameterError(f"{name} must be a real number, got {value!r}")
    if not np.isfinite(value):
        raise ParameterError(f"{name} must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class PhysicalParams:
    """Physical material and field parameters in a chosen unit system.

    ``length_unit`` is the length L used for the dimensionless reduction, in the
    length unit of ``units`` (metres for SI, centimetres for Gaussian).
    """

    effective_mass: float
    rashba_alpha: float = 0.0
    dresselhaus_alpha: float = 0.0
    g_factor: float = 0.0
    field: float = 0.0
    units: str = "si"
    length_unit: float = 1.0
    electron_mass: Optional[float] = None
    hbar: Optional[float] = None
    charge: Optional[float] = None
    light_speed: Optional[float] = None

    def __post_init__(self):
        system = get_unit_system(self.units)
        for name in ("electron_mass", "hbar", "charge", "light_speed"):
            if getattr(self, name) is None:
                object.__setattr__(self, name, getattr(system, name))
        for name in ("effective_mass", "rashba_alpha", "dresselhaus_alpha", "g_factor", "field",
                     "length_unit", "electron_mass", "hbar", "charge", "light_speed"):
            object.__setattr__(self, name, _require_finite(name, getattr(self, name)))
        if self.effective_mass <= 0 or self.electron_mass <= 0:
            raise ParameterError("Masses must be positive")
        if self.hbar <= 0 or self.light_speed <= 0 or self.charge == 0 or self.length_unit <= 0:
            raise ParameterError("hbar, c, |e| and the length unit must be positive")

    @property
    def unit_system(self) -> UnitSystem:
        return get_unit_system(self.units)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class ModelParams:
    """Dimensionless parameters (variant, kappa, b, gamma)."""

    variant: Variant
    kappa: float
    b: float = 0.0
    gamma: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "variant", Variant.parse(self.variant))
        for name in ("kappa", "b", "gamma"):
            object.__setattr__(self, name, _require_finite(name, getattr(self, name)))

    @property
    def beta(self) -> float:
        return beta(self)

    def with_field(self, b: float) -> "ModelParams":
        return ModelParams(self.variant, self.kappa, b, self.gamma)

    def to_dict(self) -> Dict[str, Any]:
        return {"variant": self.variant.value, "kappa": self.kappa, "b": self.b, "gamma": self.gamma}


@dataclass(frozen=True)
class Point2:
    x: float
    y: float

    def __post_init__(self):
        object.__setattr__(self, "x", _require_finite("x", self.x))
        object.__setattr__(self, "y", _require_finite("y", self.y))

    def __sub__(self, other: "Point2") -> "Point2":
        return Point2(self.x - other.x, self.y - other.y)

    def __add__(self, other: "Point2") -> "Point2":
        return Point2(self.x + other.x, self.y + other.y)

    def wedge(self, other: "Point2") -> float:
        """r ^ r' = x y' - y x'."""
        return self.x * other.y - self.y * other.x

    def norm(self) -> float:
        return float(np.hypot(self.x, self.y))

    def as_tuple(self):
        return (self.x, self.y)


@dataclass(frozen=True)
class ComplexEnergy:
    z: complex = field(default=0j)

    def __post_init__(self):
        z = complex(self.z)
        if not (np.isfinite(z.real) and np.isfinite(z.imag)):
            raise ParameterError(f"Energy must be finite, got {self.z!r}")
        object.__setattr__(self, "z", z)

    @classmethod
    def parse(cls, text: str) -> "ComplexEnergy":
        return cls(parse_complex(text))

    def conjugate(self) -> "ComplexEnergy":
        return ComplexEnergy(self.z.conjugate())


def as_energy(z: Union[Number, ComplexEnergy]) -> complex:
    return z.z if isinstance(z, ComplexEnergy) else ComplexEnergy(z).z


def as_point(p: Union[Point2, tuple]) -> Point2:
    return p if isinstance(p, Point2) else Point2(*p)


# =============================================================================
# PARSING
# =============================================================================

_BARE_IMAGINARY = re.compile(r'(^|[+\-])j')


def parse_complex(text: str) -> complex:
    """Parse ``a+bi`` style text; spaces are ignored, ``i`` or ``j`` marks the imaginary unit."""
    cleaned = str(text).replace(" ", "").lower().replace("i", "j")
    cleaned = _BARE_IMAGINARY.sub(r'\g<1>1j', cleaned)
    if not cleaned:
        raise ParameterError("Empty complex number")
    try:
        return complex(cleaned)
    except ValueError:
        raise ParameterError(f"Cannot parse complex number {text!r}")


def parse_point(text: str) -> Point2:
    parts = str(text).replace(" ", "").split(",")
    if len(parts) != 2:
        raise ParameterError(f"Point must be 'x,y', got {text!r}")
    try:
        return Point2(float(parts[0]), float(parts[1]))
    except ValueError:
        raise ParameterError(f"Point must be 'x,y', got {text!r}")


# =============================================================================
# DERIVED QUANTITIES
# =============================================================================

def energy_scale(p: PhysicalParams) -> float:
    """Energy unit hbar^2 / (2 m* L^2); physical energy = z * energy_scale."""
    return p.hbar ** 2 / (2.0 * p.effective_mass * p.length_unit ** 2)


def dimensionless_from_physical(p: PhysicalParams, variant: Union[str, Variant]) -> ModelParams:
    variant = Variant.parse(variant)
    alpha = p.rashba_alpha if variant is Variant.RASHBA else p.dresselhaus_alpha
    kappa = p.effective_mass * alpha / p.hbar ** 2 * p.length_unit
    b = 2.0 * np.pi * p.field / p.unit_system.flux_quantum(p.hbar, p.charge, p.light_speed) * p.length_unit ** 2
    gamma = -(p.g_factor / 2.0) * (p.effective_mass / p.electron_mass)
    params = ModelParams(variant, kappa, b, gamma)
    logger.debug(f"Dimensionless parameters {params.to_dict()}, energy scale {energy_scale(p):.6e}")
    return params


def beta(params: ModelParams) -> float:
    """beta_R = (gamma+1) b / (2 kappa), beta_D = (gamma-1) b / (2 kappa); zero without field."""
    if params.b == 0.0:
        return 0.0
    if params.kappa == 0.0:
        raise DegenerateCaseError("beta is undefined for kappa = 0 with b != 0; the Hamiltonian decouples")
    shift = 1.0 if params.variant is Variant.RASHBA else -1.0
    return (params.gamma + shift) * params.b / (2.0 * params.kappa)


def principal_sqrt(w: complex, side: Optional[str] = None) -> complex:
    """Principal square root; on the cut ``side`` selects the boundary value."""
    w = complex(w)
    if w.imag == 0.0 and w.real <= 0.0:
        if side is None:
            raise BranchCutError(f"Argument {w} lies on the branch cut (-inf, 0]")
        if side not in ("upper", "lower"):
            raise ParameterError(f"side must be 'upper' or 'lower', got {side!r}")
        w = complex(w.real, 0.0 if side == "upper" else -0.0)
    return complex(np.sqrt(np.complex128(w)))


def eta(params: ModelParams, z: Union[Number, ComplexEnergy], side: Optional[str] = None) -> complex:
    """eta_J = sqrt(z + kappa^2 + beta^2)."""
    z = as_energy(z)
    return principal_sqrt(z + params.kappa ** 2 + beta(params) ** 2, side)


def zeta_pm(params: ModelParams, z: Union[Number, ComplexEnergy], sign: int, field_sign: int = 1,
            side: Optional[str] = None, eta_value: Optional[complex] = None) -> complex:
    """zeta^{sign}_J(field_sign * b).

    R: (eta + sign kappa)^2 + fb - beta^2;  D: (eta + sign kappa)^2 - fb - beta^2.
    """
    if sign not in (1, -1) or field_sign not in (1, -1):
        raise ParameterError("sign and field_sign must be +1 or -1")
    e = eta(params, z, side) if eta_value is None else eta_value
    bt = beta(params)
    fb = field_sign * params.b
    shift = fb if params.variant is Variant.RASHBA else -fb
    return (e + sign * params.kappa) ** 2 + shift - bt ** 2


# Written into every output file
CONVENTIONS: Dict[str, str] = {
    "hamiltonian": "H = K^2 + 2 kappa U_J + gamma b sigma_z, U_R = sigma_x K_y - sigma_y K_x, U_D = sigma_y K_y - sigma_x K_x",
    "gauge": "K = -i grad - a, a = (-b y/2, b x/2), K_x K_y - K_y K_x = i b",
    "magnetic_phase": "exp(-i b (x y' - y x') / 2)",
    "sqrt_branch": "principal, cut along (-inf, 0]",
    "log_branch": "principal, cut along (-inf, 0]",
    "energy_unit": "hbar^2 / (2 m* L^2)",
    "renormalization": "G_ren = lim [G(r, r') + (1/2pi) log|r - r'|]",
}
