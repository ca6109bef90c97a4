"""Independent oracles for the kernels, spectra and identities.

* dense-matrix checks of the resolvent identity and of the block-operator
  spectral map,
* the Landau eigenprojection sum for the magnetic scalar kernel,
* finite-difference residuals of (H - z) applied to kernel columns,
* the resolvent identity in the energy on a coarse quadrature grid,
* dense diagonalization in a truncated Landau-oscillator basis,
* coincidence-limit extrapolation and pole location.
"""

from dataclasses import asdict, dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np
from scipy import linalg, optimize

from .errors import AccuracyError, GeometryError, ParameterError, PoleError, PreconditionError, SpinGreenError
from .green import KernelRequest, SpinKernel, green0_landau, green_function
from .logger import get_logger
from .model import ComplexEnergy, ModelParams, Point2, Variant, as_energy, as_point, beta, principal_sqrt
from .renorm import green_ren
from .spectrum import LevelIndex, LevelTable, landau_index, merge_levels, spin_orbit_levels, susy_spectrum_map

logger = get_logger(__name__)

MAX_MATRIX_DIM = 64
CLIP_RELATIVE = 1e-13
FOCK_MERGE_TOLERANCE = 1e-9
COINCIDENCE_RADII = (1e-2, 1e-3, 1e-4)


@dataclass(frozen=True)
class MatrixOperator:
    """Dense finite-dimensional operator (rows, cols <= 64)."""

    matrix: np.ndarray
    self_adjoint: bool = False

    def __post_init__(self):
        m = np.atleast_2d(np.asarray(self.matrix, dtype=complex))
        if m.ndim != 2 or max(m.shape) > MAX_MATRIX_DIM:
            raise ParameterError(f"Matrix must be 2-D with dimensions <= {MAX_MATRIX_DIM}, got {m.shape}")
        if not np.isfinite(m).all():
            raise ParameterError("Matrix entries must be finite")
        if self.self_adjoint:
            if m.shape[0] != m.shape[1] or np.max(np.abs(m - m.conj().T), initial=0.0) >= 1e-12:
                raise ParameterError("Matrix claimed self-adjoint is not Hermitian to 1e-12")
        object.__setattr__(self, "matrix", m)

    @property
    def rows(self) -> int:
        return self.matrix.shape[0]

    @property
    def cols(self) -> int:
        return self.matrix.shape[1]

    @property
    def adjoint(self) -> np.ndarray:
        return self.matrix.conj().T


@dataclass(frozen=True)
class ResidualReport:
    residual_max: float
    tolerance: float
    passed: bool
    context: str
    details: Dict[str, Any] = field(default_factory=dict)

    @classmethod
    def make(cls, residual: float, tolerance: float, context: str, **details) -> "ResidualReport":
        residual = float(residual)
        return cls(residual, float(tolerance), bool(residual <= tolerance), context, details)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def _max_abs(m) -> float:
    return float(np.max(np.abs(m), initial=0.0))


def hausdorff_distance(a: Sequence[float], b: Sequence[float]) -> float:
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    if a.size == 0 or b.size == 0:
        return 0.0 if a.size == b.size else np.inf
    d = np.abs(a[:, None] - b[None, :])
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


# =============================================================================
# MATRIX IDENTITIES
# =============================================================================

def check_resolvent_identity(A: MatrixOperator, alpha: float, E: complex, tolerance: float = 1e-10) -> ResidualReport:
    """Dense check of R(A^2 + 2 alpha A; E) against its expression through R(A^2; (eta -+ alpha)^2)."""
    if not A.self_adjoint:
        raise ParameterError("check_resolvent_identity requires a self-adjoint operator")
    a = A.matrix
    n = A.rows
    eye = np.eye(n)
    E = complex(E)
    eigs = linalg.eigvalsh(a)
    scale = max(1.0, float(np.max(np.abs(eigs))) ** 2)
    if np.min(np.abs(eigs ** 2 + 2 * alpha * eigs - E)) < 1e-12 * scale:
        raise PreconditionError(f"E = {E} lies in the spectrum of A^2 + 2 alpha A")
    eta_value = principal_sqrt(E + alpha ** 2, side="upper")
    if eta_value == 0:
        raise PreconditionError("eta = 0")
    shifts = {sign: (eta_value + sign * alpha) ** 2 for sign in (-1, 1)}
    for sign, w in shifts.items():
        if np.min(np.abs(eigs ** 2 - w)) < 1e-12 * scale:
            raise PreconditionError(f"(eta {'+' if sign > 0 else '-'} alpha)^2 = {w} lies in the spectrum of A^2")

    a2 = a @ a
    lhs = linalg.inv(a2 + 2 * alpha * a - E * eye)
    r_minus = linalg.inv(a2 - shifts[-1] * eye)
    r_plus = linalg.inv(a2 - shifts[1] * eye)
    split = (a - alpha * eye) @ (r_minus - r_plus) / (2 * eta_value) + 0.5 * (r_minus + r_plus)
    factored = ((a + (eta_value - alpha) * eye) @ r_minus - (a - (eta_value + alpha) * eye) @ r_plus) / (2 * eta_value)
    norm = max(1.0, _max_abs(lhs))
    residual = max(_max_abs(lhs - split), _max_abs(lhs - factored)) / norm
    logger.debug(f"Resolvent identity n={n} alpha={alpha:.3f} E={E:.3f}: residual {residual:.2e}, "
                 f"cond {np.linalg.cond(a2 + 2 * alpha * a - E * eye):.2e}")
    return ResidualReport.make(residual, tolerance, f"resolvent n={n} alpha={alpha:.6g} E={E}")


def _clip_spectrum(values: np.ndarray, scale: float) -> np.ndarray:
    values = np.asarray(values, dtype=float).copy()
    values[values < CLIP_RELATIVE * scale] = 0.0
    return values


def check_susy_proposition(A: MatrixOperator, m: float, tolerance: float = 1e-10) -> ResidualReport:
    """Compare the spectrum of [[m, A*], [A, -m]] with the map applied to those of AA* and A*A."""
    if m < 0:
        raise ParameterError(f"m must be >= 0, got {m}")
    a = A.matrix
    rows, cols = a.shape
    L = np.block([[m * np.eye(cols), a.conj().T], [a, -m * np.eye(rows)]])
    spec_l = linalg.eigvalsh(L)
    a_astar = a @ a.conj().T
    astar_a = a.conj().T @ a
    scale = max(1.0, _max_abs(a) ** 2)
    spec_aa = _clip_spectrum(linalg.eigvalsh(a_astar), scale)
    spec_a_a = _clip_spectrum(linalg.eigvalsh(astar_a), scale)
    mapped = susy_spectrum_map(spec_aa, spec_a_a, m)
    distance = hausdorff_distance(spec_l, mapped)

    # L^2 = diag(A*A + m^2, AA* + m^2)
    block = np.block([[astar_a + m * m * np.eye(cols), np.zeros((cols, rows))],
                      [np.zeros((rows, cols)), a_astar + m * m * np.eye(rows)]])
    block_residual = _max_abs(L @ L - block)

    nonzero = hausdorff_distance(spec_aa[spec_aa > 0], spec_a_a[spec_a_a > 0])
    residual = max(distance, block_residual, nonzero)
    return ResidualReport.make(residual, tolerance, f"susy {rows}x{cols} m={m:g}",
                               hausdorff=distance, block_identity=block_residual, nonzero_spectra=nonzero)


# =============================================================================
# LANDAU EIGENPROJECTIONS
# =============================================================================

def laguerre_table(n_max: int, x):
    """L_0(x) .. L_{n_max}(x) by forward recurrence; x may be an array."""
    x = np.asarray(x, dtype=float)
    table = np.empty((n_max + 1,) + x.shape)
    table[0] = 1.0
    if n_max >= 1:
        table[1] = 1.0 - x
    for n in range(1, n_max):
        table[n + 1] = ((2 * n + 1 - x) * table[n] - n * table[n - 1]) / (n + 1)
    return table


def _projector_envelope(b: float, x_r, y_r, x_p, y_p):
    X, Y = x_r - x_p, y_r - y_p
    x = abs(b) * (X * X + Y * Y) / 2.0
    phase = np.exp(-1j * b * (x_r * y_p - y_r * x_p) / 2.0)
    return x, phase * np.exp(-x / 2.0)


def landau_projector(b: float, r, r_prime, n: int) -> complex:
    """Kernel of the projector onto the n-th Landau level, (|b|/2pi) P e^{-x/2} L_n(x)."""
    if b == 0.0:
        raise ParameterError("landau_projector requires b != 0")
    r, rp = as_point(r), as_point(r_prime)
    x, envelope = _projector_envelope(b, r.x, r.y, rp.x, rp.y)
    return complex(abs(b) / (2 * np.pi) * envelope * laguerre_table(n, x)[n])


def check_projector_orthonormality(b: float, r, r_prime, n_max: int = 4, half_width: Optional[float] = None,
                                   step: float = 0.1, tolerance: float = 1e-10) -> ResidualReport:
    """int P_n(r, s) P_m(s, r') ds = delta_nm P_n(r, r') by the trapezoid rule on a square grid."""
    r, rp = as_point(r), as_point(r_prime)
    absb = abs(b)
    half_width = half_width or (14.0 / np.sqrt(absb) + max(r.norm(), rp.norm()))
    axis = np.arange(-half_width, half_width + step / 2, step)
    sx, sy = np.meshgrid(axis, axis, indexing="ij")
    x1, env1 = _projector_envelope(b, r.x, r.y, sx, sy)
    x2, env2 = _projector_envelope(b, sx, sy, rp.x, rp.y)
    left = absb / (2 * np.pi) * env1 * laguerre_table(n_max, x1)
    right = absb / (2 * np.pi) * env2 * laguerre_table(n_max, x2)
    weights = np.full(axis.shape, step)
    weights[0] = weights[-1] = step / 2
    w2 = np.outer(weights, weights)
    residual = 0.0
    for n in range(n_max + 1):
        for m in range(n_max + 1):
            integral = np.sum(left[n] * right[m] * w2)
            expected = landau_projector(b, r, rp, n) if n == m else 0.0
            residual = max(residual, abs(integral - expected))
    return ResidualReport.make(residual, tolerance, f"projector orthonormality b={b:g} n_max={n_max}")


def spectral_sum_error_estimate(b: float, r, r_prime, n_max: int) -> float:
    """exp(-sqrt(x N)), the size of both the tail and the Abel bias."""
    r, rp = as_point(r), as_point(r_prime)
    x = abs(b) * (r - rp).norm() ** 2 / 2.0
    return float(np.exp(-np.sqrt(x * n_max)))


def spectral_sum_green0(b: float, r, r_prime, z, n_max: int, tolerance: Optional[float] = None) -> complex:
    """Landau kernel as an Abel-summed sum over eigenprojections.

    G0 = sum_n P_n / (|b|(2n+1) - z) = (1/4pi) P e^{-x/2} t^a sum_n L_n(x) t^n / (n + a),
    a = 1/2 - z/(2|b|), t = exp(-sqrt(x / n_max)).  The damped sum equals t^{-a} times the
    undamped one up to O(exp(-sqrt(x n_max))); see NUMERICS.md.
    """
    if b == 0.0:
        raise ParameterError("spectral_sum_green0 requires b != 0")
    if int(n_max) != n_max or n_max < 1:
        raise ParameterError(f"n_max must be an integer >= 1, got {n_max!r}")
    r, rp, z = as_point(r), as_point(r_prime), as_energy(z)
    absb = abs(b)
    n_near = max(0, int(round(landau_index(b, z).real)))
    if abs(z - absb * (2 * n_near + 1)) <= absb * 1e-3:
        raise PoleError(f"z = {z} is too close to the Landau level n = {n_near}", level=n_near)
    x, envelope = _projector_envelope(b, r.x, r.y, rp.x, rp.y)
    if x == 0.0:
        raise ParameterError("spectral sum diverges at r = r'")
    estimate = spectral_sum_error_estimate(b, r, rp, n_max)
    if tolerance is not None and estimate > tolerance:
        raise AccuracyError(f"n_max = {n_max} gives an estimated error {estimate:.2e} > {tolerance:.2e}",
                            achieved=estimate)
    a = 0.5 - z / (2.0 * absb)
    n = np.arange(n_max + 1)
    t = np.exp(-np.sqrt(x / n_max))
    terms = laguerre_table(n_max, x) * t ** n / (n + a)
    return complex(envelope * np.exp(-a * np.sqrt(x / n_max)) * np.sum(terms) / (4 * np.pi))


# =============================================================================
# FINITE DIFFERENCES
# =============================================================================

def _pi_fd(sign: int, b: float, r: Point2, value, dx, dy):
    return -1j * dx + sign * dy + (b * r.y / 2.0 - sign * 1j * b * r.x / 2.0) * value


def apply_hamiltonian_fd(params: ModelParams, kernel: Callable[[Point2], SpinKernel], z, r, h: float,
                         source=None, tolerance: float = np.inf) -> ResidualReport:
    """max |(H - z) G| over both columns at r by central differences.

    K^2 f = -Lap f - i b (y d_x - x d_y) f + (b^2/4)(x^2 + y^2) f.
    """
    if not 1e-4 <= h <= 1e-1:
        raise ParameterError(f"h must lie in [1e-4, 1e-1], got {h}")
    r, z = as_point(r), as_energy(z)
    if source is not None and (r - as_point(source)).norm() <= 10 * h:
        raise GeometryError(f"Stencil at {r.as_tuple()} with h={h} is within 10h of the singular point")
    b, kappa = params.b, params.kappa
    stencil = {
        (0, 0): kernel(r).as_matrix(),
        (1, 0): kernel(Point2(r.x + h, r.y)).as_matrix(),
        (-1, 0): kernel(Point2(r.x - h, r.y)).as_matrix(),
        (0, 1): kernel(Point2(r.x, r.y + h)).as_matrix(),
        (0, -1): kernel(Point2(r.x, r.y - h)).as_matrix(),
    }
    g = stencil[(0, 0)]
    dx = (stencil[(1, 0)] - stencil[(-1, 0)]) / (2 * h)
    dy = (stencil[(0, 1)] - stencil[(0, -1)]) / (2 * h)
    lap = (stencil[(1, 0)] + stencil[(-1, 0)] + stencil[(0, 1)] + stencil[(0, -1)] - 4 * g) / (h * h)
    k2 = -lap - 1j * b * (r.y * dx - r.x * dy) + (b * b / 4.0) * (r.x ** 2 + r.y ** 2) * g

    # rows: spin components; each column is one source spin
    up, down = 0, 1
    if params.variant is Variant.RASHBA:
        u_up = 1j * _pi_fd(-1, b, r, g[down], dx[down], dy[down])
        u_down = -1j * _pi_fd(1, b, r, g[up], dx[up], dy[up])
    else:
        u_up = -_pi_fd(1, b, r, g[down], dx[down], dy[down])
        u_down = -_pi_fd(-1, b, r, g[up], dx[up], dy[up])
    u = np.vstack([u_up, u_down])
    zeeman = params.gamma * b * np.array([[1.0], [-1.0]]) * g
    residual = _max_abs(k2 + 2 * kappa * u + zeeman - z * g)
    return ResidualReport.make(residual, tolerance, f"fd {params.variant.value} h={h:g} at {r.as_tuple()}", h=h)


def check_fd_order(params: ModelParams, kernel: Callable[[Point2], SpinKernel], z, r, h: float = 1e-2,
                   source=None, ratio_band: float = 0.4) -> ResidualReport:
    """Second-order decay of the residual: ratio at h and h/2 within 4 +- ratio_band."""
    coarse = apply_hamiltonian_fd(params, kernel, z, r, h, source)
    fine = apply_hamiltonian_fd(params, kernel, z, r, h / 2, source)
    ratio = coarse.residual_max / fine.residual_max if fine.residual_max > 0 else np.inf
    return ResidualReport.make(abs(ratio - 4.0), ratio_band, f"fd order {params.variant.value} b={params.b:g}",
                               ratio=ratio, residual_h=coarse.residual_max, residual_h2=fine.residual_max)


# =============================================================================
# RESOLVENT IDENTITY IN ENERGY
# =============================================================================

def check_energy_resolvent(params: ModelParams, r, r_prime, z1, z2, h: float = 0.25, half_width: float = 4.5,
                           tolerance: float = 0.05, path: str = "operator") -> ResidualReport:
    """G(z1) - G(z2) against (z1 - z2) int G(r, s; z1) G(s, r'; z2) ds on a coarse midpoint grid.

    r and r' are snapped to grid vertices and the nodes sit at cell centres, so
    the logarithmic singularities fall on cell corners and no node hits them.
    The residual is relative to max |G(z1) - G(z2)|; this is a smoke test.
    """
    if not 0 < h <= 1.0:
        raise ParameterError(f"h must lie in (0, 1], got {h}")
    if half_width < 4 * h:
        raise ParameterError(f"half_width must be at least 4 h, got {half_width}")
    z1, z2 = as_energy(z1), as_energy(z2)
    if z1 == z2:
        raise ParameterError("z1 and z2 must differ")

    def snap(p: Point2) -> Point2:
        return Point2(round(p.x / h) * h, round(p.y / h) * h)

    r, rp = snap(as_point(r)), snap(as_point(r_prime))
    if r == rp:
        raise GeometryError(f"r and r' coincide on the grid of spacing {h}")
    centre = snap(Point2((r.x + rp.x) / 2, (r.y + rp.y) / 2))
    count = int(np.ceil(half_width / h))
    offsets = (np.arange(-count, count) + 0.5) * h
    e1, e2 = ComplexEnergy(z1), ComplexEnergy(z2)

    integral = np.zeros((2, 2), dtype=complex)
    for dx in offsets:
        for dy in offsets:
            s = Point2(centre.x + dx, centre.y + dy)
            left = green_function(KernelRequest(params, r, s, e1), path).as_matrix()
            right = green_function(KernelRequest(params, s, rp, e2), path).as_matrix()
            integral += left @ right
    integral *= h * h

    lhs = (green_function(KernelRequest(params, r, rp, e1), path).as_matrix()
           - green_function(KernelRequest(params, r, rp, e2), path).as_matrix())
    residual = _max_abs(lhs - (z1 - z2) * integral) / max(_max_abs(lhs), 1e-300)
    return ResidualReport.make(residual, tolerance,
                               f"energy resolvent {params.variant.value} b={params.b:g} z1={z1:.3f} z2={z2:.3f}",
                               h=h, half_width=half_width, nodes=int(offsets.size ** 2))


# =============================================================================
# FOCK BASIS
# =============================================================================

def _fock_operators(params: ModelParams, basis_size: int):
    n = basis_size
    absb = abs(params.b)
    lower = np.diag(np.sqrt(np.arange(1, n)), k=1)  # annihilation a
    raise_ = lower.T
    scale = np.sqrt(2 * absb)
    if params.b > 0:
        pi_plus, pi_minus = scale * lower, scale * raise_
    else:
        pi_plus, pi_minus = scale * raise_, scale * lower
    k2 = np.diag(absb * (2 * np.arange(n) + 1)).astype(complex)
    zero = np.zeros((n, n), dtype=complex)
    if params.variant is Variant.RASHBA:
        u = np.block([[zero, 1j * pi_minus], [-1j * pi_plus, zero]])
    else:
        u = np.block([[zero, -pi_plus], [-pi_minus, zero]])
    sigma_z = np.block([[np.eye(n), zero], [zero, -np.eye(n)]])
    kinetic = np.block([[k2, zero], [zero, k2]])
    return kinetic, u, sigma_z


def fock_hamiltonian(params: ModelParams, basis_size: int) -> np.ndarray:
    """H = K^2 + 2 kappa U + gamma b sigma_z in the truncated Landau-oscillator basis."""
    if params.b == 0.0:
        raise ParameterError("The Landau-oscillator basis requires b != 0")
    kinetic, u, sigma_z = _fock_operators(params, basis_size)
    return kinetic + 2 * params.kappa * u + params.gamma * params.b * sigma_z


def _fock_spectrum(params: ModelParams, basis_size: int, count: int) -> np.ndarray:
    eigs = linalg.eigvalsh(fock_hamiltonian(params, basis_size))
    table = merge_levels(((float(e), LevelIndex(i), True, "fock") for i, e in enumerate(eigs)),
                         FOCK_MERGE_TOLERANCE)
    return table.energies()[:count]


def fock_basis_levels(params: ModelParams, basis_size: int, count: Optional[int] = None,
                      convergence_tol: float = 1e-8) -> LevelTable:
    """Lowest distinct eigenvalues, self-converged between basis_size and 2 basis_size."""
    if int(basis_size) != basis_size or basis_size < 16:
        raise ParameterError(f"basis_size must be an integer >= 16, got {basis_size!r}")
    count = count or basis_size // 4
    coarse = _fock_spectrum(params, basis_size, count)
    fine = _fock_spectrum(params, 2 * basis_size, count)
    delta = float(np.max(np.abs(coarse - fine[:len(coarse)]), initial=0.0))
    if delta > convergence_tol:
        raise AccuracyError(f"Fock-basis levels not converged: delta {delta:.2e}", achieved=delta)
    logger.debug(f"Fock basis {basis_size}/{2 * basis_size}: {count} levels converged to {delta:.1e}")
    return merge_levels(((float(e), LevelIndex(i), True, "fock") for i, e in enumerate(fine)), FOCK_MERGE_TOLERANCE)


def check_v2h_identity(params: ModelParams, basis_size: int = 32, tolerance: float = 1e-10) -> ResidualReport:
    """H = V^2 + 2 kappa V - beta^2 with V = U + beta sigma_z, away from the truncation edge."""
    _, u, sigma_z = _fock_operators(params, basis_size)
    bt = beta(params)
    v = u + bt * sigma_z
    h = fock_hamiltonian(params, basis_size)
    g = v @ v + 2 * params.kappa * v - bt ** 2 * np.eye(2 * basis_size)
    keep = np.r_[0:basis_size - 2, basis_size:2 * basis_size - 2]
    residual = _max_abs((g - h)[np.ix_(keep, keep)])
    return ResidualReport.make(residual, tolerance, f"V^2 identity {params.variant.value} b={params.b:g}")


# =============================================================================
# LIMITS AND POLES
# =============================================================================

def extrapolate_coincidence_limit(values: Callable[[float], complex], radii: Sequence[float] = COINCIDENCE_RADII) -> complex:
    """Limit L of f(rho) = L + A rho^2 log rho + B rho^2 + ... from three radii."""
    radii = np.asarray(radii, dtype=float)
    if radii.size != 3:
        raise ParameterError("Extrapolation needs exactly three radii")
    design = np.column_stack([np.ones(3), radii ** 2 * np.log(radii), radii ** 2]).astype(complex)
    samples = np.array([values(float(rho)) for rho in radii], dtype=complex)
    return complex(np.linalg.solve(design, samples)[0])


def kernel_coincidence_limit(params: ModelParams, z, base=(0.3, -0.2), radii: Sequence[float] = COINCIDENCE_RADII,
                             entry: str = "g11", path: str = "operator") -> complex:
    """Extrapolated lim [G_entry(r, r'; z) + (1/2pi) log|r - r'|] along the ray through the base point."""
    base = as_point(base)
    direction = np.array(base.as_tuple()) / base.norm() if base.norm() > 0 else np.array([1.0, 0.0])
    energy = ComplexEnergy(as_energy(z))
    diagonal = entry in ("g11", "g22")

    def sample(rho: float) -> complex:
        r = Point2(base.x + rho * direction[0], base.y + rho * direction[1])
        kernel = green_function(KernelRequest(params, r, base, energy), path)
        value = getattr(kernel, entry)
        return value + np.log(rho) / (2 * np.pi) if diagonal else value

    return extrapolate_coincidence_limit(sample, radii)


def locate_pole(params: ModelParams, guess: float, width: float = 0.02, r=(0.3, 0.1), r_prime=(0.0, 0.0),
                xatol: float = 1e-10) -> float:
    """Real energy near ``guess`` minimizing 1/max(|g11|, |g22|)."""
    r, rp = as_point(r), as_point(r_prime)

    def inverse_size(energy: float) -> float:
        try:
            kernel = green_function(KernelRequest(params, r, rp, ComplexEnergy(energy)))
        except PoleError:
            return 0.0
        return 1.0 / max(abs(kernel.g11), abs(kernel.g22))

    result = optimize.minimize_scalar(inverse_size, bounds=(guess - width, guess + width), method="bounded",
                                      options={"xatol": xatol})
    return float(result.x)


# =============================================================================
# SUITES
# =============================================================================

def _random_hermitian(rng, n):
    m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return (m + m.conj().T) / 2


def _suite_resolvent(rng, trials):
    reports = []
    for _ in range(trials):
        n = int(rng.integers(1, 9))
        A = MatrixOperator(_random_hermitian(rng, n), self_adjoint=True)
        E = complex(rng.uniform(-3, 3), rng.uniform(0.1, 2.0))
        try:
            reports.append(check_resolvent_identity(A, float(rng.uniform(-2, 2)), E))
        except PreconditionError as e:
            logger.info(f"Skipping resolvent trial: {e}")
    return reports


def _suite_susy(rng, trials):
    reports = []
    masses = (0.0, 0.3, 1.0)
    for i in range(trials):
        rows, cols = int(rng.integers(1, 9)), int(rng.integers(1, 6))
        a = rng.normal(size=(rows, cols)) + 1j * rng.normal(size=(rows, cols))
        reports.append(check_susy_proposition(MatrixOperator(a), masses[i % 3]))
    return reports


def _random_offset(rng, low, high):
    radius, angle = rng.uniform(low, high), rng.uniform(0, 2 * np.pi)
    return Point2(radius * np.cos(angle), radius * np.sin(angle))


def _suite_fd(rng, trials):
    reports = []
    for variant in Variant:
        for _ in range(trials):
            params = ModelParams(variant, float(rng.uniform(0.2, 1.0)), 0.0, 0.0)
            z = complex(rng.uniform(-3, -1), rng.uniform(0.3, 1.0))
            source = Point2(0.0, 0.0)
            r = _random_offset(rng, 0.6, 1.2)
            kernel = lambda p, params=params, z=z: green_function(KernelRequest(params, p, source, z))
            reports.append(check_fd_order(params, kernel, z, r, source=source))
    return reports


def _suite_landau(rng, trials, n_max=2000, tolerance=1e-6):
    reports = []
    for b in (0.5, -0.5, 1.0, -1.0, 2.0):
        for _ in range(trials):
            rp = Point2(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5))
            radius = np.sqrt(2 * rng.uniform(0.25, 1.0) / abs(b))
            angle = rng.uniform(0, 2 * np.pi)
            r = Point2(rp.x + radius * np.cos(angle), rp.y + radius * np.sin(angle))
            z = complex(rng.uniform(-2, 3), rng.uniform(0.5, 1.5))
            closed = green0_landau(b, r, rp, z)
            oracle = spectral_sum_green0(b, r, rp, z, n_max)
            reports.append(ResidualReport.make(abs(closed - oracle), tolerance, f"landau sum b={b:g} z={z:.3f}"))
    return reports


LEVEL_CASES = (
    (Variant.RASHBA, 1.0, 1.0, 0.0),
    (Variant.DRESSELHAUS, 1.0, 1.0, 0.0),
    (Variant.RASHBA, 0.5, 1.0, 1.0),
    (Variant.DRESSELHAUS, 0.5, 1.0, 1.0),
)


def _suite_levels(rng, trials, count=6):
    reports = []
    for variant, kappa, b, gamma in LEVEL_CASES:
        params = ModelParams(variant, kappa, b, gamma)
        closed = spin_orbit_levels(params, 20).lowest(count)
        fock = fock_basis_levels(params, 64).lowest(count)
        reports.append(ResidualReport.make(float(np.max(np.abs(closed - fock))), 1e-8,
                                           f"levels vs Fock basis {variant.value} kappa={kappa:g} gamma={gamma:g}"))
        located = np.array([locate_pole(params, level) for level in closed])
        reports.append(ResidualReport.make(float(np.max(np.abs(located - closed))), 1e-6,
                                           f"pole scan {variant.value} kappa={kappa:g} gamma={gamma:g}"))
    return reports


def _random_magnetic_params(rng, variant):
    return ModelParams(variant, float(rng.uniform(0.3, 1.2)), float(rng.choice([-1, 1]) * rng.uniform(0.5, 1.5)),
                       float(rng.uniform(-1, 1)))


def _suite_paths(rng, trials, tolerance=1e-9):
    reports = []
    for variant in Variant:
        for _ in range(trials):
            params = _random_magnetic_params(rng, variant)
            rp = Point2(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5))
            r = rp + _random_offset(rng, 0.3, 1.5)
            z = complex(rng.uniform(-2, 3), rng.uniform(0.3, 1.5))
            req = KernelRequest(params, r, rp, z)
            diff = green_function(req, "operator").max_abs_diff(green_function(req, "entrywise"))
            reports.append(ResidualReport.make(diff, tolerance, f"paths {variant.value} b={params.b:.3f} z={z:.3f}"))
    return reports


def _suite_renorm(rng, trials, tolerance=1e-5):
    reports = []
    for _ in range(trials):
        variant = Variant.RASHBA if rng.uniform() < 0.5 else Variant.DRESSELHAUS
        for params in (ModelParams(variant, float(rng.uniform(0.2, 1.0))), _random_magnetic_params(rng, variant)):
            z = complex(rng.uniform(-2, 2), rng.uniform(0.5, 1.5))
            expected = green_ren(params, z)
            up = kernel_coincidence_limit(params, z, entry="g11")
            down = kernel_coincidence_limit(params, z, entry="g22")
            diff = max(abs(up - expected.diag_up), abs(down - expected.diag_down))
            reports.append(ResidualReport.make(diff, tolerance, f"renorm {variant.value} b={params.b:.3f} z={z:.3f}"))
    return reports


def _suite_symmetry(rng, trials, tolerance=1e-12):
    reports = []
    for i in range(trials):
        variant = Variant.RASHBA if i % 2 == 0 else Variant.DRESSELHAUS
        params = (_random_magnetic_params(rng, variant) if i % 4 >= 2
                  else ModelParams(variant, float(rng.uniform(0.2, 1.0))))
        rp = Point2(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5))
        r = rp + _random_offset(rng, 0.3, 1.5)
        z = complex(rng.uniform(-2, 3), rng.uniform(0.3, 1.5))
        forward = green_function(KernelRequest(params, r, rp, z))
        mirrored = green_function(KernelRequest(params, rp, r, z.conjugate())).adjoint()
        scale = max(1.0, _max_abs(forward.as_matrix()))
        reports.append(ResidualReport.make(forward.max_abs_diff(mirrored) / scale, tolerance,
                                           f"symmetry {variant.value} b={params.b:.3f}"))
    return reports


def _suite_energy(rng, trials):
    reports = []
    for i in range(trials):
        variant = Variant.RASHBA if i % 2 == 0 else Variant.DRESSELHAUS
        if i % 4 < 2:
            params = ModelParams(variant, float(rng.uniform(0.2, 0.8)))
        else:
            # |b| = 2 and |beta| < 2 keep the magnetic kernels negligible past the grid edge
            params = ModelParams(variant, float(rng.uniform(0.8, 1.2)), float(rng.choice([-2.0, 2.0])),
                                 float(rng.uniform(-0.5, 0.5)))
        rp = Point2(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5))
        r = rp + _random_offset(rng, 0.6, 1.2)
        z1 = complex(rng.uniform(-3, -2), rng.uniform(0.5, 1.5))
        z2 = complex(rng.uniform(-3, -2), -rng.uniform(0.5, 1.5))
        reports.append(check_energy_resolvent(params, r, rp, z1, z2))
    return reports


SUITES: Dict[str, Callable] = {
    "resolvent": _suite_resolvent,
    "susy": _suite_susy,
    "fd": _suite_fd,
    "landau": _suite_landau,
    "levels": _suite_levels,
    "paths": _suite_paths,
    "renorm": _suite_renorm,
    "symmetry": _suite_symmetry,
    "energy": _suite_energy,
}


def run_suite(name: str, trials: int = 10, seed: int = 0) -> List[ResidualReport]:
    """Run a named verification suite (or ``all``) with a seeded generator."""
    if name != "all" and name not in SUITES:
        raise ParameterError(f"Unknown suite {name!r}; expected one of {sorted(SUITES) + ['all']}")
    if int(trials) != trials or trials < 1:
        raise ParameterError(f"trials must be a positive integer, got {trials!r}")
    names = sorted(SUITES) if name == "all" else [name]
    reports = []
    for suite in names:
        rng = np.random.default_rng(seed)
        logger.info(f"Running verification suite '{suite}' with {trials} trials")
        try:
            reports.extend(SUITES[suite](rng, int(trials)))
        except SpinGreenError as e:
            logger.error(f"Suite '{suite}' aborted: {e}")
            raise
    failed = sum(not r.passed for r in reports)
    logger.info(f"Verification finished: {len(reports) - failed}/{len(reports)} passed")
    return reports
