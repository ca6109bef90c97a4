"""Closed-form spectra of the free, Landau and spin-orbit Hamiltonians."""

from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from .errors import DegenerateCaseError, ParameterError, WrongCaseError
from .logger import get_logger
from .model import ModelParams, Variant, as_energy, beta, principal_sqrt

logger = get_logger(__name__)

MERGE_TOLERANCE = 1e-12


@dataclass(frozen=True, order=True)
class LevelIndex:
    n: int
    s: int = 1
    branch: int = 1

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 0:
            raise ParameterError(f"n must be a non-negative integer, got {self.n!r}")
        if self.s not in (-1, 1) or self.branch not in (-1, 1):
            raise ParameterError("s and branch must be +1 or -1")


@dataclass(frozen=True)
class LevelEntry:
    energy: float
    indices: Tuple[LevelIndex, ...]
    note: str = ""
    admissible: bool = True


@dataclass(frozen=True)
class LevelTable:
    """Sorted energies with every (n, s, branch) that produces them."""

    entries: Tuple[LevelEntry, ...] = field(default_factory=tuple)

    def energies(self, admissible_only: bool = True) -> np.ndarray:
        return np.array([e.energy for e in self.entries if e.admissible or not admissible_only])

    def lowest(self, count: int, admissible_only: bool = True) -> np.ndarray:
        return self.energies(admissible_only)[:count]

    def __len__(self):
        return len(self.entries)

    def to_frame(self) -> pd.DataFrame:
        """One row per contributing index; columns energy, n, s, branch, admissible, note."""
        rows = []
        for entry in self.entries:
            for index in entry.indices:
                rows.append({
                    "energy": entry.energy,
                    "n": index.n,
                    "s": index.s,
                    "branch": index.branch,
                    "admissible": entry.admissible,
                    "note": entry.note,
                })
        return pd.DataFrame(rows, columns=["energy", "n", "s", "branch", "admissible", "note"])


@dataclass(frozen=True)
class HalfLine:
    """Purely continuous spectrum [threshold, +inf)."""

    threshold: float
    purely_continuous: bool = True


def merge_levels(raw: Iterable[Tuple[float, LevelIndex, bool, str]], tol: float = MERGE_TOLERANCE) -> LevelTable:
    """Sort and merge numerically equal energies, keeping every index."""
    items = sorted(raw, key=lambda item: (item[0], item[1]))
    merged: List[LevelEntry] = []
    for energy, index, admissible, note in items:
        if merged and abs(energy - merged[-1].energy) <= tol * max(1.0, abs(energy)):
            last = merged[-1]
            notes = last.note if note in last.note.split(";") else ";".join(filter(None, [last.note, note]))
            merged[-1] = LevelEntry(last.energy, last.indices + (index,), notes, last.admissible or admissible)
        else:
            merged.append(LevelEntry(float(energy), (index,), note, admissible))
    return LevelTable(tuple(merged))


def _check_n_max(n_max: int) -> int:
    if int(n_max) != n_max or n_max < 0:
        raise ParameterError(f"n_max must be a non-negative integer, got {n_max!r}")
    return int(n_max)


def _sign(value: float) -> float:
    return -1.0 if value < 0 else 1.0


# =============================================================================
# SPECTRA
# =============================================================================

def free_spectrum(params: ModelParams) -> HalfLine:
    if params.b != 0.0:
        raise WrongCaseError("free_spectrum requires b = 0; use spin_orbit_levels")
    return HalfLine(threshold=-params.kappa ** 2)


def landau_levels(b: float, n_max: int) -> LevelTable:
    """|b| (2n + 1), n = 0..n_max."""
    if b == 0.0:
        raise WrongCaseError("Landau levels require b != 0")
    n_max = _check_n_max(n_max)
    return merge_levels((abs(b) * (2 * n + 1), LevelIndex(n), True, "landau") for n in range(n_max + 1))


def zeeman_levels(params: ModelParams, n_max: int) -> LevelTable:
    """Levels of the decoupled Hamiltonian H0 + gamma b sigma_z (kappa = 0)."""
    if params.b == 0.0:
        raise WrongCaseError("Zeeman levels require b != 0")
    n_max = _check_n_max(n_max)
    raw = []
    for n in range(n_max + 1):
        for s in (1, -1):
            energy = abs(params.b) * (2 * n + 1) + s * params.gamma * params.b
            raw.append((energy, LevelIndex(n, s, 1), True, "zeeman"))
    return merge_levels(raw)


def level_argument(params: ModelParams, n: int, s: int) -> int:
    """2n + 1 - s sign(b) for Rashba, 2n + 1 + s sign(b) for Dresselhaus."""
    sign_b = int(_sign(params.b))
    if params.variant is Variant.RASHBA:
        return 2 * n + 1 - s * sign_b
    return 2 * n + 1 + s * sign_b


def zero_mode_value(params: ModelParams) -> float:
    """The eigenvalue of V = U + beta sigma_z carried by the zero modes."""
    bt = beta(params)
    sign_b = _sign(params.b)
    return bt * sign_b if params.variant is Variant.RASHBA else -bt * sign_b


def spin_orbit_levels(params: ModelParams, n_max: int, tol: float = MERGE_TOLERANCE) -> LevelTable:
    """eps^{+-}(n, s) = |b| k +- 2 kappa sqrt(beta^2 + |b| k) for n <= n_max.

    At k = 0 only one root of the squared equation is an eigenvalue; the other
    one is kept with ``admissible=False``.
    """
    if params.b == 0.0:
        raise WrongCaseError("spin_orbit_levels requires b != 0; use free_spectrum")
    if params.kappa == 0.0:
        raise DegenerateCaseError("kappa = 0: levels are Landau levels shifted by +-gamma b (use zeeman_levels)")
    n_max = _check_n_max(n_max)
    bt = beta(params)
    v0 = zero_mode_value(params)
    raw = []
    for n in range(n_max + 1):
        for s in (1, -1):
            k = level_argument(params, n, s)
            arg = abs(params.b) * k
            root = np.sqrt(bt ** 2 + arg)
            for branch in (1, -1):
                energy = arg + branch * 2.0 * params.kappa * root
                admissible = True
                note = params.variant.value
                if k == 0 and not np.isclose(branch * root, v0, rtol=0.0, atol=1e-14 * max(1.0, abs(bt))):
                    admissible = False
                    note = "spurious"
                    logger.warning(f"Spurious root {energy:.15g} at (n={n}, s={s}, branch={branch}) "
                                   f"is not an eigenvalue; kept with admissible=False")
                raw.append((float(energy), LevelIndex(n, s, branch), admissible, note))
    return merge_levels(raw, tol)


def level_map_g(params: ModelParams, x):
    """g(x) = x^2 + 2 kappa x - beta^2, mapping eigenvalues of V onto those of H."""
    return x * x + 2.0 * params.kappa * x - beta(params) ** 2


def susy_spectrum_map(spec_AAstar: Sequence[float], spec_AstarA: Sequence[float], m: float) -> np.ndarray:
    """-sqrt(eig(AA*) + m^2) united with +sqrt(eig(A*A) + m^2), sorted and unique."""
    if m < 0:
        raise ParameterError(f"m must be >= 0, got {m}")
    lower = np.asarray(list(spec_AAstar), dtype=float)
    upper = np.asarray(list(spec_AstarA), dtype=float)
    if (lower < 0).any() or (upper < 0).any():
        raise ParameterError("Spectra of AA* and A*A must be non-negative")
    values = np.concatenate([-np.sqrt(lower + m * m), np.sqrt(upper + m * m)])
    return np.unique(values)


def v_spectrum(params: ModelParams, n_max: int) -> np.ndarray:
    """Spectrum of V = U + beta sigma_z from the block structure of V.

    V = sign(beta) [[|beta|, A*], [A, -|beta|]] up to a unitary, with
    A*A = K^2 - b (Rashba) or K^2 + b (Dresselhaus).
    """
    if params.b == 0.0:
        raise WrongCaseError("v_spectrum requires b != 0")
    n_max = _check_n_max(n_max)
    bt = beta(params)
    landau = np.array([abs(params.b) * (2 * n + 1) for n in range(n_max + 1)])
    minus = landau - params.b
    plus = landau + params.b
    astar_a, a_astar = (minus, plus) if params.variant is Variant.RASHBA else (plus, minus)
    return _sign(bt) * susy_spectrum_map(a_astar, astar_a, abs(bt))


def spin_orbit_levels_susy(params: ModelParams, n_max: int) -> np.ndarray:
    """Admissible levels as g applied to the eigenvalues of V; agrees with spin_orbit_levels as a set."""
    if params.kappa == 0.0:
        raise DegenerateCaseError("kappa = 0: use zeeman_levels")
    n_max = _check_n_max(n_max)
    bt = beta(params)
    k_max = 2 * n_max + 2
    values = v_spectrum(params, n_max + 1)
    values = values[values ** 2 - bt ** 2 <= abs(params.b) * k_max * (1 + 1e-12) + 1e-12]
    return np.unique(np.round(level_map_g(params, values), 12))


# =============================================================================
# DISTANCE TO THE SPECTRUM
# =============================================================================

def landau_index(b: float, w: complex) -> complex:
    """(w / |b| - 1) / 2, an integer exactly at Landau levels."""
    return (complex(w) / abs(b) - 1.0) / 2.0


def nearest_landau(b: float, w: complex) -> Tuple[float, int]:
    """Distance from w to the nearest Landau level and that level's index."""
    n = max(0, int(round(landau_index(b, w).real)))
    return abs(complex(w) - abs(b) * (2 * n + 1)), n


def nearest_level(params: ModelParams, z) -> Tuple[float, Optional[float]]:
    """(distance, energy) of the spectral point nearest to z.

    Constant cost: the candidate levels are read off the roots v = -kappa +- eta
    of g(v) = z.
    """
    z = as_energy(z)
    if params.b == 0.0:
        threshold = -params.kappa ** 2
        if z.real >= threshold:
            return abs(z.imag), z.real
        return abs(z - threshold), threshold

    absb = abs(params.b)
    if params.kappa == 0.0:
        best = (np.inf, None)
        for s in (1, -1):
            shifted = z - s * params.gamma * params.b
            distance, n = nearest_landau(params.b, shifted)
            if distance < best[0]:
                best = (distance, absb * (2 * n + 1) + s * params.gamma * params.b)
        return best

    bt = beta(params)
    v0 = zero_mode_value(params)
    e = principal_sqrt(z + params.kappa ** 2 + bt ** 2, side="upper")
    best = (abs(z - 2.0 * params.kappa * v0), 2.0 * params.kappa * v0)
    for v in (-params.kappa + e, -params.kappa - e):
        centre = int(round(((v * v - bt ** 2) / (2.0 * absb)).real))
        for j in range(max(1, centre - 2), max(1, centre + 3)):
            root = np.sqrt(bt ** 2 + 2.0 * absb * j)
            for branch in (1, -1):
                energy = 2.0 * absb * j + branch * 2.0 * params.kappa * root
                distance = abs(z - energy)
                if distance < best[0]:
                    best = (distance, float(energy))
    return best
