"""Complex special functions used by the Green-function kernels.

Gamma, digamma, Pochhammer, the McDonald functions K0 and K1, Kummer's Phi and
Tricomi's Psi with second parameter 1 or 2.  All functions take and return
Python complex numbers; domain violations raise ``DomainError`` subclasses and
truncation failures raise ``AccuracyError``.
"""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy import integrate

from .errors import AccuracyError, BranchCutError, DomainError, ParameterError, PoleError
from .logger import get_logger

logger = get_logger(__name__)

EULER_GAMMA = float(np.euler_gamma)
LOG_SQRT_2PI = 0.5 * float(np.log(2.0 * np.pi))

# Lanczos approximation, g = 7, n = 9
_LANCZOS_G = 7.0
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)

# Regime boundaries
BESSEL_SERIES_RADIUS = 2.0
BESSEL_ASYMPTOTIC_RADIUS = 30.0
TRICOMI_SERIES_LIMIT = 6.0
# Tolerated ratio between the largest series term and the sum before
# switching to the integral representation
TRICOMI_MAX_CANCELLATION = 1e2


@dataclass(frozen=True)
class SeriesControl:
    """Truncation control for every series in this module."""

    rel_tol: float = 1e-14
    max_terms: int = 10000

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise ParameterError(f"rel_tol must be positive, got {self.rel_tol}")
        if int(self.max_terms) < 1:
            raise ParameterError(f"max_terms must be >= 1, got {self.max_terms}")


DEFAULT_CONTROL = SeriesControl()


def _is_nonpositive_integer(a: complex) -> bool:
    return a.imag == 0.0 and a.real <= 0.0 and a.real == np.floor(a.real)


# =============================================================================
# GAMMA FAMILY
# =============================================================================

def _lanczos_log_gamma(a: complex) -> complex:
    # valid for Re(a) >= 0.5
    z = a - 1.0
    x = _LANCZOS[0]
    for i in range(1, len(_LANCZOS)):
        x += _LANCZOS[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return LOG_SQRT_2PI + (z + 0.5) * np.log(t) - t + np.log(x)


def log_gamma(a: complex) -> complex:
    """A logarithm of Gamma(a).

    For Re(a) >= 0.5 this is the principal log-gamma; to the left of that line
    the reflection formula is used and the imaginary part is only defined
    modulo 2 pi.
    """
    a = complex(a)
    if _is_nonpositive_integer(a):
        raise PoleError(f"Gamma has a pole at {a.real:g}", location=a)
    if a.real >= 0.5:
        return complex(_lanczos_log_gamma(a))
    return complex(np.log(np.pi) - np.log(np.sin(np.pi * a)) - log_gamma(1.0 - a))


def gamma_fn(a: complex) -> complex:
    """Gamma function; raises PoleError at non-positive integers."""
    a = complex(a)
    if _is_nonpositive_integer(a):
        raise PoleError(f"Gamma has a pole at {a.real:g}", location=a)
    if a.real >= 0.5:
        return complex(np.exp(_lanczos_log_gamma(a)))
    return complex(np.pi / (np.sin(np.pi * a) * gamma_fn(1.0 - a)))


def rgamma(a: complex) -> complex:
    """1/Gamma(a), an entire function (zero at the poles of Gamma)."""
    a = complex(a)
    if _is_nonpositive_integer(a):
        return 0j
    if a.real >= 0.5:
        return complex(np.exp(-_lanczos_log_gamma(a)))
    return complex(np.sin(np.pi * a) * gamma_fn(1.0 - a) / np.pi)


def digamma(a: complex) -> complex:
    """Logarithmic derivative of Gamma."""
    a = complex(a)
    if _is_nonpositive_integer(a):
        raise PoleError(f"digamma has a pole at {a.real:g}", location=a)
    if a.real < 0.5:
        return digamma(1.0 - a) - complex(np.pi / np.tan(np.pi * a))

    result = 0j
    while abs(a) < 10.0:
        result -= 1.0 / a
        a += 1.0
    inv2 = 1.0 / (a * a)
    tail = inv2 * (1.0 / 12 - inv2 * (1.0 / 120 - inv2 * (1.0 / 252 - inv2 * (
        1.0 / 240 - inv2 * (1.0 / 132 - inv2 * (691.0 / 32760 - inv2 / 12))))))
    return complex(result + np.log(a) - 0.5 / a - tail)


def pochhammer(a: complex, r: int) -> complex:
    """Rising factorial (a)_r = a (a+1) ... (a+r-1)."""
    if int(r) != r or r < 0:
        raise ParameterError(f"Pochhammer index must be a non-negative integer, got {r!r}")
    a = complex(a)
    result = 1.0 + 0j
    for k in range(int(r)):
        result *= a + k
    return result


# =============================================================================
# MCDONALD FUNCTIONS K0, K1
# =============================================================================

def _bessel_series(w: complex, ctl: SeriesControl) -> Tuple[complex, complex]:
    q = w * w / 4.0
    log_half = np.log(w / 2.0)
    psi_m1 = -EULER_GAMMA            # psi(m+1)
    psi_m2 = 1.0 - EULER_GAMMA       # psi(m+2)
    t0 = 1.0 + 0j                    # q^m / (m!)^2
    t1 = 1.0 + 0j                    # q^m / (m! (m+1)!)
    i1 = 0j
    k0 = 0j
    k1_sum = 0j
    for m in range(ctl.max_terms):
        k0 += t0 * (psi_m1 - log_half)
        i1 += t1
        k1_sum += t1 * (psi_m1 + psi_m2)
        if abs(t0) * (1.0 + abs(log_half)) <= ctl.rel_tol * abs(k0) * 0.5 and abs(t1) <= ctl.rel_tol * abs(i1):
            break
        t0 *= q / ((m + 1) * (m + 1))
        t1 *= q / ((m + 1) * (m + 2))
        psi_m1 += 1.0 / (m + 1)
        psi_m2 += 1.0 / (m + 2)
    else:
        raise AccuracyError("K0/K1 ascending series did not converge", achieved=abs(t0))
    k1 = 1.0 / w + log_half * (w / 2.0) * i1 - (w / 4.0) * k1_sum
    return complex(k0), complex(k1)


def _bessel_steed(w: complex, ctl: SeriesControl) -> Tuple[complex, complex]:
    # Steed's continued fraction CF2 for order zero (Temme's normalization)
    b = 2.0 * (1.0 + w)
    d = 1.0 / b
    h = delh = d
    q1, q2 = 0j, 1.0 + 0j
    a1 = 0.25
    q = c = a1
    a = -a1
    s = 1.0 + q * delh
    for i in range(2, ctl.max_terms):
        a -= 2 * (i - 1)
        c = -a * c / i
        qnew = (q1 - b * q2) / a
        q1, q2 = q2, qnew
        q += c * qnew
        b += 2.0
        d = 1.0 / (b + a * d)
        delh = (b * d - 1.0) * delh
        h += delh
        dels = q * delh
        s += dels
        if abs(dels) < ctl.rel_tol * abs(s) * 0.1:
            break
    else:
        raise AccuracyError("K0/K1 continued fraction did not converge", achieved=abs(dels / s))
    h = a1 * h
    k0 = np.sqrt(np.pi / (2.0 * w)) * np.exp(-w) / s
    k1 = k0 * (w + 0.5 - h) / w
    return complex(k0), complex(k1)


def _bessel_asymptotic(w: complex, ctl: SeriesControl) -> Tuple[complex, complex]:
    prefactor = np.sqrt(np.pi / (2.0 * w)) * np.exp(-w)
    sums = []
    for nu4 in (0.0, 4.0):  # 4 nu^2
        term = 1.0 + 0j
        total = term
        for k in range(1, ctl.max_terms):
            new = term * (nu4 - (2 * k - 1) ** 2) / (8.0 * k * w)
            if abs(new) > abs(term):
                break
            term = new
            total += term
            if abs(term) <= ctl.rel_tol * abs(total):
                break
        sums.append(total)
    return complex(prefactor * sums[0]), complex(prefactor * sums[1])


def bessel_k01(w: complex, ctl: SeriesControl = DEFAULT_CONTROL) -> Tuple[complex, complex]:
    """(K0(w), K1(w)) for w off the closed negative real axis."""
    w = complex(w)
    if w == 0:
        raise PoleError("K0 and K1 are singular at w = 0", location=w)
    if w.imag == 0.0 and w.real < 0.0:
        raise BranchCutError(f"Bessel argument {w} lies on the branch cut")
    # Evaluate in the closed upper half plane, reflect otherwise
    flip = w.imag < 0.0
    u = w.conjugate() if flip else w
    radius = abs(u)
    if radius <= BESSEL_SERIES_RADIUS:
        k0, k1 = _bessel_series(u, ctl)
    elif radius <= BESSEL_ASYMPTOTIC_RADIUS:
        k0, k1 = _bessel_steed(u, ctl)
    else:
        k0, k1 = _bessel_asymptotic(u, ctl)
    if flip:
        return k0.conjugate(), k1.conjugate()
    return k0, k1


def bessel_k0(w: complex, ctl: SeriesControl = DEFAULT_CONTROL) -> complex:
    """McDonald function K0."""
    return bessel_k01(w, ctl)[0]


def bessel_k1(w: complex, ctl: SeriesControl = DEFAULT_CONTROL) -> complex:
    """McDonald function K1 = -K0'."""
    return bessel_k01(w, ctl)[1]


# =============================================================================
# CONFLUENT HYPERGEOMETRIC FUNCTIONS
# =============================================================================

def _check_c(c: int) -> int:
    if c not in (1, 2):
        raise ParameterError(f"Second parameter must be 1 or 2, got {c!r}")
    return int(c)


def _check_x(x: float) -> float:
    x = float(x)
    if not x > 0.0 or not np.isfinite(x):
        raise DomainError(f"Psi requires finite x > 0, got {x!r}")
    return x


def kummer_phi(a: complex, c: int, x: float, ctl: SeriesControl = DEFAULT_CONTROL) -> complex:
    """Kummer's Phi(a, c, x) = sum (a)_r / ((c)_r r!) x^r."""
    if int(c) != c or c < 1:
        raise ParameterError(f"c must be a positive integer, got {c!r}")
    x = float(x)
    if x < 0.0:
        raise ParameterError(f"x must be >= 0, got {x!r}")
    a = complex(a)
    term = 1.0 + 0j
    total = term
    for r in range(ctl.max_terms):
        term *= (a + r) * x / ((c + r) * (r + 1))
        total += term
        if term == 0:
            return total
        bound = (abs(a) + r + 1) * x / ((r + 2) * (r + 1 + c))
        if bound < 0.5 and abs(term) * 2 <= ctl.rel_tol * abs(total):
            return total
    raise AccuracyError(f"Phi({a}, {c}, {x}) series exceeded {ctl.max_terms} terms",
                        achieved=abs(term) / max(abs(total), 1e-300))


def _log_series(a: complex, n: int, x: float, ctl: SeriesControl, scaled: bool) -> Tuple[complex, float]:
    """Logarithmic expansion of Psi(a, n+1, x) (or Gamma(a) Psi when scaled).

    Returns the value and the ratio of the largest term to the result.
    """
    log_x = np.log(x)
    psi_one = -EULER_GAMMA                        # psi(1 + r)
    psi_n = -EULER_GAMMA + (1.0 if n == 1 else 0.0)  # psi(n + 1 + r)
    t = 1.0 + 0j                                  # (a)_r x^r / ((n+1)_r r!)
    total = 0j
    peak = 0.0

    if scaled:
        psi_a = digamma(a)
    else:
        ra = rgamma(a - n)
        reflected_shift = (-1) ** n * gamma_fn(1 + n - a) * np.cos(np.pi * a) if a.real < 0.5 else 0j
        psi_a = digamma(1.0 - a) if a.real < 0.5 else digamma(a)
    reflected = (not scaled) and a.real < 0.5

    for r in range(ctl.max_terms):
        if scaled:
            bracket = log_x + psi_a - psi_one - psi_n
        else:
            if reflected and (a + r).real >= 0.5:
                reflected = False
                psi_a = digamma(a + r)
            if reflected:
                # rgamma(a-n) psi(a+r) continued through the poles of psi
                weight = ra * psi_a - reflected_shift
            else:
                weight = ra * psi_a
            bracket = ra * (log_x - psi_one - psi_n) + weight
        contribution = t * bracket
        total += contribution
        peak = max(peak, abs(contribution))
        if t == 0:
            break
        bound = (abs(a) + r) * x / ((r + 1) * (r + n + 1))
        if bound < 0.5 and abs(contribution) * 2 <= ctl.rel_tol * abs(total):
            break

        t *= (a + r) * x / ((r + 1) * (r + n + 1))
        psi_one += 1.0 / (r + 1)
        psi_n += 1.0 / (r + n + 1)
        if scaled or not reflected:
            psi_a += 1.0 / (a + r)
        elif (a + r + 1).real < 0.5:
            # psi(1-a-(r+1)) = psi(1-a-r) - 1/(-a-r)
            psi_a -= 1.0 / (-a - r)
    else:
        raise AccuracyError(f"Psi logarithmic series exceeded {ctl.max_terms} terms",
                            achieved=abs(contribution) / max(abs(total), 1e-300))

    if scaled:
        if n == 0:
            value = -total
        else:
            value = (a - 1.0) * total + 1.0 / x
            peak *= abs(a - 1.0)
    else:
        value = -((-1) ** n) * total
        if n == 1:
            value += rgamma(a) / x
    ratio = peak / abs(value) if value != 0 else np.inf
    return complex(value), ratio


def _asymptotic_psi(a: complex, c: int, x: float, ctl: SeriesControl) -> Optional[complex]:
    """x^-a sum (a)_k (a-c+1)_k / k! (-1/x)^k, or None if it does not reach rel_tol."""
    term = 1.0 + 0j
    total = term
    for k in range(ctl.max_terms):
        new = term * (a + k) * (a - c + 1 + k) / ((k + 1) * (-x))
        if new == 0:
            break
        if abs(new) > abs(term):
            return None
        term = new
        total += term
        if abs(term) <= ctl.rel_tol * abs(total):
            break
    else:
        return None
    return complex(np.exp(-a * np.log(x)) * total)


def _laplace_scaled(a: complex, c: int, x: float) -> complex:
    """Gamma(a) Psi(a, c, x) = int_0^inf e^{-xt} t^{a-1} (1+t)^{c-a-1} dt, Re(a) > 0."""
    def integrand(t, part):
        if t == 0.0:
            return 0.0
        value = np.exp(-x * t + (a - 1.0) * np.log(t) + (c - a - 1.0) * np.log1p(t))
        return value.real if part == 0 else value.imag

    real, _ = integrate.quad(integrand, 0.0, np.inf, args=(0,), epsabs=0.0, epsrel=1e-13, limit=400)
    imag = 0.0
    if a.imag != 0.0:
        imag, _ = integrate.quad(integrand, 0.0, np.inf, args=(1,), epsabs=0.0, epsrel=1e-13, limit=400)
    return complex(real, imag)


def _integral_psi(a: complex, c: int, x: float, scaled: bool) -> complex:
    """Integral representation lifted to Re(a) >= 1.5, then recurred down in a."""
    steps = int(np.ceil(1.5 - a.real)) if a.real < 1.5 else 0
    top = a + steps
    upper = _laplace_scaled(top + 1.0, c, x)
    value = _laplace_scaled(top, c, x)
    logger.debug(f"Psi({a}, {c}, {x}) via integral representation, {steps} recurrence steps")
    if scaled:
        # V(a) = Gamma(a) Psi(a): V(a-1) = ((2a-c+x) V(a) - (a-c+1) V(a+1)) / (a-1)
        for k in range(steps):
            s = top - k
            value, upper = ((2 * s - c + x) * value - (s - c + 1) * upper) / (s - 1.0), value
        return complex(value)
    value, upper = rgamma(top) * value, rgamma(top + 1.0) * upper
    for k in range(steps):
        s = top - k
        value, upper = (2 * s - c + x) * value - s * (s - c + 1) * upper, value
    return complex(value)


def _tricomi(a: complex, c: int, x: float, ctl: SeriesControl, scaled: bool) -> complex:
    n = c - 1
    if x <= TRICOMI_SERIES_LIMIT:
        value, ratio = _log_series(a, n, x, ctl, scaled)
        if ratio <= TRICOMI_MAX_CANCELLATION:
            return value
        logger.debug(f"Psi({a}, {c}, {x}) series cancellation {ratio:.2e}; switching regime")
    else:
        value = _asymptotic_psi(a, c, x, ctl)
        if value is not None:
            return value * gamma_fn(a) if scaled else value
    return _integral_psi(a, c, x, scaled)


def tricomi_psi(a: complex, c: int, x: float, ctl: SeriesControl = DEFAULT_CONTROL) -> complex:
    """Tricomi's Psi(a, c, x) for c in {1, 2} and real x > 0.

    Entire in ``a``; the logarithmic expansion is continued through the poles of
    psi(a + r) so polynomial cases a = 0, -1, ... are evaluated without special
    handling.
    """
    return _tricomi(complex(a), _check_c(c), _check_x(x), ctl, scaled=False)


def gamma_tricomi(a: complex, c: int, x: float, ctl: SeriesControl = DEFAULT_CONTROL) -> complex:
    """Gamma(a) Psi(a, c, x) without forming Gamma(a) separately.

    Stays finite when Gamma(a) alone would overflow (small fields, energies far
    below the spectrum). Raises PoleError at the poles of Gamma.
    """
    a = complex(a)
    if _is_nonpositive_integer(a):
        raise PoleError(f"Gamma(a) Psi(a, c, x) has a pole at a = {a.real:g}", location=a,
                        level=int(-a.real))
    return _tricomi(a, _check_c(c), _check_x(x), ctl, scaled=True)
