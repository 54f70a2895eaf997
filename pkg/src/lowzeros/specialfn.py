"""Special-function kernel: Hurwitz zeta (Euler-Maclaurin), log-gamma, digamma, trigamma.

Everything works in double precision.  The Hurwitz routines come in a scalar
form with a certified remainder bound and a vectorised form used by the
L-function code, which evaluates many shifts ``a`` at one ``s``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy import integrate

EULER_GAMMA = 0.57721566490153286060651209008240243
LOG_2PI = math.log(2 * math.pi)
STIRLING_RADIUS = 12.0
MAX_IM = 1e4


@lru_cache(maxsize=1)
def bernoulli_fractions(nmax: int = 60) -> tuple[Fraction, ...]:
    """B_0..B_nmax exactly (B_1 = -1/2 convention)."""
    b = [Fraction(0)] * (nmax + 1)
    b[0] = Fraction(1)
    for m in range(1, nmax + 1):
        b[m] = -sum(math.comb(m + 1, k) * b[k] for k in range(m)) / (m + 1)
    return tuple(b)


BERNOULLI = tuple(float(x) for x in bernoulli_fractions())
# B_{2k} / (2k)! for k = 0..30
_EM_COEF = np.array([BERNOULLI[2 * k] / math.factorial(2 * k) for k in range(31)])


@dataclass(frozen=True)
class EulerMaclaurinConfig:
    shift_N: int
    bernoulli_terms_M: int = 20
    target_abs_error: float = 1e-12

    def __post_init__(self):
        if self.bernoulli_terms_M % 2 or not 0 < self.bernoulli_terms_M <= 30:
            raise ValueError("bernoulli_terms_M must be even and at most 30")

    @classmethod
    def default_for(cls, s: complex, target_abs_error: float = 1e-12) -> "EulerMaclaurinConfig":
        return cls(12 + math.ceil(abs(s.imag)), 20, target_abs_error)


def em_remainder_bound(s: complex, x: float, M: int) -> float:
    """Bound on the Euler-Maclaurin remainder after M Bernoulli terms at shift point x."""
    sigma = s.real
    if sigma + 2 * M + 1 <= 0:
        return math.inf
    poch = 1.0
    for k in range(2 * M + 1):
        poch *= abs(s + k)
    coef = abs(float(bernoulli_fractions()[2 * M + 2])) / math.factorial(2 * M + 2)
    return poch * coef / (sigma + 2 * M + 1) * x ** (-sigma - 2 * M - 1)


def _em_tail(s: complex, x: np.ndarray, M: int, regular: bool) -> np.ndarray:
    """Euler-Maclaurin tail sum_{n>=0} (x+n)^{-s} evaluated at the shift point x.

    With ``regular`` the pole term 1/(s-1) is removed, i.e. the result is
    zeta(s, x) - 1/(s-1) restricted to the tail.
    """
    logx = np.log(x)
    xs = np.exp(-s * logx)
    z = (1 - s) * logx
    if regular:
        if abs(s - 1) > 1e-4:
            head = (x * xs - 1.0) / (s - 1)
        else:
            head = -logx * np.where(np.abs(z) > 1e-300, np.expm1(z) / np.where(z == 0, 1, z), 1.0)
    else:
        head = x * xs / (s - 1)
    out = head + 0.5 * xs
    poch = s
    xpow = xs / x  # x^{-s-1}
    inv_x2 = 1.0 / (x * x)
    for k in range(1, M + 1):
        out = out + _EM_COEF[k] * poch * xpow
        poch = poch * (s + 2 * k - 1) * (s + 2 * k)
        xpow = xpow * inv_x2
    return out


def hurwitz_zeta(s: complex, a: float, config: EulerMaclaurinConfig | None = None) -> complex:
    """zeta(s, a) for 0 < a <= 1 by Euler-Maclaurin summation."""
    s = complex(s)
    if s == 1:
        raise ZeroDivisionError("Hurwitz zeta has a pole at s = 1")
    if not 0 < a <= 1:
        raise ValueError(f"shift a={a} outside (0, 1]")
    if abs(s.imag) > MAX_IM:
        raise ValueError("|Im s| beyond supported range")
    return complex(hurwitz_zeta_ext(s, a, config))


def hurwitz_zeta_ext(s: complex, a, config: EulerMaclaurinConfig | None = None):
    """Vectorised zeta(s, a) for any a > 0 (used internally for recurrences)."""
    cfg = config or EulerMaclaurinConfig.default_for(s)
    a_arr = np.atleast_1d(np.asarray(a, dtype=float))
    n = np.arange(cfg.shift_N, dtype=float)
    direct = np.exp(-s * np.log(a_arr[:, None] + n[None, :])).sum(axis=1)
    res = direct + _em_tail(s, a_arr + cfg.shift_N, cfg.bernoulli_terms_M, regular=False)
    return res if np.ndim(a) else res[0]


def hurwitz_error_bound(s: complex, a: float, config: EulerMaclaurinConfig | None = None) -> float:
    cfg = config or EulerMaclaurinConfig.default_for(s)
    return em_remainder_bound(complex(s), a + cfg.shift_N, cfg.bernoulli_terms_M)


# ---------------------------------------------------------------- gamma family

def _check_pole(z: complex) -> None:
    if z.imag == 0 and z.real <= 0 and z.real == math.floor(z.real):
        raise ValueError(f"gamma-family function has a pole at {z.real:g}")


def log_gamma(z: complex) -> complex:
    """Principal-branch log Gamma (continuous off the non-positive real axis)."""
    z = complex(z)
    _check_pole(z)
    shift = 0j
    while z.real < 0 or abs(z) < STIRLING_RADIUS:
        shift += cmath.log(z)
        z += 1
    zi = 1 / z
    zi2 = zi * zi
    ser = 0j
    p = zi
    for k in range(1, 11):
        ser += BERNOULLI[2 * k] / (2 * k * (2 * k - 1)) * p
        p *= zi2
    return (z - 0.5) * cmath.log(z) - z + 0.5 * LOG_2PI + ser - shift


def digamma(z: complex) -> complex:
    z = complex(z)
    _check_pole(z)
    acc = 0j
    while z.real < 0 or abs(z) < STIRLING_RADIUS:
        acc -= 1 / z
        z += 1
    zi2 = 1 / (z * z)
    ser = 0j
    p = zi2
    for k in range(1, 11):
        ser += BERNOULLI[2 * k] / (2 * k) * p
        p *= zi2
    return cmath.log(z) - 0.5 / z - ser + acc


def trigamma(z):
    """Vectorised psi'(z) for complex arrays with Re z > -1 away from poles."""
    z = np.asarray(z, dtype=complex)
    acc = np.zeros_like(z)
    need = np.abs(z) < STIRLING_RADIUS
    w = z.copy()
    while np.any(need):
        acc = acc + np.where(need, 1 / np.where(need, w, 1) ** 2, 0)
        w = np.where(need, w + 1, w)
        need = np.abs(w) < STIRLING_RADIUS
    wi = 1 / w
    wi2 = wi * wi
    ser = wi + 0.5 * wi2
    p = wi2 * wi
    for k in range(1, 11):
        ser = ser + BERNOULLI[2 * k] * p
        p = p * wi2
    return ser + acc


def digamma_vec(z):
    """Vectorised psi(z) for complex arrays with Re z > 0."""
    z = np.asarray(z, dtype=complex)
    acc = np.zeros_like(z)
    w = z.copy()
    need = np.abs(w) < STIRLING_RADIUS
    while np.any(need):
        acc = acc - np.where(need, 1 / np.where(need, w, 1), 0)
        w = np.where(need, w + 1, w)
        need = np.abs(w) < STIRLING_RADIUS
    wi2 = 1 / (w * w)
    ser = np.zeros_like(w)
    p = wi2
    for k in range(1, 11):
        ser = ser + BERNOULLI[2 * k] / (2 * k) * p
        p = p * wi2
    return np.log(w) - 0.5 / w - ser + acc


def gamma_phase(t: float, a: int) -> float:
    """Im log Gamma(1/4 + a/2 + i t/2); its t-derivative is Re psi(...)/2."""
    return log_gamma(complex(0.25 + 0.5 * a, 0.5 * t)).imag


def re_digamma_line(u: float, a: int) -> float:
    return digamma(complex(0.25 + 0.5 * a, 0.5 * u)).real


def gamma_integral(delta_chi: int, T1: float, T2: float) -> float:
    """Integral over [T1, T2] of Re psi(1/4 + a/2 + iu/2), a = 1 - delta_chi.

    ``delta_chi`` is 1 for even characters; the Gamma factor of an even
    character is Gamma(s/2), hence the shift 1/4 at s = 1/2 + iu.
    """
    if T1 > T2:
        raise ValueError("T1 must not exceed T2")
    if T1 == T2:
        return 0.0
    a = 1 - int(delta_chi)
    # split at 0 where the integrand's curvature is largest
    pts = [T1] + ([0.0] if T1 < 0 < T2 else []) + [T2]
    total = []
    for lo, hi in zip(pts[:-1], pts[1:]):
        val, _ = integrate.quad(re_digamma_line, lo, hi, args=(a,), epsabs=1e-12, epsrel=1e-12, limit=200)
        total.append(val)
    return math.fsum(total)
