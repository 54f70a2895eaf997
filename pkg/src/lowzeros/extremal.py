"""Beurling-Selberg majorant and minorant of an interval and their Fourier transforms.

``B(z) = H(z) +- K(z)`` with ``K(z) = (sin(pi z)/(pi z))^2`` and the odd part

    H(z) = (sin(pi z)/pi)^2 (2/z + sum_{n>=1} (z-n)^-2 - sum_{n>=1} (z+n)^-2).

Both series are trigamma values; the reflection formula turns the one with
poles at the positive integers into ``pi^2/sin^2`` minus a regular trigamma,
so H is evaluated without cancellation near integers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np
from scipy import integrate, special

from .specialfn import BERNOULLI, STIRLING_RADIUS, trigamma

DELTA_MAX_DEFAULT = 1.6
PRIME_CUTOFF_HARD_CAP = 1e8
FT_TAIL_TARGET = 1e-10


@dataclass(frozen=True)
class ExtremalParams:
    delta: float
    half_length: float
    center_T0: float = 0.0
    sign: int = 1
    delta_cap: float = DELTA_MAX_DEFAULT

    def __post_init__(self):
        if self.delta <= 0:
            raise ValueError("delta must be positive")
        if self.half_length <= 0:
            raise ValueError("half_length must be positive")
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 (majorant) or -1 (minorant)")
        if math.exp(2 * math.pi * self.delta_cap) > PRIME_CUTOFF_HARD_CAP:
            raise ValueError("delta_cap exceeds the hard cap exp(2 pi delta) <= 1e8")
        if self.delta > self.delta_cap:
            raise ValueError(
                f"delta={self.delta} exceeds delta_cap={self.delta_cap}; raise the cap explicitly"
            )

    @property
    def prime_cutoff(self) -> float:
        return math.exp(2 * math.pi * self.delta)

    def flipped(self) -> "ExtremalParams":
        return replace(self, sign=-self.sign)


@dataclass(frozen=True)
class TransformValue:
    u: float
    value: complex
    abs_error_bound: float


# ------------------------------------------------------------------ B and R

_BIG = STIRLING_RADIUS


def _d_asym(z):
    """2/z - 1/z^2 - 2 psi'(1+z) by its asymptotic series (|z| large)."""
    zi = 1 / z
    zi2 = zi * zi
    p = zi2 * zi
    out = np.zeros_like(z)
    for k in range(1, 11):
        out = out - 2 * BERNOULLI[2 * k] * p
        p = p * zi2
    return out


def _fejer(z):
    return np.sinc(z) ** 2


def _h_excess_right(z):
    """H(z) - 1 for Re z >= 0."""
    z = np.asarray(z, dtype=complex)
    s2 = (np.sin(np.pi * z) / np.pi) ** 2
    big = np.abs(z) >= _BIG
    out = np.empty_like(z)
    if big.any():
        out[big] = s2[big] * _d_asym(z[big])
    small = ~big
    if small.any():
        zs = z[small]
        safe = np.where(zs == 0, 1, zs)
        lin = np.where(zs == 0, 0, 2 * s2[small] / safe)
        out[small] = -_fejer(zs) + lin - 2 * s2[small] * trigamma(1 + zs)
    return out


def _h_split(z):
    """H(z) as (sign part, small part) with H = sign + small."""
    z = np.asarray(z, dtype=complex)
    right = z.real >= 0
    exc = _h_excess_right(np.where(right, z, -z))
    exc = np.where(right, exc, -exc)
    sgn = np.where(right, 1.0, -1.0)
    return sgn, exc


def beurling_h(z):
    sgn, exc = _h_split(z)
    return sgn + exc


def beurling_b(sign: int, s):
    """B+(s) (sign=+1) or B-(s) (sign=-1); complex in, complex out."""
    out = beurling_h(s) + sign * _fejer(np.asarray(s, dtype=complex))
    return out if np.ndim(s) else complex(out)


def _args(params: ExtremalParams, s):
    s = np.asarray(s, dtype=complex)
    d, h, t0 = params.delta, params.half_length, params.center_T0
    return d * (h - t0 + s), d * (h + t0 - s)


def selberg_r(params: ExtremalParams, s):
    """R(s) = (B(delta (h - T0 + s)) + B(delta (h + T0 - s))) / 2."""
    z1, z2 = _args(params, s)
    sg1, e1 = _h_split(z1)
    sg2, e2 = _h_split(z2)
    out = 0.5 * (sg1 + sg2) + 0.5 * (e1 + e2) + 0.5 * params.sign * (_fejer(z1) + _fejer(z2))
    return out if np.ndim(s) else complex(out)


def selberg_r_real(params: ExtremalParams, x):
    return np.real(selberg_r(params, np.asarray(x, dtype=float)))


def indicator(params: ExtremalParams, x):
    """Indicator of [T0 - h, T0 + h], 1/2 at the endpoints."""
    y = np.abs(np.asarray(x, dtype=float) - params.center_T0)
    h = params.half_length
    return np.where(y < h, 1.0, np.where(y == h, 0.5, 0.0))


def _r_h_centered(delta: float, h: float, y):
    """(H(delta (h + y)) + H(delta (h - y))) / 2, the part shared by R+ and R-."""
    z1 = delta * (h + np.asarray(y, dtype=float))
    z2 = delta * (h - np.asarray(y, dtype=float))
    sg1, e1 = _h_split(z1)
    sg2, e2 = _h_split(z2)
    return (0.5 * (sg1 + sg2) + 0.5 * (e1 + e2)).real


# --------------------------------------------------------------- transforms

def _ft_truncation(delta: float, h: float, tol: float) -> float:
    """Half-width X with sampled tail of the H-part below tol (|H - sgn| <= 1/(3 pi^2 z^3))."""
    return h + math.sqrt(1.0 / (3 * math.pi**2 * delta**3 * tol))


@lru_cache(maxsize=32)
def _ft_samples(delta: float, h: float, step: float, tol: float):
    X = _ft_truncation(delta, h, tol) + step
    n = int(math.ceil(X / step))
    y = step * np.arange(n + 1)
    w = np.full(n + 1, 2 * step)
    w[0] = step
    vals = _r_h_centered(delta, h, y) * w
    vals.flags.writeable = False
    y.flags.writeable = False
    return y, vals


def _ft_error_bound(delta: float, h: float, step: float, tol: float, n: int) -> float:
    X = _ft_truncation(delta, h, tol)
    tail = 1.0 / (3 * math.pi**2 * delta**3 * (X - h) ** 2)
    return tail + 4 * n * np.finfo(float).eps * step


def _h_part_transform(params: ExtremalParams, us: np.ndarray, tol: float):
    """Transform of the even H-part by band-limited sampling (exact up to truncation)."""
    d, h = params.delta, params.half_length
    umax = float(np.max(np.abs(us))) if len(us) else 0.0
    step = 1.0 / max(4 * d, 2 * (umax + d))
    y, wv = _ft_samples(d, h, step, tol)
    out = np.empty(len(us))
    chunk = max(1, 2_000_000 // len(y))
    for i in range(0, len(us), chunk):
        uu = us[i : i + chunk]
        out[i : i + chunk] = np.cos(2 * np.pi * np.outer(uu, y)) @ wv
    return out, _ft_error_bound(d, h, step, tol, len(y))


def fejer_part_transform(params: ExtremalParams, us):
    """Transform of the Fejer part (K(delta(h+y)) + K(delta(h-y)))/2 about the centre."""
    d, h = params.delta, params.half_length
    us = np.asarray(us, dtype=float)
    return np.clip(1 - np.abs(us) / d, 0, None) / d * np.cos(2 * np.pi * us * h)


def fourier_r_many(params: ExtremalParams, us, tol: float = FT_TAIL_TARGET):
    """R^(u) = int R(x) e^{-2 pi i u x} dx for an array of u; returns (values, error bound)."""
    us = np.atleast_1d(np.asarray(us, dtype=float))
    hpart, err = _h_part_transform(params, us, tol)
    val = hpart + params.sign * fejer_part_transform(params, us)
    if params.center_T0 != 0:
        val = val * np.exp(-2j * np.pi * us * params.center_T0)
    return val, err


def fourier_r(params: ExtremalParams, u: float, tol: float = FT_TAIL_TARGET) -> TransformValue:
    if tol < 1e-13:
        raise ArithmeticError("requested transform accuracy below attainable rounding floor")
    vals, err = fourier_r_many(params, [u], tol)
    v = vals[0]
    return TransformValue(float(u), complex(v) if params.center_T0 != 0 else float(v), err)


def fourier_r_real(params: ExtremalParams, us, tol: float = FT_TAIL_TARGET) -> np.ndarray:
    vals, _ = fourier_r_many(params, us, tol)
    return np.real(vals)


def transform_square_integral(
    params: ExtremalParams, u_min: float, u_max: float, weight: str = "u"
) -> float:
    """int_{u_min}^{u_max} u |R^(u)|^2 du  (weight 'u') or u (Re R^(u))^2 du (weight 'u_re2')."""
    if not 0 <= u_min <= u_max <= params.delta * (1 + 1e-12):
        raise ValueError("need 0 <= u_min <= u_max <= delta")
    if u_min == u_max:
        return 0.0
    if weight not in ("u", "u_re2"):
        raise ValueError(f"unknown weight {weight!r}")

    table = transform_table(params)

    def f(u):
        v = complex(table(u))
        return u * (v.real**2 if weight == "u_re2" else abs(v) ** 2)

    val, _ = integrate.quad(f, u_min, u_max, epsabs=1e-11, epsrel=1e-10, limit=400)
    return val


# ---------------------------------------------------------- property checks

def sandwich_slack(params: ExtremalParams, xs) -> float:
    """min over xs of sign * (R(x) - indicator(x)); non-negative when the sandwich holds."""
    r = selberg_r_real(params, xs)
    return float(np.min(params.sign * (r - indicator(params, xs))))


def _fejer_tail(Y: float) -> float:
    """int_Y^inf (sin(pi v)/(pi v))^2 dv for Y > 0."""
    si, _ = special.sici(2 * math.pi * Y)
    return (math.sin(math.pi * Y) ** 2 / Y + math.pi * (math.pi / 2 - si)) / math.pi**2


def l1_distance(params: ExtremalParams, nodes: int = 16) -> tuple[float, float]:
    """int |R(x) - indicator(x)| dx by panel Gauss-Legendre plus exact Fejer tails.

    Returns (value, error bound for the unintegrated H-part tail).
    """
    d, h, t0 = params.delta, params.half_length, params.center_T0
    X = h + 2000.0 / d
    width = 0.5 / d
    inner = np.linspace(-h, h, max(2, int(math.ceil(2 * h / width)) + 1))
    outer = h + width * np.arange(0, int(math.ceil((X - h) / width)) + 1)
    edges = np.unique(np.concatenate([-outer[::-1], inner, outer]))
    gx, gw = np.polynomial.legendre.leggauss(nodes)
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])
    xs = (mid[:, None] + half[:, None] * gx[None, :]).ravel()
    ws = (half[:, None] * gw[None, :]).ravel()
    vals = np.abs(selberg_r_real(params, xs + t0) - indicator(params, xs + t0))
    body = math.fsum(vals * ws)
    Xe = edges[-1]
    # outside the interval |R| = sign * R; the Fejer part integrates in closed form
    fejer = (_fejer_tail(d * (Xe + h)) + _fejer_tail(d * (Xe - h))) / d
    tail = fejer  # two sides, each half of (K1 + K2)
    err = 1.0 / (3 * math.pi**2 * d**3 * (Xe - h) ** 2)
    return body + tail, err


def decay_constant(params: ExtremalParams, n: int = 20000) -> float:
    """Fitted C in |R(x)| <= C min(1, delta^-2 (|x - T0| - h)^-2) outside the interval."""
    d, h, t0 = params.delta, params.half_length, params.center_T0
    y = h + np.geomspace(1e-3, 1e4, n) / d
    xs = np.concatenate([t0 + y, t0 - y])
    dist = np.concatenate([y, y]) - h
    env = np.minimum(1.0, 1.0 / (d * dist) ** 2)
    return float(np.max(np.abs(selberg_r_real(params, xs)) / env))


def growth_constant(params: ExtremalParams, ymax: float = 5.0, n: int = 2001) -> float:
    """Fitted C in log|R(x0 + iy)| <= 2 pi delta |y| + C along the vertical line through T0."""
    y = np.linspace(-ymax, ymax, n)
    r = np.abs(selberg_r(params, params.center_T0 + 1j * y))
    return float(np.max(np.log(np.maximum(r, 1e-300)) - 2 * np.pi * params.delta * np.abs(y)))


def leading_term_constant(params: ExtremalParams, n: int = 400) -> float:
    """Fitted C in |R^(u) - e^{-2 pi i T0 u} sin(2 pi h u)/(pi u)| <= C / delta on |u| < delta."""
    us = np.linspace(-params.delta, params.delta, n + 2)[1:-1]
    us = us[us != 0]
    vals, _ = fourier_r_many(params, us)
    lead = np.exp(-2j * np.pi * params.center_T0 * us) * np.sin(2 * np.pi * params.half_length * us) / (np.pi * us)
    return float(np.max(np.abs(vals - lead)) * params.delta)


def u_transform_constant(params: ExtremalParams, n: int = 400) -> float:
    """Fitted sup |u R^(u)|."""
    us = np.linspace(0, params.delta, n)
    vals, _ = fourier_r_many(params, us)
    return float(np.max(np.abs(us * vals)))


class TransformTable:
    """Chebyshev interpolant of R^ on [0, delta] for sums over many prime powers.

    The centred transform is analytic on the closed half-band (its kinks sit
    at u = 0 and u = +-delta only), so a modest degree reaches rounding
    level.  Accuracy is checked against direct evaluation at construction.
    """

    def __init__(self, params: ExtremalParams, degree: int = 80, check_tol: float = 1e-9):
        self.params = params
        centred = replace(params, center_T0=0.0)
        d = params.delta
        # cos(2 pi u h) makes h * delta oscillations on [0, delta]
        degree = max(degree, int(80 + 16 * params.half_length * d))
        n_probe = 40 + degree // 2
        probe = d * (np.arange(1, n_probe) / n_probe)
        direct, _ = fourier_r_many(centred, probe)
        while True:
            self._poly, err = self._fit(centred, degree)
            self.interp_error = float(np.max(np.abs(self._poly(probe) - direct.real)))
            if self.interp_error <= check_tol or degree >= 4096:
                break
            degree *= 2
        self.degree = degree
        self.abs_error_bound = err + self.interp_error
        if self.interp_error > check_tol:
            raise ArithmeticError(f"transform interpolant error {self.interp_error:.2e} above {check_tol:.0e}")

    @staticmethod
    def _fit(centred: ExtremalParams, degree: int):
        d = centred.delta
        nodes = 0.5 * d * (1 + np.cos(np.pi * (np.arange(degree + 1) + 0.5) / (degree + 1)))
        vals, err = fourier_r_many(centred, nodes)
        return np.polynomial.chebyshev.Chebyshev.fit(nodes, vals.real, degree, domain=[0, d]), err

    def __call__(self, us):
        us = np.asarray(us, dtype=float)
        a = np.abs(us)
        val = np.where(a < self.params.delta, self._poly(np.minimum(a, self.params.delta)), 0.0)
        if self.params.center_T0 != 0:
            return val * np.exp(-2j * np.pi * us * self.params.center_T0)
        return val


@lru_cache(maxsize=128)
def transform_table(params: ExtremalParams) -> TransformTable:
    return TransformTable(params)
