"""Dirichlet L-functions near the critical line: evaluation, rotation to a real
function, zero location, argument tracking and zero counting.

All characters modulo q are evaluated together where possible: with the
shifts a = g^k ordered by discrete logarithm, the vector of Hurwitz values
turns into the vector of L-values through one FFT.
"""

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import optimize

from .characters import DirichletCharacter, enumerate_characters, power_table, root_number
from .specialfn import _em_tail, gamma_integral, log_gamma

log = logging.getLogger(__name__)

SIGMA0 = 10.0
ZERO_TOL = 1e-9
IMAG_DIAG_LIMIT = 1e-6
CENTRAL_ZERO_TOL = 1e-10
MAX_REFINEMENTS = 3
MAX_HEIGHT = 1e3


class NumericalConsistencyError(RuntimeError):
    pass


class MissingZeroError(RuntimeError):
    pass


class TrackingError(RuntimeError):
    pass


# ----------------------------------------------------------------- evaluation

def _shift_N(s: complex) -> int:
    return 12 + math.ceil(abs(s.imag))


@lru_cache(maxsize=64)
def _log_block(q: int, N: int) -> np.ndarray:
    """log(n q + a_k) with a_k = g^k, shape (q - 1, N)."""
    a = power_table(q).astype(float)
    n = np.arange(N, dtype=float)
    blk = np.log(n[None, :] * q + a[:, None])
    blk.flags.writeable = False
    return blk


def _hurwitz_block(s: complex, q: int, M: int = 20) -> np.ndarray:
    """h_k = q^{-s} (zeta(s, a_k/q) - 1/(s-1)), ordered by discrete log k.

    The constant removed from every entry cancels against any
    non-principal character, which keeps s = 1 regular.
    """
    N = _shift_N(s)
    direct = np.exp(-s * _log_block(q, N)).sum(axis=1)
    x = N + power_table(q) / q
    tail = _em_tail(s, x, M, regular=True)
    return direct + cmath.exp(-s * math.log(q)) * tail


@lru_cache(maxsize=4096)
def _char_row(q: int, j: int) -> np.ndarray:
    k = np.arange(q - 1)
    row = np.exp(2j * np.pi * ((j * k) % (q - 1)) / (q - 1))
    row.flags.writeable = False
    return row


def _check_nonprincipal(chi: DirichletCharacter) -> None:
    if chi.is_principal:
        raise ValueError("principal character is not supported (zeta pole)")


def l_value(s: complex, chi: DirichletCharacter) -> complex:
    """L(s, chi) = q^{-s} sum_a chi(a) zeta(s, a/q)."""
    _check_nonprincipal(chi)
    s = complex(s)
    if not -2 <= s.real <= 12 or abs(s.imag) > MAX_HEIGHT:
        raise ValueError(f"s={s} outside supported region")
    return complex(np.dot(_char_row(chi.q, chi.j), _hurwitz_block(s, chi.q)))


def l_values_all(s: complex, q: int) -> np.ndarray:
    """L(s, chi_j) for j = 0..q-2 (entry 0 is meaningless and set to nan)."""
    h = _hurwitz_block(complex(s), q)
    out = np.fft.ifft(h) * (q - 1)
    out[0] = np.nan
    return out


def _log_gamma_factor(s: complex, q: int, a: int) -> complex:
    z = (s + a) / 2
    return z * math.log(q / math.pi) + log_gamma(z)


def completed_lambda(s: complex, chi: DirichletCharacter) -> complex:
    """(q/pi)^{(s+a)/2} Gamma((s+a)/2) L(s, chi)."""
    s = complex(s)
    return cmath.exp(_log_gamma_factor(s, chi.q, chi.a)) * l_value(s, chi)


def theta(t: float, q: int, a: int) -> float:
    """Phase of the Gamma/conductor factor at 1/2 + it (continuous in t)."""
    return 0.5 * t * math.log(q / math.pi) + log_gamma(complex(0.25 + 0.5 * a, 0.5 * t)).imag


@lru_cache(maxsize=64)
def root_numbers_all(q: int) -> np.ndarray:
    """epsilon_j for all j via an FFT of the additive character."""
    pw = power_table(q)
    tau = np.fft.ifft(np.exp(2j * np.pi * pw / q)) * (q - 1)
    j = np.arange(q - 1)
    eps = tau / (np.where(j % 2 == 0, 1, 1j) * math.sqrt(q))
    eps = eps / np.abs(eps)
    eps[0] = np.nan
    eps.flags.writeable = False
    return eps


def _rotation(chi: DirichletCharacter) -> complex:
    return 1 / cmath.sqrt(root_number(chi).epsilon)


def hardy_z_complex(t: float, chi: DirichletCharacter) -> complex:
    """epsilon^{-1/2} e^{i theta(t)} L(1/2 + it); real up to rounding, |.| = |L|."""
    _check_nonprincipal(chi)
    rot = _rotation(chi) * cmath.exp(1j * theta(t, chi.q, chi.a))
    return rot * l_value(complex(0.5, t), chi)


def hardy_z(t: float, chi: DirichletCharacter) -> float:
    """Real rotation of the completed L-function on the critical line.

    This is epsilon^{-1/2} Lambda(1/2 + it) divided by the positive modulus of
    its Gamma/conductor factor, so |Z| = |L| and the sign pattern (hence the
    zeros) is that of the rotated completed function.
    """
    z = hardy_z_complex(t, chi)
    if abs(z.imag) > IMAG_DIAG_LIMIT:
        raise NumericalConsistencyError(f"rotated value not real at t={t}: imag={z.imag:.3e}")
    return z.real


def hardy_z_all(ts, q: int) -> np.ndarray:
    """Z(t, chi_j) for a grid of t and all j; shape (len(ts), q - 1), column 0 nan."""
    ts = np.atleast_1d(np.asarray(ts, dtype=float))
    with np.errstate(invalid="ignore"):
        rot = 1 / np.sqrt(root_numbers_all(q))
    par = np.arange(q - 1) % 2
    out = np.empty((len(ts), q - 1))
    worst = 0.0
    for i, t in enumerate(ts):
        lv = l_values_all(complex(0.5, t), q)
        ph = np.exp(1j * np.array([theta(t, q, 0), theta(t, q, 1)]))[par]
        z = rot * ph * lv
        worst = max(worst, float(np.nanmax(np.abs(z.imag))))
        out[i] = z.real
    if worst > IMAG_DIAG_LIMIT:
        raise NumericalConsistencyError(f"rotated values not real on grid: max imag {worst:.3e}")
    return out


# ------------------------------------------------------------ argument tracking

@dataclass(frozen=True)
class ArgumentValue:
    T: float
    s_value: float
    tilde_s: float
    at_jump: bool


def _sigma_grid(K: int = 64) -> np.ndarray:
    u = np.linspace(0.0, 1.0, K + 1)
    return 0.5 + (SIGMA0 - 0.5) * (1 - u) ** 2


def _track_single(chi: DirichletCharacter, T: float, sig: np.ndarray, vals: np.ndarray) -> float:
    """Continuous arg of L(sigma + iT) from sig[0] down to sig[-1], refining steps as needed."""
    phase = cmath.phase(vals[0])

    def walk(s0, v0, s1, v1, depth):
        inc = cmath.phase(v1 / v0)
        if abs(inc) < math.pi / 2:
            return inc
        if abs(s1 - s0) < 1e-6:
            raise TrackingError(
                f"argument tracking failed for chi=(q={chi.q}, j={chi.j}) at T={T}, sigma~{s1:.6g}"
            )
        sm = 0.5 * (s0 + s1)
        vm = l_value(complex(sm, T), chi)
        return walk(s0, v0, sm, vm, depth + 1) + walk(sm, vm, s1, v1, depth + 1)

    for k in range(len(sig) - 1):
        phase += walk(sig[k], vals[k], sig[k + 1], vals[k + 1], 0)
    return phase


def _s_raw_all(T: float, q: int, js=None) -> np.ndarray:
    """(1/pi) arg L(1/2 + iT, chi_j) by continuous variation from sigma = 10."""
    sig = _sigma_grid()
    vals = np.array([l_values_all(complex(s, T), q) for s in sig])  # (K+1, q-1)
    js = range(1, q - 1) if js is None else js
    out = np.full(q - 1, np.nan)
    ph = np.angle(vals)
    with np.errstate(invalid="ignore"):
        inc = np.angle(vals[1:] / vals[:-1])
    for j in js:
        if np.all(np.abs(inc[:, j]) < math.pi / 2):
            out[j] = (ph[0, j] + inc[:, j].sum()) / math.pi
        else:
            chi = DirichletCharacter(q, j, enumerate_characters(q)[0].g)
            out[j] = _track_single(chi, T, sig, vals[:, j]) / math.pi
    return out


def _on_zero(T: float, q: int, js) -> np.ndarray:
    lv = np.abs(l_values_all(complex(0.5, T), q))
    mask = np.zeros(q - 1, dtype=bool)
    for j in js:
        mask[j] = lv[j] < 1e-9
    return mask


JUMP_EPS = 1e-7


def s_values_all(T: float, q: int, js=None) -> tuple[np.ndarray, np.ndarray]:
    """S(T, chi_j) for all non-principal j with the two-sided average at zeros."""
    js = list(range(1, q - 1)) if js is None else list(js)
    out = _s_raw_all(T, q, js)
    jump = _on_zero(T, q, js)
    if jump.any():
        jj = [j for j in js if jump[j]]
        lo = _s_raw_all(T - JUMP_EPS, q, jj)
        hi = _s_raw_all(T + JUMP_EPS, q, jj)
        for j in jj:
            out[j] = 0.5 * (lo[j] + hi[j])
    return out, jump


def s_arg(T: float, chi: DirichletCharacter) -> ArgumentValue:
    """S(T, chi) and S~(T, chi) = S(T, chi) + S(T, conj chi)."""
    _check_nonprincipal(chi)
    jc = chi.conj().j
    vals, jump = s_values_all(T, chi.q, sorted({chi.j, jc}))
    return ArgumentValue(T, float(vals[chi.j]), float(vals[chi.j] + vals[jc]), bool(jump[chi.j]))


def tilde_s_all(T: float, q: int) -> np.ndarray:
    """S~(T, chi_j) for every non-principal j (entry 0 nan)."""
    s, _ = s_values_all(T, q)
    conj = (-np.arange(q - 1)) % (q - 1)
    out = s + s[conj]
    out[0] = np.nan
    return out


def count_by_argument(t1: float, t2: float, q: int, js=None) -> np.ndarray:
    """Zeros with t1 < gamma < t2 via the argument principle (real-valued, near-integer)."""
    s2, _ = s_values_all(t2, q, js)
    s1, _ = s_values_all(t1, q, js)
    th = np.array([[theta(t2, q, a) - theta(t1, q, a)] for a in (0, 1)])[:, 0]
    par = np.arange(q - 1) % 2
    return th[par] / math.pi + s2 - s1


# ------------------------------------------------------------------ zero finding

@dataclass(frozen=True)
class ZeroRecord:
    q: int
    g: int
    j: int
    gamma: float
    abs_tolerance: float = ZERO_TOL


def _round12(x: float) -> float:
    return float(f"{x:.12g}")


def grid_step(q: int, T: float) -> float:
    return (2 * math.pi / math.log(q * (abs(T) + 2))) / 8


def _refine(chi: DirichletCharacter, a: float, b: float, za: float, zb: float) -> float:
    if za == 0:
        return a
    if zb == 0:
        return b
    return optimize.brentq(lambda t: hardy_z(t, chi), a, b, xtol=1e-11, maxiter=200)


def _sign_change_zeros(chi, ts, zs) -> list[float]:
    out = []
    for i in range(len(ts) - 1):
        za, zb = zs[i], zs[i + 1]
        if za == 0 and i > 0:
            continue  # already recorded as right endpoint
        if za * zb <= 0:
            out.append(_refine(chi, ts[i], ts[i + 1], za, zb))
    return out


def _scan_single(chi, t_min, t_max, step) -> list[float]:
    n = max(2, int(math.ceil((t_max - t_min) / step)) + 1)
    ts = np.linspace(t_min, t_max, n)
    zs = np.array([hardy_z(t, chi) for t in ts])
    return _sign_change_zeros(chi, ts, zs)


def find_zeros_many(q: int, t_min: float, t_max: float, js=None) -> dict[int, list[ZeroRecord]]:
    """Critical-line zeros with t_min < gamma < t_max for several characters mod q.

    Each character's sign-change count is cross-checked against the
    argument-principle count; disagreements trigger rescans at doubled
    resolution.
    """
    if not t_min < t_max:
        raise ValueError("need t_min < t_max")
    if max(abs(t_min), abs(t_max)) > MAX_HEIGHT:
        raise ValueError("window beyond supported height")
    chars = enumerate_characters(q)
    js = list(range(1, q - 1)) if js is None else [j for j in js if j != 0]
    step = grid_step(q, max(abs(t_min), abs(t_max)))
    n = max(2, int(math.ceil((t_max - t_min) / step)) + 1)
    ts = np.linspace(t_min, t_max, n)
    zgrid = hardy_z_all(ts, q)
    expected = count_by_argument(t_min, t_max, q, js)
    out: dict[int, list[ZeroRecord]] = {}
    for j in js:
        chi = chars[j]
        zeros = _sign_change_zeros(chi, ts, zgrid[:, j])
        exp_j = expected[j]
        tries = 0
        sub = step
        while abs(len(zeros) - exp_j) > 0.5:
            if tries >= MAX_REFINEMENTS:
                raise MissingZeroError(
                    f"q={q} j={j} window ({t_min}, {t_max}): {len(zeros)} sign changes vs "
                    f"argument count {exp_j:.6f}"
                )
            tries += 1
            sub /= 2
            log.info("rescanning q=%d j=%d at step %.3g", q, j, sub)
            zeros = _scan_single(chi, t_min, t_max, sub)
        if abs(exp_j - round(exp_j)) > 1e-6:
            raise NumericalConsistencyError(
                f"argument count for q={q} j={j} not integral: {exp_j:.9f}"
            )
        out[j] = [ZeroRecord(q, chi.g, j, _round12(z)) for z in sorted(zeros)]
    return out


def find_zeros(chi: DirichletCharacter, t_min: float, t_max: float) -> list[ZeroRecord]:
    _check_nonprincipal(chi)
    return find_zeros_many(chi.q, t_min, t_max, [chi.j])[chi.j]


def central_value_vanishes(chi: DirichletCharacter) -> bool:
    """Flag |Z(0)| < 1e-10; no such zero is expected at desk scale."""
    return abs(hardy_z(0.0, chi)) < CENTRAL_ZERO_TOL


# ------------------------------------------------------------------ zero counting

@dataclass(frozen=True)
class ZeroCount:
    T: float
    from_zeros: float
    from_formula: float
    tilde_s: float
    gamma_term: float

    @property
    def discrepancy(self) -> float:
        return abs(self.from_zeros - self.from_formula)


def weighted_count(gammas, T: float, tol: float = ZERO_TOL) -> float:
    """#{|gamma| <= T} with zeros at +-T (within tol) weighted 1/2."""
    g = np.abs(np.asarray(gammas, dtype=float))
    inside = np.count_nonzero(g < T - tol)
    edge = np.count_nonzero(np.abs(g - T) <= tol)
    return inside + 0.5 * edge


def formula_count(T: float, chi: DirichletCharacter, tilde_s: float) -> tuple[float, float]:
    gi = gamma_integral(chi.parity_delta, -T, T) / (2 * math.pi)
    return T / math.pi * math.log(chi.q / math.pi) + tilde_s + gi, gi


def count_zeros(T: float, chi: DirichletCharacter, zeros=None) -> ZeroCount:
    """N(T, chi) from located zeros and from the exact argument-principle identity."""
    if T <= 0:
        raise ValueError("T must be positive")
    _check_nonprincipal(chi)
    if zeros is None:
        margin = 0.5
        zeros = [z.gamma for z in find_zeros(chi, -T - margin, T + margin)]
    a = weighted_count(zeros, T)
    sv = s_arg(T, chi)
    b, gi = formula_count(T, chi, sv.tilde_s)
    if abs(a - b) >= 1e-6:
        raise NumericalConsistencyError(
            f"zero count mismatch q={chi.q} j={chi.j} T={T}: zeros {a} vs formula {b:.9f}"
        )
    return ZeroCount(T, a, b, sv.tilde_s, gi)
