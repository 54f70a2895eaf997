"""Family-level computations over all non-principal characters mod q.

Explicit-formula checks for the extremal test functions, prime sums and their
first two moments over the family, and ensemble statistics of S~(T, chi)
and of the lowest zeros.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import integrate, special

from .arith import prime_powers_upto, require_odd_prime
from .characters import DirichletCharacter, discrete_log_table, enumerate_characters
from .extremal import ExtremalParams, selberg_r, transform_table
from .lfunc import (
    CENTRAL_ZERO_TOL,
    ZERO_TOL,
    MissingZeroError,
    NumericalConsistencyError,
    hardy_z_all,
    s_values_all,
    tilde_s_all,
    weighted_count,
)
from .specialfn import digamma_vec, gamma_integral
from .zerocache import ModulusZeros, ZeroStore

DEFAULT_BETAS = (0.26, 0.3, 0.4, 0.5, 0.75, 1.0, 1.5, 2.0)
S_ENVELOPE_C = 1.0  # |S(t, chi)| <= C log(q (|t| + 2)), used only in tail bounds
IDENTITY_TOL = 1e-6
LOG2_FREQ = math.log(2) / (2 * math.pi)


def _fsum_c(x: np.ndarray) -> complex:
    return complex(math.fsum(np.real(x)), math.fsum(np.imag(x)))


@lru_cache(maxsize=16)
def _weighted_prime_powers(params: ExtremalParams):
    """(n, Lambda(n)/sqrt(n) * R^(log n / 2 pi)) for prime powers in the support."""
    ns, lam = prime_powers_upto(params.prime_cutoff)
    if len(ns) == 0:
        return ns, np.zeros(0, dtype=complex)
    w = lam / np.sqrt(ns) * transform_table(params)(np.log(ns) / (2 * math.pi))
    keep = np.log(ns) / (2 * math.pi) < params.delta
    return ns[keep], np.asarray(w[keep], dtype=complex)


def _residue_sums(q: int, params: ExtremalParams) -> np.ndarray:
    """S_k = sum of weights over n = g^k mod q, indexed by discrete log k."""
    ns, w = _weighted_prime_powers(params)
    ind = discrete_log_table(q)[ns % q]
    ok = ind >= 0
    re = np.bincount(ind[ok], weights=w[ok].real, minlength=q - 1)
    im = np.bincount(ind[ok], weights=w[ok].imag, minlength=q - 1)
    return re + 1j * im


# ------------------------------------------------------------------ prime sums

def prime_term(chi: DirichletCharacter, params: ExtremalParams) -> float:
    """P = sum_n Re(chi(n) R^(log n / 2 pi)) Lambda(n)/sqrt(n), one character, direct loop."""
    ns, w = _weighted_prime_powers(params)
    if len(ns) == 0:
        return 0.0
    return math.fsum(np.real(chi.values()[ns % chi.q] * w))


def prime_terms_all(q: int, params: ExtremalParams) -> np.ndarray:
    """P for every character j at once (entry 0 is the principal character)."""
    q = require_odd_prime(q)
    S = _residue_sums(q, params)
    return np.real((q - 1) * np.fft.ifft(S))


def prime_sum_mean(q: int, params: ExtremalParams) -> float:
    """Family average of P by orthogonality: sum over chi != chi0 of chi(n) is q-2, -1 or 0."""
    q = require_odd_prime(q)
    ns, w = _weighted_prime_powers(params)
    if len(ns) == 0:
        return 0.0
    r = ns % q
    c = np.where(r == 1, q - 2.0, np.where(r == 0, 0.0, -1.0))
    return math.fsum(np.real(w) * c) / (q - 2)


def prime_sum_mean_direct(q: int, params: ExtremalParams) -> float:
    """Same average by looping over the characters (reference path)."""
    vals = [prime_term(chi, params) for chi in enumerate_characters(q)[1:]]
    return math.fsum(vals) / (q - 2)


@dataclass(frozen=True)
class PrimeSquareMean:
    direct: float
    congruence_pair: float


def prime_sum_mean_square(q: int, params: ExtremalParams, direct: bool | None = None) -> PrimeSquareMean:
    """Family average of P^2, by character loop and by the congruence-pair expansion.

    With S_r the weight sum over n = r mod q,
        sum_{chi != chi0} P^2 = ((q-1) Re sum_r S_r S_{1/r} + (q-1) sum_r |S_r|^2
                                 - Re (sum S)^2 - |sum S|^2) / 2.
    The direct loop is skipped for q > 2000 unless requested.
    """
    q = require_odd_prime(q)
    S = _residue_sums(q, params)  # indexed by discrete log k; inverse is -k
    inv = S[(-np.arange(q - 1)) % (q - 1)]
    tot = _fsum_c(S)
    pair = (
        (q - 1) * math.fsum(np.real(S * inv))
        + (q - 1) * math.fsum(np.abs(S) ** 2)
        - (tot * tot).real
        - abs(tot) ** 2
    ) / 2
    cp = pair / (q - 2)
    if direct is None:
        direct = q <= 2000
    if direct:
        d = math.fsum(prime_term(chi, params) ** 2 for chi in enumerate_characters(q)[1:]) / (q - 2)
    else:
        d = math.nan
    return PrimeSquareMean(d, cp)


# --------------------------------------------------------------- gamma factor

def _gl_panels(a: float, b: float, width: float, nodes: int = 16):
    n = max(1, int(math.ceil((b - a) / width)))
    edges = np.linspace(a, b, n + 1)
    gx, gw = np.polynomial.legendre.leggauss(nodes)
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])
    return (mid[:, None] + half[:, None] * gx).ravel(), (half[:, None] * gw).ravel()


def _gamma_term_fourier(params: ExtremalParams, a: int, panels: int) -> float:
    table = transform_table(params)
    f0 = float(np.real(table(0.0)))
    sigma = 0.25 + 0.5 * a
    tmax = 4 * math.pi * params.delta
    t, w = _gl_panels(0.0, tmax, tmax / panels, 20)
    fh = table(t / (4 * math.pi))
    integrand = f0 * np.exp(-t) / t - np.exp(-sigma * t) * fh / (-np.expm1(-t))
    body = _fsum_c(integrand * w)
    return (body.real + f0 * special.exp1(tmax)) / (2 * math.pi)


@lru_cache(maxsize=256)
def gamma_term(params: ExtremalParams, a: int) -> tuple[float, float]:
    """(1/2 pi) int R(x) Re psi(1/4 + a/2 + ix/2) dx via the Fourier side.

    Uses psi(z) = int_0^inf (e^-t/t - e^{-zt}/(1 - e^-t)) dt, which turns the
    slowly converging real-line integral into a finite one because R^ is
    supported in |u| < delta.  Returns (value, estimated error).
    """
    v1 = _gamma_term_fourier(params, a, 64)
    v2 = _gamma_term_fourier(params, a, 32)
    return v1, abs(v1 - v2) + transform_table(params).abs_error_bound * 2


def smooth_density(t, q: int, a: int):
    """(1/2 pi)(log(q/pi) + Re psi(1/4 + a/2 + it/2)), the smooth zero density."""
    t = np.asarray(t, dtype=float)
    return (math.log(q / math.pi) + digamma_vec(0.25 + 0.5 * a + 0.5j * t).real) / (2 * math.pi)


def _smooth_integral(params: ExtremalParams, q: int, a: int, lo: float, hi: float) -> float:
    width = min(0.25 / params.delta, 0.5)
    x, w = _gl_panels(lo, hi, width)
    r = np.real(selberg_r(params, x))
    return math.fsum(r * smooth_density(x, q, a) * w)


# ------------------------------------------------------------ explicit formula

@dataclass(frozen=True)
class ExplicitFormulaReport:
    q: int
    j: int
    params: ExtremalParams
    zero_side: float
    main_term: float
    gamma_term: float
    prime_term: float
    residual: float
    truncation_height: float
    tail_bound: float
    zero_sum_truncated: float
    smooth_tail: float
    zero_count: int

    @property
    def within_bound(self) -> bool:
        return abs(self.residual) <= self.tail_bound


def _r_derivative(params: ExtremalParams, x):
    # complex step: R is real on the real line
    h = 1e-30
    return np.imag(selberg_r(params, np.asarray(x, dtype=float) + 1j * h)) / h


def _tail_bound_side(params: ExtremalParams, q: int, H: float, s0: float, side: int) -> float:
    """Bound on |int_{|t|>H} R d(N - N_smooth)| on one side, by parts.

    N - N_smooth on t > 0 is S(t) - S(0); we bound it by |S(0)| + C log(q(t+2)).
    """
    d, h, t0 = params.delta, params.half_length, params.center_T0
    env = lambda t: abs(s0) + S_ENVELOPE_C * np.log(q * (np.abs(t) + 2))  # noqa: E731
    boundary = abs(float(np.real(selberg_r(params, side * H)))) * env(H)
    X1 = max(H, abs(t0) + h) + 400.0 / d
    x, w = _gl_panels(H, X1, 0.125 / d)
    body = math.fsum(np.abs(_r_derivative(params, side * x)) * env(x) * w) * 1.05

    def far(t):
        m = d * (t - abs(t0) - h)
        return d * (1 / (math.pi * m * m) + 1 / m**3) * float(env(t))

    fv, _ = integrate.quad(far, X1, np.inf, limit=200)
    return boundary + body + fv


def _zeros_for(chi: DirichletCharacter, H: float, zeros: ModulusZeros | None) -> np.ndarray:
    if zeros is None:
        zeros = ZeroStore().ensure(chi.q, -H, H)
    if not zeros.covers(-H, H):
        raise MissingZeroError(f"zeros for (q={chi.q}, j={chi.j}) not available up to height {H}")
    g = zeros.gammas(chi.j)
    return g[np.abs(g) <= H]


def explicit_formula_check(
    chi: DirichletCharacter,
    params: ExtremalParams,
    truncation_height: float,
    zeros: ModulusZeros | None = None,
) -> ExplicitFormulaReport:
    """Both sides of the explicit formula for f = R, with the zero sum truncated at the given height.

    zero_side = sum_{|gamma| <= H} R(gamma) + (smooth zero density integrated against R
    over |t| > H); the second piece is exact, so the residual only carries the
    oscillating part of the zero tail, which ``tail_bound`` controls.
    """
    if chi.is_principal:
        raise ValueError("explicit formula check needs a non-principal character")
    H = float(truncation_height)
    if H <= 0:
        raise ValueError("truncation height must be positive")
    q, a = chi.q, chi.a
    gam = _zeros_for(chi, H, zeros)
    zsum = math.fsum(np.real(selberg_r(params, gam)))

    f0 = float(np.real(transform_table(params)(0.0)))
    main = f0 / (2 * math.pi) * math.log(q / math.pi)
    g_val, g_err = gamma_term(params, a)
    prime = prime_term(chi, params) / math.pi
    inner = _smooth_integral(params, q, a, -H, H)
    smooth_tail = main + g_val - inner
    zero_side = zsum + smooth_tail
    residual = zero_side - (main + g_val - prime)

    s_vals, _ = s_values_all(0.0, q, sorted({chi.j, chi.conj().j}))
    s0 = float(s_vals[chi.j])
    tail = _tail_bound_side(params, q, H, s0, 1) + _tail_bound_side(params, q, H, s0, -1)
    ns, _ = _weighted_prime_powers(params)
    lam_sum = float(np.sum(np.log(np.maximum(ns, 2)) / np.sqrt(np.maximum(ns, 1)))) if len(ns) else 0.0
    quad_err = g_err + 1e-10 + transform_table(params).abs_error_bound * lam_sum / math.pi
    return ExplicitFormulaReport(
        q=q, j=chi.j, params=params, zero_side=zero_side, main_term=main, gamma_term=g_val,
        prime_term=prime, residual=residual, truncation_height=H, tail_bound=tail + quad_err,
        zero_sum_truncated=zsum, smooth_tail=smooth_tail, zero_count=len(gam),
    )


# ----------------------------------------------------------- GRH brackets

@dataclass(frozen=True)
class Bracket:
    """Per-character lower/upper values for S~(T, chi) implied by R- <= 1 <= R+ under GRH."""
    q: int
    T: float
    delta: float
    lower: np.ndarray
    upper: np.ndarray

    @property
    def mean_bound(self) -> float:
        n = len(self.upper)
        return max(math.fsum(self.upper) / n, -math.fsum(self.lower) / n)

    @property
    def mean_square_bound(self) -> float:
        n = len(self.upper)
        return (math.fsum(self.upper**2) + math.fsum(self.lower**2)) / n


def grh_bracket(q: int, T: float, delta: float, delta_cap: float | None = None) -> Bracket:
    """D-(chi) <= S~(T, chi) <= D+(chi) with
    D(chi) = (R^(0)/2pi - T/pi) log(q/pi) + Gamma_R(chi) - G_T(chi) - P(chi)/pi.
    """
    q = require_odd_prime(q)
    if T <= 0:
        raise ValueError("T must be positive")
    cap = max(delta, 1.6) if delta_cap is None else delta_cap
    par = np.arange(1, q - 1) % 2  # a = 1 for odd j
    gt = np.array([gamma_integral(1 - a, -T, T) / (2 * math.pi) for a in (0, 1)])
    out = {}
    for sign in (1, -1):
        p = ExtremalParams(delta, T, 0.0, sign, cap)
        f0 = float(np.real(transform_table(p)(0.0)))
        gr = np.array([gamma_term(p, a)[0] for a in (0, 1)])
        P = prime_terms_all(q, p)[1:]
        out[sign] = (f0 / (2 * math.pi) - T / math.pi) * math.log(q / math.pi) + gr[par] - gt[par] - P / math.pi
    return Bracket(q, T, delta, out[-1], out[1])


# ------------------------------------------------------------ ensembles

@dataclass
class EnsembleStats:
    q: int
    T: float
    mean_tilde_s: float
    mean_square_tilde_s: float
    lowest_zero_min: float
    lowest_zero_max: float
    central_order_mean: float
    proportion: dict[float, float]
    T0: float = 0.0
    mean_count: float = math.nan
    identity_residual: float = math.nan
    tilde_s: np.ndarray = field(default=None, repr=False)
    lowest_zero: np.ndarray = field(default=None, repr=False)

    def as_dict(self) -> dict:
        return {
            "q": self.q, "T0": self.T0, "T": self.T,
            "mean_tilde_s": self.mean_tilde_s,
            "mean_square_tilde_s": self.mean_square_tilde_s,
            "lowest_zero_min": self.lowest_zero_min,
            "lowest_zero_max": self.lowest_zero_max,
            "central_order_mean": self.central_order_mean,
            "mean_count": self.mean_count,
            "identity_residual": self.identity_residual,
            "proportion": {str(b): v for b, v in self.proportion.items()},
        }


def _proportions(norm_dist: np.ndarray, betas) -> dict[float, float]:
    n = len(norm_dist)
    return {float(b): int(np.count_nonzero(norm_dist < b)) / n for b in sorted(betas)}


def _cover_nearest(store: ZeroStore, q: int, center: float, start: float, max_radius: float = 60.0):
    """Grow a window around ``center`` until every character has a zero inside it."""
    W = start
    while True:
        mz = store.ensure(q, center - W, center + W)
        ok = True
        for j in range(1, q - 1):
            g = mz.gammas(j)
            if not np.any(np.abs(g - center) <= W):
                ok = False
                break
        if ok:
            return mz
        if W >= max_radius:
            raise MissingZeroError(f"q={q}: character {j} has no zero within {W} of {center}")
        W = min(2 * W, max_radius)


def _central_order(mz: ModulusZeros, q: int, t0: float) -> np.ndarray:
    z = np.abs(hardy_z_all([t0], q)[0, 1:])
    order = np.array([np.count_nonzero(np.abs(mz.gammas(j) - t0) <= ZERO_TOL) for j in range(1, q - 1)])
    return np.where(z < CENTRAL_ZERO_TOL, np.maximum(order, 1), order)


def ensemble_stats(
    q: int, T: float, betas=DEFAULT_BETAS, store: ZeroStore | None = None, identity_tol: float = IDENTITY_TOL
) -> EnsembleStats:
    """Mean and mean square of S~(T, chi), lowest-zero statistics and proportions."""
    q = require_odd_prime(q)
    if T <= 0:
        raise ValueError("T must be positive")
    betas = tuple(betas) if betas else DEFAULT_BETAS
    store = store if store is not None else ZeroStore()
    L = math.log(q)
    H = max(T, 2 * math.pi * max(betas) / L) + 0.5
    store.ensure(q, -H, H)
    mz = _cover_nearest(store, q, 0.0, H)

    ts = tilde_s_all(T, q)[1:]
    counts = np.array([weighted_count(mz.gammas(j), T) for j in range(1, q - 1)])
    gt = np.array([gamma_integral(1 - a, -T, T) / (2 * math.pi) for a in (0, 1)])
    gchi = gt[np.arange(1, q - 1) % 2]
    main = T / math.pi * math.log(q / math.pi)
    per = counts - main - ts - gchi
    bad = np.flatnonzero(np.abs(per) >= identity_tol)
    if len(bad):
        j = int(bad[0]) + 1
        raise NumericalConsistencyError(
            f"zero count identity fails for q={q} j={j} T={T}: discrepancy {per[bad[0]]:.3e}"
        )
    n = q - 2
    mean_count = math.fsum(counts) / n
    mean_s = math.fsum(ts) / n
    lowest = np.array([np.min(np.abs(mz.gammas(j))) for j in range(1, q - 1)]) * L / (2 * math.pi)
    central = _central_order(mz, q, 0.0)
    return EnsembleStats(
        q=q, T=T,
        mean_tilde_s=mean_s,
        mean_square_tilde_s=math.fsum(ts * ts) / n,
        lowest_zero_min=float(lowest.min()),
        lowest_zero_max=float(lowest.max()),
        central_order_mean=math.fsum(central) / n,
        proportion=_proportions(lowest, betas),
        mean_count=mean_count,
        identity_residual=mean_count - main - mean_s - math.fsum(gchi) / n,
        tilde_s=ts,
        lowest_zero=lowest,
    )


def shifted_ensemble_stats(
    q: int, T0: float, h: float, betas=DEFAULT_BETAS, store: ZeroStore | None = None,
    identity_tol: float = IDENTITY_TOL,
) -> EnsembleStats:
    """Statistics of S~(T0, h, chi) = S(T0 + h) - S(T0 - h) and of the zero nearest to T0."""
    q = require_odd_prime(q)
    if h <= 0:
        raise ValueError("h must be positive")
    betas = tuple(betas) if betas else DEFAULT_BETAS
    store = store if store is not None else ZeroStore()
    L = math.log(q)
    W = max(h, 2 * math.pi * max(betas) / L) + 0.5
    mz = _cover_nearest(store, q, T0, W)

    hi, _ = s_values_all(T0 + h, q)
    lo, _ = s_values_all(T0 - h, q)
    ts = (hi - lo)[1:]
    counts = []
    for j in range(1, q - 1):
        g = mz.gammas(j) - T0
        counts.append(weighted_count(g, h))
    counts = np.array(counts)
    gt = np.array([gamma_integral(1 - a, T0 - h, T0 + h) / (2 * math.pi) for a in (0, 1)])
    gchi = gt[np.arange(1, q - 1) % 2]
    main = h / math.pi * math.log(q / math.pi)
    per = counts - main - ts - gchi
    bad = np.flatnonzero(np.abs(per) >= identity_tol)
    if len(bad):
        raise NumericalConsistencyError(
            f"window count identity fails for q={q} j={int(bad[0]) + 1} at T0={T0}, h={h}: "
            f"discrepancy {per[bad[0]]:.3e}"
        )
    n = q - 2
    mean_count = math.fsum(counts) / n
    mean_s = math.fsum(ts) / n
    nearest = np.array([np.min(np.abs(mz.gammas(j) - T0)) for j in range(1, q - 1)]) * L / (2 * math.pi)
    central = _central_order(mz, q, T0)
    return EnsembleStats(
        q=q, T=h, T0=T0,
        mean_tilde_s=mean_s,
        mean_square_tilde_s=math.fsum(ts * ts) / n,
        lowest_zero_min=float(nearest.min()),
        lowest_zero_max=float(nearest.max()),
        central_order_mean=math.fsum(central) / n,
        proportion=_proportions(nearest, betas),
        mean_count=mean_count,
        identity_residual=mean_count - main - mean_s - math.fsum(gchi) / n,
        tilde_s=ts,
        lowest_zero=nearest,
    )


# ------------------------------------------------------------ oscillation

@dataclass(frozen=True)
class OscillationRow:
    q: int
    T0: float
    beta: float
    baseline: float
    constant_weight: float
    u_weight: float

    @property
    def constant_ratio(self) -> float:
        return self.constant_weight / self.baseline

    @property
    def u_ratio(self) -> float:
        return self.u_weight / self.baseline


def oscillation_report(qs, T0: float, beta: float) -> list[OscillationRow]:
    """Weighted transform-square integrals for the shifted problem, two readings of the weight.

    ``constant_weight`` uses cos(2 pi T0 Delta)^2 with Delta = log q / 2pi (independent
    of u); ``u_weight`` uses cos(2 pi T0 Delta u)^2 inside the integral.  Both are
    divided by the unweighted int_0^1 u (R+^2 + R-^2) du and reported side by side.
    """
    tables = [transform_table(ExtremalParams(1.0, beta, 0.0, s)) for s in (1, -1)]

    def sq(u):
        return sum(float(np.real(t(u))) ** 2 for t in tables)

    base, _ = integrate.quad(lambda u: u * sq(u), 0, 1, epsabs=1e-12, limit=200)
    rows = []
    for q in qs:
        q = require_odd_prime(q)
        L = math.log(q)
        lo = math.log(2) / L
        part, _ = integrate.quad(lambda u: u * sq(u), lo, 1, epsabs=1e-12, limit=200)
        const = math.cos(T0 * L) ** 2 * part
        uw, _ = integrate.quad(
            lambda u: u * math.cos(T0 * L * u) ** 2 * sq(u), lo, 1, epsabs=1e-12, limit=400
        )
        rows.append(OscillationRow(q, T0, beta, base, const, uw))
    return rows
