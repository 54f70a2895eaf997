"""Closed-form evaluators for the mean / mean-square bounds and the proportion bounds.

Every evaluator returns a ``BoundReport`` whose components recombine to the
value.  Components are labelled ``exact`` (closed form or certified
quadrature) or ``fitted`` (an O(.) envelope with an empirically fitted
constant); ``info`` carries auxiliary numbers that are not part of the sum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import integrate, optimize, special

from .analysis import grh_bracket, prime_sum_mean, prime_sum_mean_square
from .extremal import ExtremalParams, transform_square_integral

BISECT_TOL = 1e-6
LOG2_FREQ = math.log(2) / (2 * math.pi)
# largest delta used when evaluating the explicit GRH intermediate bound (prime sums to ~1.9e6)
DELTA_EXPLICIT_MAX = 2.3


class CrossingNotFound(ValueError):
    pass


@dataclass
class BoundReport:
    name: str
    inputs: dict
    value: float
    components: dict[str, float]
    labels: dict[str, str]
    combination: str = "sum"
    info: dict = field(default_factory=dict)

    def recombine(self) -> float:
        if self.combination == "sum":
            return math.fsum(self.components.values())
        if self.combination == "ratio":
            return self.components["numerator"] / self.components["denominator"]
        raise ValueError(f"unknown combination {self.combination!r}")

    def as_dict(self) -> dict:
        return {
            "name": self.name, "inputs": dict(self.inputs), "value": self.value,
            "components": dict(self.components), "labels": dict(self.labels),
            "combination": self.combination, "info": dict(self.info),
        }


@dataclass(frozen=True)
class FitResult:
    constant: float  # sup fit: smallest C with target <= model everywhere on the grid
    lsq_constant: float
    residual: float  # rms of (C * shape - excess) at the sup constant
    points: int


def _fit(excess: np.ndarray, shape: np.ndarray) -> FitResult:
    c_sup = max(0.0, float(np.max(excess / shape)))
    c_lsq = float(np.dot(excess, shape) / np.dot(shape, shape))
    resid = float(np.sqrt(np.mean((c_sup * shape - excess) ** 2)))
    return FitResult(c_sup, c_lsq, resid, len(excess))


def _check_qT(q: int, T: float) -> None:
    if T <= 0:
        raise ValueError("T must be positive")
    if q < 3:
        raise ValueError("q must be an odd prime")


def ceil_factor(q: int, delta: float) -> int:
    """ceil(e^{2 pi delta} / q), robust to the rounding of exp(log q) at delta = log q / 2 pi."""
    x = math.exp(2 * math.pi * delta) / q
    return max(1, math.ceil(x - 1e-12 * x))


# --------------------------------------------------------------- mean of S~

def thm1_leading(q: int, T: float) -> float:
    return 0.5 + math.log(T + 1) / (2 * math.log(q * math.log(T + 3)))


def thm1_shape(q: int, T: float) -> float:
    lq = math.log(q)
    ll = math.log(math.log(q * math.log(T + 3)))
    return (lq + math.log(T + 1) * ll) / (lq**2 + math.log(math.log(T + 3)) ** 2)


def thm1_delta_star(q: int, T: float) -> float:
    """pi Delta = log(q log q(T+1)) - log log(q log q(T+1))."""
    Lq = math.log(q * math.log(q * (T + 1)))
    return (Lq - math.log(Lq)) / math.pi


def thm1_explicit(q: int, T: float) -> tuple[float, float]:
    """Exact GRH intermediate bound on |E[S~]| at the chosen delta (capped); returns (value, delta)."""
    d = min(thm1_delta_star(q, T), DELTA_EXPLICIT_MAX)
    return grh_bracket(q, T, d, delta_cap=DELTA_EXPLICIT_MAX).mean_bound, d


def fit_thm1_constant(grid) -> FitResult:
    ex, sh = [], []
    for q, T in grid:
        v, _ = thm1_explicit(q, T)
        ex.append(v - thm1_leading(q, T))
        sh.append(thm1_shape(q, T))
    return _fit(np.array(ex), np.array(sh))


def thm1_bound(q: int, T: float, envelope_constant: float | None = None) -> BoundReport:
    """1/2 + log(T+1)/(2 log(q log(T+3))) + C * envelope shape.

    Without an explicit constant, C is fitted at this single (q, T) so that the
    bound dominates the exact GRH intermediate bound there.
    """
    _check_qT(q, T)
    lead_log = math.log(T + 1) / (2 * math.log(q * math.log(T + 3)))
    shape = thm1_shape(q, T)
    explicit, d_used = thm1_explicit(q, T)
    if envelope_constant is None:
        envelope_constant = max(0.0, (explicit - 0.5 - lead_log) / shape)
        fit_note = "single-point sup fit"
    else:
        fit_note = "supplied"
    dstar = thm1_delta_star(q, T)
    Lq = math.log(q * math.log(q * (T + 1)))
    post = 0.5 + 0.5 * (math.log(T + 1) - math.log(math.log(q * (T + 1))) + math.log(Lq)) / (Lq - math.log(Lq))
    comps = {"leading_half": 0.5, "leading_log": lead_log, "envelope": envelope_constant * shape}
    return BoundReport(
        "thm1", {"q": q, "T": T}, math.fsum(comps.values()), comps,
        {"leading_half": "exact", "leading_log": "exact", "envelope": "fitted"},
        info={
            "envelope_constant": envelope_constant, "envelope_fit": fit_note, "envelope_shape": shape,
            "delta_star": dstar, "delta_used": d_used,
            "intermediate_main": math.log(q * (T + 1)) / (2 * math.pi * dstar),
            "post_choice_main": post, "grh_explicit": explicit,
        },
    )


# -------------------------------------------------------- mean square of S~

def thm2_shape(q: int, T: float, delta: float) -> float:
    c = ceil_factor(q, delta)
    lqT = math.log(q * (T + 1))
    return (
        c * min(1.0, T * T + delta**-2)
        + math.exp(2 * math.pi * delta) / (q * math.sqrt(delta))
        + lqT / delta**2 * (1 + math.exp(math.pi * delta) / q)
    )


def thm2_integrals(T: float, delta: float) -> tuple[float, float]:
    """int_{log2/2pi}^{delta} u R^(u)^2 du for the majorant and the minorant."""
    lo = min(LOG2_FREQ, delta)
    cap = max(delta, 1.6)
    return tuple(
        transform_square_integral(ExtremalParams(delta, T, 0.0, s, cap), lo, delta) for s in (1, -1)
    )


def thm2_simplified(q: int, T: float) -> float:
    """(2/pi^2) min{log log q, log(T log q + 1)} without the O_N(1)."""
    lq = math.log(q)
    return 2 / math.pi**2 * min(math.log(lq), math.log(T * lq + 1))


def thm2_explicit(q: int, T: float, delta: float) -> float:
    return grh_bracket(q, T, delta, delta_cap=max(delta, 1.6)).mean_square_bound


def fit_thm2_constant(grid) -> FitResult:
    """grid of (q, T, delta)."""
    ex, sh = [], []
    for q, T, d in grid:
        ip, im = thm2_integrals(T, d)
        rep = thm2_bound(q, T, d, ip, im, envelope_constant=0.0)
        ex.append(thm2_explicit(q, T, d) - rep.value)
        sh.append(thm2_shape(q, T, d))
    return _fit(np.array(ex), np.array(sh))


def thm2_bound(
    q: int, T: float, delta: float, integral_plus: float, integral_minus: float,
    envelope_constant: float | None = None,
) -> BoundReport:
    _check_qT(q, T)
    if delta <= 0:
        raise ValueError("delta must be positive")
    c = ceil_factor(q, delta)
    main = 2 * (math.log(q * (T + 1)) / (2 * math.pi * delta)) ** 2
    integ = 2 * c * (integral_plus + integral_minus)
    shape = thm2_shape(q, T, delta)
    if envelope_constant is None:
        explicit = thm2_explicit(q, T, delta)
        envelope_constant = max(0.0, (explicit - main - integ) / shape)
        fit_note = "single-point sup fit"
    else:
        explicit = math.nan
        fit_note = "supplied"
    comps = {"log_term": main, "integral_term": integ, "envelope": envelope_constant * shape}
    return BoundReport(
        "thm2", {"q": q, "T": T, "delta": delta}, math.fsum(comps.values()), comps,
        {"log_term": "exact", "integral_term": "exact", "envelope": "fitted"},
        info={
            "ceil_factor": c, "integral_plus": integral_plus, "integral_minus": integral_minus,
            "envelope_constant": envelope_constant, "envelope_fit": fit_note, "envelope_shape": shape,
            "grh_explicit": explicit, "simplified_main": thm2_simplified(q, T),
        },
    )


# ------------------------------------------------------------ proportions

@lru_cache(maxsize=1024)
def unit_square_integral(beta: float) -> float:
    """int_0^1 u (R+^2 + R-^2) du for delta = 1, half length beta."""
    return math.fsum(
        transform_square_integral(ExtremalParams(1.0, beta, 0.0, s), 0.0, 1.0) for s in (1, -1)
    )


def _proportion_report(name: str, beta: float, weight: float) -> BoundReport:
    if beta <= 0.25:
        raise ValueError("beta must exceed 1/4")
    J = unit_square_integral(beta)
    num = 4 * beta**2 - 2 * beta + 0.25
    den = 4 * beta**2 - 2 * beta + 2 + weight * J
    ms = 2 + weight * J
    return BoundReport(
        name, {"beta": beta}, num / den, {"numerator": num, "denominator": den},
        {"numerator": "exact", "denominator": "exact"}, combination="ratio",
        info={"square_integral": J, "mean_square": ms, "lambda_endpoint_is_min": ms >= beta},
    )


def cor2_lower_bound(beta: float) -> BoundReport:
    return _proportion_report("cor2", beta, 2.0)


def shifted_cor_bound(beta: float) -> BoundReport:
    return _proportion_report("shifted", beta, 1.0)


@dataclass(frozen=True)
class MinLambda:
    numeric: float
    argmin: float
    closed_form: float

    @property
    def agree(self) -> bool:
        return abs(self.numeric - self.closed_form) <= 1e-9


def min_lambda_ratio(beta: float, mean_square: float) -> MinLambda:
    """min over |lambda| <= 1/2 of (2 beta + lambda)^2 / (4 beta^2 + 4 beta lambda + m).

    The endpoint lambda = -1/2 is the minimiser exactly when m >= beta; both
    the numerical minimum and the endpoint value are returned.
    """
    if beta <= 0.25:
        raise ValueError("beta must exceed 1/4")
    if mean_square < 0:
        raise ValueError("mean square must be non-negative")

    def ratio(lam):
        den = 4 * beta * beta + 4 * beta * lam + mean_square
        if den <= 0:
            raise ValueError("degenerate denominator")
        return (2 * beta + lam) ** 2 / den

    res = optimize.minimize_scalar(ratio, bounds=(-0.5, 0.5), method="bounded", options={"xatol": 1e-12})
    cands = [(ratio(-0.5), -0.5), (ratio(0.5), 0.5), (float(res.fun), float(res.x))]
    val, lam = min(cands)
    return MinLambda(val, lam, ratio(-0.5))


def _hr_excess(beta):
    b2 = beta * beta
    pi2 = math.pi**2
    return (3 + pi2 + 72 * b2 - 8 * pi2 * b2 + 48 * b2 * b2 + 16 * pi2 * b2 * b2) / (12 * pi2 * (4 * b2 - 1) ** 2)


def hr_bound(beta: float) -> float:
    if beta == 0.5:
        raise ZeroDivisionError("pole at beta = 1/2")
    return 1 - _hr_excess(beta)


@lru_cache(maxsize=1)
def zhao_constants() -> tuple[float, float]:
    """(c, b*) with c = min_{b > 1/2} b^2 X(b), X the excess in the 1/2 < beta branch."""
    res = optimize.minimize_scalar(lambda b: b * b * _hr_excess(b), bounds=(0.55, 3.0), method="bounded",
                                   options={"xatol": 1e-12})
    return float(res.fun), float(res.x)


def zhao_bound(beta: float) -> float:
    if beta <= 0.5:
        raise ValueError("beta must exceed 1/2")
    c, bstar = zhao_constants()
    if beta < bstar:
        return 1 / (1 + _hr_excess(beta))
    return 1 / (1 + c / beta**2)


def hr_positive_root() -> float:
    return optimize.brentq(hr_bound, 0.5 + 1e-6, 2.0, xtol=1e-14)


BOUND_IDS = ("cor2", "hr", "zhao", "shifted", "zero")


def evaluate_bound(name: str, beta: float) -> float:
    if name == "cor2":
        return cor2_lower_bound(beta).value
    if name == "shifted":
        return shifted_cor_bound(beta).value
    if name == "hr":
        return hr_bound(beta)
    if name == "zhao":
        return zhao_bound(beta)
    if name == "zero":
        return 0.0
    raise ValueError(f"unknown bound id {name!r}; choose from {BOUND_IDS}")


def crossing_finder(f: str, g: str, lo: float, hi: float, tol: float = BISECT_TOL) -> float:
    """Bisection root of f - g on [lo, hi]."""
    if lo >= hi:
        raise ValueError("empty search interval")
    if f == g:
        raise CrossingNotFound(f"{f} - {g} vanishes identically")
    diff = lambda b: evaluate_bound(f, b) - evaluate_bound(g, b)  # noqa: E731
    dl, dh = diff(lo), diff(hi)
    if dl == 0:
        return lo
    if dh == 0:
        return hi
    if (dl > 0) == (dh > 0):
        raise CrossingNotFound(f"{f} - {g} has no sign change on [{lo}, {hi}]")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        dm = diff(mid)
        if dm == 0:
            return mid
        if (dm > 0) == (dl > 0):
            lo, dl = mid, dm
        else:
            hi = mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class RoughEstimate:
    beta: float
    quadrature: float
    closed_form: float
    log_comparison: float

    @property
    def offset(self) -> float:
        return self.quadrature - self.log_comparison


def rough_integral_estimate(beta: float) -> RoughEstimate:
    """(2/pi^2) int_0^beta sin(2 pi u)^2 / u du, with Cin(4 pi beta)/pi^2 and log(beta+1)/pi^2 beside it."""
    if beta <= 0:
        raise ValueError("beta must be positive")
    val, _ = integrate.quad(
        lambda u: math.sin(2 * math.pi * u) ** 2 / u if u > 0 else 0.0,
        0, beta, epsabs=1e-13, epsrel=1e-12, limit=max(200, int(40 * beta)),
    )
    x = 4 * math.pi * beta
    cin = np.euler_gamma + math.log(x) - special.sici(x)[1]
    return RoughEstimate(beta, 2 / math.pi**2 * val, cin / math.pi**2, math.log(beta + 1) / math.pi**2)


# ---------------------------------------------------- fitted prime-sum envelopes

def prime_mean_envelope(qs, delta: float = 1.0, half_length: float = 0.5) -> FitResult:
    """Fit C in |family mean of the prime sum| <= C e^{pi delta} / (q delta)."""
    ex, sh = [], []
    for q in qs:
        for s in (1, -1):
            v = prime_sum_mean(q, ExtremalParams(delta, half_length, 0.0, s, max(delta, 1.6)))
            ex.append(abs(v))
            sh.append(math.exp(math.pi * delta) / (q * delta))
    return _fit(np.array(ex), np.array(sh))


@dataclass(frozen=True)
class PrimeSquareEnvelope:
    c1: float
    c2: float
    slack_min: float
    rows: tuple


def prime_square_envelope(qs, T: float, delta: float) -> PrimeSquareEnvelope:
    """Smallest C1 + C2 (non-negative) making the second-moment bound hold on the grid."""
    rows = []
    A, b = [], []
    for q in qs:
        for s in (1, -1):
            p = ExtremalParams(delta, T, 0.0, s, max(delta, 1.6))
            val = prime_sum_mean_square(q, p, direct=False).congruence_pair
            c = ceil_factor(q, delta)
            base = c * 2 * math.pi**2 * transform_square_integral(p, min(LOG2_FREQ, delta), delta)
            a1 = c * min(1.0, T * T + delta**-2)
            a2 = math.exp(2 * math.pi * delta) / (q * math.sqrt(delta))
            rows.append((q, s, val, base, a1, a2))
            A.append([-a1, -a2])
            b.append(base - val)
    res = optimize.linprog([1, 1], A_ub=A, b_ub=b, bounds=[(0, None), (0, None)], method="highs")
    c1, c2 = (float(x) for x in res.x)
    slack = min(base + c1 * a1 + c2 * a2 - val for _, _, val, base, a1, a2 in rows)
    return PrimeSquareEnvelope(c1, c2, slack, tuple(rows))
