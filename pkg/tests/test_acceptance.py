"""Acceptance oracles, one test per criterion; each records a PASS/FAIL line for the summary."""

import cmath
import math
import subprocess
import sys
import time

import numpy as np
import pytest

from lowzeros import analysis, bounds
from lowzeros.characters import enumerate_characters, make_character
from lowzeros.extremal import ExtremalParams, fourier_r, indicator, l1_distance, selberg_r_real
from lowzeros.lfunc import l_value, tilde_s_all, weighted_count
from lowzeros.specialfn import digamma, gamma_integral, hurwitz_zeta, log_gamma

ENSEMBLE_QS = (101, 211, 401, 601, 997)
ENSEMBLE_BETAS = (0.3, 0.5, 1.0)


def _grid():
    return [(q, 2 * math.pi * b / math.log(q), b) for q in ENSEMBLE_QS for b in ENSEMBLE_BETAS]


@pytest.fixture(scope="module")
def ensemble(zero_store):
    return {(q, b): analysis.ensemble_stats(q, T, store=zero_store) for q, T, b in _grid()}


def test_c01_extremal_properties(accept):
    rng = np.random.default_rng(20240601)
    t_start = time.perf_counter()
    worst = {"slack": math.inf, "l1": 0.0, "f0": 0.0, "out": 0.0}
    for _ in range(20):
        d = float(rng.uniform(0.3, 1.6))
        t0 = float(rng.choice([0.0, 5.0]))
        h = float(rng.uniform(0.1, 2.0))
        span = h + 10.0 / d
        xs = np.linspace(t0 - span, t0 + span, 10_000)
        for sign in (1, -1):
            p = ExtremalParams(d, h, t0, sign)
            slack = np.min(sign * (selberg_r_real(p, xs) - indicator(p, xs)))
            worst["slack"] = min(worst["slack"], float(slack))
            l1, _ = l1_distance(p)
            worst["l1"] = max(worst["l1"], abs(l1 - 1 / d))
            worst["f0"] = max(worst["f0"], abs(fourier_r(p, 0.0).value - (2 * h + sign / d)))
            worst["out"] = max(worst["out"], abs(fourier_r(p, 1.25 * d).value))
    elapsed = time.perf_counter() - t_start
    ok = (worst["slack"] >= -1e-12 and worst["l1"] < 1e-6 and worst["f0"] < 1e-6
          and worst["out"] < 1e-6 and elapsed <= 120)
    accept(1, ok, f"min slack {worst['slack']:.2e}, |L1 - 1/D| {worst['l1']:.1e}, "
                  f"|f(0) - (2h +- 1/D)| {worst['f0']:.1e}, |f(1.25D)| {worst['out']:.1e}, {elapsed:.0f}s")
    assert ok


def test_c02_explicit_formula(accept, zero_store):
    t_start = time.perf_counter()
    residuals, failures, cases = [], [], 0
    # the listed moduli give 32 cases; 3 and 13 complete the 48-case suite
    for q in (3, 5, 7, 11, 13, 31):
        mz = zero_store.ensure(q, -40, 40)
        for d in (0.5, 1.0):
            for T in (0.3, 1.0):
                for sign in (1, -1):
                    cases += 1
                    p = ExtremalParams(d, T, 0.0, sign)
                    for chi in enumerate_characters(q)[1:]:
                        r = analysis.explicit_formula_check(chi, p, 40.0, mz)
                        residuals.append(abs(r.residual))
                        if not r.within_bound:
                            failures.append((q, chi.j, d, T, sign, r.residual, r.tail_bound))
    med = float(np.median(residuals))
    elapsed = time.perf_counter() - t_start
    ok = not failures and med < 1e-2 and elapsed <= 600
    accept(2, ok, f"{cases} parameter cases x all characters = {len(residuals)} checks, "
                  f"{len(failures)} outside tail bound, median |residual| {med:.2e}, max {max(residuals):.2e}, "
                  f"{elapsed:.0f}s")
    assert ok, failures[:5]


def test_c03_counting_identity(accept, zero_store):
    rng = np.random.default_rng(7)
    worst = 0.0
    for q in (5, 101):
        mz = zero_store.ensure(q, -15.5, 15.5)
        gt = {}
        for T in rng.uniform(0, 15, 20):
            T = float(T) if T > 0 else 1e-3
            ts = tilde_s_all(T, q)
            for a in (0, 1):
                gt[a] = gamma_integral(1 - a, -T, T) / (2 * math.pi)
            for j in range(1, q - 1):
                n = weighted_count(mz.gammas(j), T)
                rhs = T / math.pi * math.log(q / math.pi) + ts[j] + gt[j % 2]
                worst = max(worst, abs(n - rhs))
    ok = worst < 1e-6
    accept(3, ok, f"max |N - RHS| = {worst:.2e} over q in (5, 101), 20 heights each")
    assert ok


def test_c04_mean_bound(accept, ensemble):
    fit = bounds.fit_thm1_constant([(q, T) for q, T, _ in _grid()])
    rows, ok = [], True
    for q, T, b in _grid():
        es = ensemble[(q, b)]
        rep = bounds.thm1_bound(q, T, envelope_constant=fit.constant)
        m = es.mean_tilde_s
        good = abs(m) <= rep.value and -0.6 <= m <= 0.6
        ok &= good
        rows.append(f"{q}/{b}:{m:+.3f}<={rep.value:.3f}")
    accept(4, ok, f"envelope C={fit.constant:.3g} (lsq {fit.lsq_constant:.3g}, resid {fit.residual:.2g}); "
                  + " ".join(rows))
    assert ok


def test_c05_mean_square_bound(accept, ensemble):
    grid = [(q, T, math.log(q) / (2 * math.pi)) for q, T, _ in _grid()]
    fit = bounds.fit_thm2_constant(grid)
    rows, ok = [], True
    for (q, T, b), (_, _, d) in zip(_grid(), grid):
        es = ensemble[(q, b)]
        ip, im = bounds.thm2_integrals(T, d)
        rep = bounds.thm2_bound(q, T, d, ip, im, envelope_constant=fit.constant)
        ms = es.mean_square_tilde_s
        good = ms <= rep.value and (b > 0.5 or ms <= 5)
        ok &= good
        rows.append(f"{q}/{b}:{ms:.3f}<={rep.value:.3f}")
    accept(5, ok, f"envelope C={fit.constant:.3g}; " + " ".join(rows))
    assert ok


def test_c06_proportion_constants(accept):
    t_start = time.perf_counter()
    c_half = bounds.cor2_lower_bound(0.5).value
    c_edge = bounds.cor2_lower_bound(0.25 + 1e-9).value
    cross = bounds.crossing_finder("zhao", "cor2", 0.51, 0.9)
    root = bounds.hr_positive_root()
    lim = bounds.hr_bound(1e4)
    c, bstar = bounds.zhao_constants()
    elapsed = time.perf_counter() - t_start
    ok = (c_half > 0.10 and c_edge < 1e-6 and 0.53 <= cross <= 0.58 and abs(root - 0.633) <= 1e-3
          and abs(lim - 0.891) <= 1e-3 and abs(bstar - 0.909) <= 1e-3 and elapsed <= 60)
    accept(6, ok, f"cor2(0.5)={c_half:.5f} cor2(1/4+)={c_edge:.1e} crossing={cross:.5f} hr root={root:.6f} "
                  f"hr(1e4)={lim:.6f} zhao switch={bstar:.6f} (c={c:.6f}) {elapsed:.0f}s")
    assert ok


def test_c07_lowest_zero_trend(accept, ensemble):
    ok, rows, cmin, cmax = True, [], -math.inf, -math.inf
    for q in ENSEMBLE_QS:
        es = ensemble[(q, 0.3)]
        lq = math.log(q)
        cmin = max(cmin, (es.lowest_zero_min - 0.25) * lq)
        cmax = max(cmax, (0.25 - es.lowest_zero_max) * lq)
        ok &= es.lowest_zero_min <= 0.30 and es.lowest_zero_max >= 0.20 and es.central_order_mean == 0
        rows.append(f"{q}:[{es.lowest_zero_min:.4f},{es.lowest_zero_max:.3f}]")
    accept(7, ok, " ".join(rows) + f"; smallest C with min <= 1/4 + C/log q: {cmin:.3g}, with max >= 1/4 - C/log q: {cmax:.3g}; "
                  "no central zeros")
    assert ok


def test_c08_prime_sum_paths(accept):
    worst_mean, worst_sq = 0.0, 0.0
    for q in (3, 5, 7, 11, 13, 17, 19, 23, 29, 31):
        for d in (0.5, 1.0):
            for T in (0.3, 1.0):
                for sign in (1, -1):
                    p = ExtremalParams(d, T, 0.0, sign)
                    a = analysis.prime_sum_mean(q, p)
                    b = analysis.prime_sum_mean_direct(q, p)
                    worst_mean = max(worst_mean, abs(a - b))
                    sq = analysis.prime_sum_mean_square(q, p, direct=True)
                    worst_sq = max(worst_sq, abs(sq.direct - sq.congruence_pair))
    ok = worst_mean <= 1e-10 and worst_sq <= 1e-9
    accept(8, ok, f"mean: shortcut vs loop {worst_mean:.1e}; square: loop vs congruence pairs {worst_sq:.1e}")
    assert ok


def test_c09_golden_values(accept):
    errs = {
        "zeta(2,1)": abs(hurwitz_zeta(2, 1.0) - math.pi**2 / 6),
        "zeta(2,1/2)": abs(hurwitz_zeta(2, 0.5) - math.pi**2 / 2),
        "psi(1)": abs(digamma(1) + np.euler_gamma),
        "logGamma(1/2)": abs(log_gamma(0.5) - 0.5 * math.log(math.pi)),
    }
    chi = make_character(3, 1)
    l_err = abs(l_value(1.0 + 0j, chi) - math.pi / (3 * math.sqrt(3)))
    ok = all(e <= 1e-12 for e in errs.values()) and l_err <= 1e-10
    accept(9, ok, " ".join(f"{k}:{v:.1e}" for k, v in errs.items()) + f" L(1,chi3):{l_err:.1e}")
    assert ok
    assert cmath.isfinite(l_value(1.0 + 0j, chi))


def test_c10_determinism(accept, tmp_path):
    cache = tmp_path / "cache"
    cmd = [sys.executable, "-m", "lowzeros", "stats", "--q", "101", "--cache-dir", str(cache)]
    warm = subprocess.run(cmd, capture_output=True, check=True)
    first = subprocess.run(cmd, capture_output=True, check=True)
    second = subprocess.run(cmd, capture_output=True, check=True)
    ok = first.stdout == second.stdout and len(first.stdout) > 0
    accept(10, ok, f"two warm-cache runs of `stats --q 101`: {len(first.stdout)} bytes each, "
                   f"{'identical' if ok else 'different'} (cold run identical too: {warm.stdout == first.stdout})")
    assert ok
