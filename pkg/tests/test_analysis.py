import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lowzeros import analysis, bounds
from lowzeros.characters import enumerate_characters, make_character
from lowzeros.extremal import ExtremalParams
from lowzeros.lfunc import MissingZeroError, tilde_s_all
from lowzeros.zerocache import ZeroStore


@pytest.fixture(scope="module")
def q101(zero_store):
    T = 2 * math.pi * 0.3 / math.log(101)
    return analysis.ensemble_stats(101, T, store=zero_store)


@pytest.mark.parametrize("sign", [1, -1])
def test_prime_terms_vanish_below_log2(sign):
    p = ExtremalParams(0.1, 0.5, 0.0, sign)
    assert analysis.prime_term(make_character(7, 1), p) == 0.0
    assert analysis.prime_sum_mean(7, p) == 0.0
    sq = analysis.prime_sum_mean_square(7, p)
    assert sq.direct == 0.0 and sq.congruence_pair == 0.0


def test_fft_prime_terms_match_loop():
    p = ExtremalParams(1.0, 0.7, 5.0, 1)
    allp = analysis.prime_terms_all(13, p)
    for chi in enumerate_characters(13)[1:]:
        assert allp[chi.j] == pytest.approx(analysis.prime_term(chi, p), abs=1e-11)


def test_prime_mean_shortcut_q5():
    p = ExtremalParams(1.0, 0.5)
    assert abs(analysis.prime_sum_mean(5, p) - analysis.prime_sum_mean_direct(5, p)) < 1e-10


@settings(max_examples=15, deadline=None)
@given(
    st.sampled_from([3, 7, 11, 13, 29]),
    st.floats(0.15, 1.5),
    st.floats(0.05, 2.0),
    st.sampled_from([0.0, 5.0]),
    st.sampled_from([1, -1]),
)
def test_mean_square_paths_agree(q, d, h, t0, sign):
    sq = analysis.prime_sum_mean_square(q, ExtremalParams(d, h, t0, sign))
    assert abs(sq.direct - sq.congruence_pair) < 1e-9 * max(1.0, abs(sq.direct))


def test_mean_square_skips_loop_for_large_q():
    sq = analysis.prime_sum_mean_square(2003, ExtremalParams(1.0, 0.5))
    assert math.isnan(sq.direct) and sq.congruence_pair >= 0


def test_prime_mean_envelope_reported():
    # envelope |mean| <= C e^{pi delta} / (q delta)
    fit = bounds.prime_mean_envelope([101, 211, 401])
    assert 0 <= fit.constant < 5


@pytest.mark.parametrize("a", [0, 1])
def test_gamma_term_error_small(a):
    val, err = analysis.gamma_term(ExtremalParams(1.0, 0.5, 0.0, 1), a)
    assert math.isfinite(val) and err < 1e-8


def test_explicit_formula_q5_golden(zero_store):
    mz = zero_store.ensure(5, -40, 40)
    for chi in enumerate_characters(5)[1:]:
        r = analysis.explicit_formula_check(chi, ExtremalParams(1.0, 0.5), 40.0, mz)
        assert r.within_bound
        assert abs(r.residual) < 1e-3
        assert r.zero_side == pytest.approx(r.zero_sum_truncated + r.smooth_tail)


def test_explicit_formula_truncation_doubling(zero_store):
    mz = zero_store.ensure(5, -40, 40)
    chi = make_character(5, 1)
    p = ExtremalParams(1.0, 0.5)
    r20 = analysis.explicit_formula_check(chi, p, 20.0, mz)
    r40 = analysis.explicit_formula_check(chi, p, 40.0, mz)
    assert r40.tail_bound < r20.tail_bound
    assert abs(r40.residual) <= abs(r20.residual) or r40.within_bound


def test_explicit_formula_shifted(zero_store):
    mz = zero_store.ensure(7, -40, 40)
    for chi in enumerate_characters(7)[1:]:
        assert analysis.explicit_formula_check(chi, ExtremalParams(0.8, 1.0, 5.0, -1), 40.0, mz).within_bound


def test_explicit_formula_missing_zeros(zero_store):
    mz = zero_store.ensure(5, -10, 10)
    narrow = ZeroStore().ensure(5, -10, 10)
    with pytest.raises(MissingZeroError):
        analysis.explicit_formula_check(make_character(5, 1), ExtremalParams(1.0, 0.5), 40.0, narrow)
    assert mz.covers(-10, 10)


def test_explicit_formula_rejects_principal():
    with pytest.raises(ValueError):
        analysis.explicit_formula_check(make_character(5, 0), ExtremalParams(1.0, 0.5), 10.0)


def test_bracket_contains_tilde_s():
    T = 2 * math.pi * 0.5 / math.log(101)
    br = analysis.grh_bracket(101, T, 1.2)
    ts = tilde_s_all(T, 101)[1:]
    assert np.all(br.lower <= ts + 1e-9) and np.all(ts <= br.upper + 1e-9)
    assert abs(np.mean(ts)) <= br.mean_bound
    assert np.mean(ts**2) <= br.mean_square_bound


def test_ensemble_basic_properties(q101):
    assert q101.mean_square_tilde_s >= q101.mean_tilde_s**2
    props = [q101.proportion[b] for b in sorted(q101.proportion)]
    assert all(0 <= x <= 1 for x in props)
    assert props == sorted(props)
    assert q101.central_order_mean == 0
    assert abs(q101.identity_residual) < 1e-8
    assert len(q101.tilde_s) == len(q101.lowest_zero) == 99
    assert set(q101.as_dict()) >= {"mean_tilde_s", "proportion", "lowest_zero_min"}


def test_ensemble_rejects_bad_input(zero_store):
    with pytest.raises(ValueError):
        analysis.ensemble_stats(101, 0.0, store=zero_store)
    with pytest.raises(ValueError):
        analysis.ensemble_stats(100, 1.0, store=zero_store)


def test_shifted_at_origin_reduces(zero_store, q101):
    sh = analysis.shifted_ensemble_stats(101, 0.0, q101.T, store=zero_store)
    assert sh.mean_count == pytest.approx(q101.mean_count, abs=1e-12)
    # S(h) - S(-h) = S(h, chi) + S(h, conj chi) by the conjugate pairing
    assert np.allclose(sh.tilde_s, q101.tilde_s, atol=1e-10)
    assert sh.proportion == q101.proportion


def test_shifted_window_identity(zero_store):
    h = math.pi / math.log(101)
    sh = analysis.shifted_ensemble_stats(101, 5.0, h, store=zero_store)
    assert abs(sh.identity_residual) < 1e-8
    assert sh.T0 == 5.0


def test_oscillation_report_bounded():
    rows = analysis.oscillation_report([101, 211, 401], 5.0, 0.5)
    for r in rows:
        assert 0 <= r.constant_ratio <= 1
        assert 0 <= r.u_ratio <= 1
