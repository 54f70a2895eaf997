import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lowzeros.specialfn import (
    EULER_GAMMA,
    EulerMaclaurinConfig,
    digamma,
    digamma_vec,
    gamma_integral,
    gamma_phase,
    hurwitz_error_bound,
    hurwitz_zeta,
    log_gamma,
    re_digamma_line,
    trigamma,
)

mpmath.mp.dps = 30

finite = dict(allow_nan=False, allow_infinity=False)


def mp(z):
    return complex(z)


def test_zeta_golden():
    assert abs(hurwitz_zeta(2, 1.0) - math.pi**2 / 6) < 1e-12
    assert abs(hurwitz_zeta(2, 0.5) - math.pi**2 / 2) < 1e-12


def test_first_riemann_zero():
    assert abs(hurwitz_zeta(complex(0.5, 14.134725141734693), 1.0)) < 1e-5


def test_zeta_errors():
    with pytest.raises(ZeroDivisionError):
        hurwitz_zeta(1, 0.5)
    for a in (0.0, 1.5, -0.2):
        with pytest.raises(ValueError):
            hurwitz_zeta(2, a)


@settings(max_examples=60)
@given(
    st.floats(-3, 5, **finite),
    st.floats(-60, 60, **finite),
    st.floats(0.01, 1.0, **finite),
)
def test_zeta_matches_mpmath(sigma, t, a):
    s = complex(sigma, t)
    if abs(s - 1) < 1e-3:
        return
    ref = mp(mpmath.zeta(mpmath.mpc(sigma, t), a))
    assert abs(hurwitz_zeta(s, a) - ref) <= 1e-11 * max(1.0, abs(ref))


def test_error_bound_is_tiny_at_defaults():
    assert hurwitz_error_bound(complex(0.5, 10), 0.3) < 1e-12
    with pytest.raises(ValueError):
        EulerMaclaurinConfig(10, bernoulli_terms_M=7)


def test_log_gamma_values():
    assert abs(log_gamma(0.5) - 0.5 * math.log(math.pi)) < 1e-12
    assert abs(log_gamma(1)) < 1e-14
    z = complex(10, 10)
    assert abs(log_gamma(z + 1) - log_gamma(z) - cmath.log(z)) < 1e-11


@pytest.mark.parametrize("z", [0, -1, -7])
def test_gamma_poles(z):
    with pytest.raises(ValueError):
        log_gamma(z)
    with pytest.raises(ValueError):
        digamma(z)


@settings(max_examples=80)
@given(st.floats(-20, 40, **finite), st.floats(-200, 200, **finite))
def test_log_gamma_matches_mpmath(x, y):
    z = complex(x, y)
    if abs(y) < 1e-6 and x <= 0:
        return
    assert abs(log_gamma(z) - mp(mpmath.loggamma(mpmath.mpc(x, y)))) < 1e-11 * max(1, abs(z))


def test_digamma_values():
    assert abs(digamma(1) + EULER_GAMMA) < 1e-12
    assert abs(digamma(2) - (1 - EULER_GAMMA)) < 1e-12
    assert abs(digamma(0.5) - (-EULER_GAMMA - 2 * math.log(2))) < 1e-12


@settings(max_examples=80)
@given(st.floats(0.05, 30, **finite), st.floats(-300, 300, **finite))
def test_digamma_paths_match_mpmath(x, y):
    z = complex(x, y)
    ref = mp(mpmath.digamma(mpmath.mpc(x, y)))
    assert abs(digamma(z) - ref) < 1e-12 * max(1, abs(ref))
    assert abs(complex(digamma_vec(np.array([z]))[0]) - ref) < 1e-12 * max(1, abs(ref))
    assert abs(complex(trigamma(np.array([z]))[0]) - mp(mpmath.psi(1, mpmath.mpc(x, y)))) < 1e-12


def test_gamma_phase_derivative():
    for a in (0, 1):
        for t in (0.3, 5.0, 40.0):
            h = 1e-5
            num = (gamma_phase(t + h, a) - gamma_phase(t - h, a)) / (2 * h)
            assert num == pytest.approx(re_digamma_line(t, a) / 2, abs=1e-8)


def test_gamma_integral_basics():
    assert gamma_integral(0, 0, 0) == 0.0
    for d in (0, 1):
        full = gamma_integral(d, -7.5, 7.5)
        assert full == pytest.approx(2 * gamma_integral(d, 0, 7.5), abs=1e-12)
    with pytest.raises(ValueError):
        gamma_integral(1, 2, 1)


@pytest.mark.parametrize("delta_chi", [0, 1])
def test_gamma_integral_is_phase_difference(delta_chi):
    a = 1 - delta_chi
    T1, T2 = -3.0, 11.0
    want = 2 * (gamma_phase(T2, a) - gamma_phase(T1, a))
    assert gamma_integral(delta_chi, T1, T2) == pytest.approx(want, abs=1e-10)
