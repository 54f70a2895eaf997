import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lowzeros.arith import (
    brun_titchmarsh_bound,
    is_prime,
    least_primitive_root,
    prime_count_residue,
    prime_powers_upto,
    require_odd_prime,
    sieve_primes,
    von_mangoldt,
)


def _segmented_count(limit, block=65536):
    """Independent prime count by a segmented sieve."""
    base = [p for p in range(2, math.isqrt(limit) + 1) if is_prime(p)]
    count = 0
    for lo in range(0, limit + 1, block):
        hi = min(lo + block, limit + 1)
        flags = np.ones(hi - lo, dtype=bool)
        for p in base:
            start = max(p * p, ((lo + p - 1) // p) * p)
            flags[start - lo :: p] = False
        if lo == 0:
            flags[: min(2, hi)] = False
        count += int(flags.sum())
    return count


def test_small_sieves():
    assert list(sieve_primes(10)) == [2, 3, 5, 7]
    assert list(sieve_primes(2)) == [2]


def test_million_sieve_matches_segmented():
    table = sieve_primes(10**6)
    assert len(table) == 78498 == _segmented_count(10**6)


@pytest.mark.parametrize("limit", [1, 0, -5])
def test_sieve_rejects_empty(limit):
    with pytest.raises(ValueError):
        sieve_primes(limit)


@pytest.mark.parametrize("n,expected", [(1, 0.0), (8, math.log(2)), (12, 0.0), (9, math.log(3)), (7, math.log(7))])
def test_von_mangoldt_values(n, expected):
    assert von_mangoldt(n) == pytest.approx(expected, abs=0)


def test_von_mangoldt_domain():
    with pytest.raises(ValueError):
        von_mangoldt(0)


def test_prime_powers_match_von_mangoldt():
    ns, lams = prime_powers_upto(500)
    direct = {n: von_mangoldt(n) for n in range(1, 501) if von_mangoldt(n) > 0}
    assert dict(zip(ns.tolist(), lams.tolist())) == direct
    assert np.all(np.diff(ns) > 0)


@given(st.integers(min_value=2, max_value=5000))
def test_chebyshev_psi_from_table(x):
    ns, lams = prime_powers_upto(x)
    # sum of Lambda(n) over n <= x is log lcm(1..x)
    assert math.fsum(lams) == pytest.approx(math.log(math.lcm(*range(1, x + 1))), rel=1e-12)


@pytest.mark.parametrize("q,g", [(3, 2), (5, 2), (7, 3), (23, 5), (41, 6), (191, 19)])
def test_least_primitive_root(q, g):
    assert least_primitive_root(q) == g


@given(st.sampled_from([p for p in range(3, 400) if is_prime(p)]))
def test_primitive_root_generates(q):
    g = least_primitive_root(q)
    assert len({pow(g, k, q) for k in range(q - 1)}) == q - 1
    assert all(len({pow(h, k, q) for k in range(q - 1)}) < q - 1 for h in range(2, g))


@pytest.mark.parametrize("q", [2, 4, 9, 15, 1, 0])
def test_require_odd_prime(q):
    with pytest.raises(ValueError):
        require_odd_prime(q)


def test_prime_count_residue():
    assert prime_count_residue(100, 5, 1) == 5
    assert prime_count_residue(2, 7, 1) == 0
    with pytest.raises(ValueError):
        prime_count_residue(100, 5, 10)


@settings(max_examples=30)
@given(st.sampled_from([3, 5, 7, 11, 13]), st.integers(min_value=100, max_value=20000))
def test_residue_counts_partition_primes(q, x):
    total = sum(prime_count_residue(x, q, a) for a in range(1, q))
    assert total + (1 if q <= x else 0) == len(sieve_primes(x))


def test_brun_titchmarsh_holds_on_sample():
    for q in (5, 7, 11):
        for x in (1000, 10000):
            for a in range(1, q):
                assert prime_count_residue(x, q, a) <= brun_titchmarsh_bound(x, q)
    with pytest.raises(ValueError):
        brun_titchmarsh_bound(10, 7)
