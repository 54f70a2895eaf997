"""Integer-side primitives: sieve, von Mangoldt, primitive roots, primes in residue classes."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

SIEVE_CAP = 10**8


@dataclass(frozen=True)
class PrimeTable:
    limit: int
    primes: np.ndarray

    def __len__(self) -> int:
        return len(self.primes)

    def __iter__(self):
        return iter(self.primes.tolist())


def sieve_primes(limit: int) -> PrimeTable:
    """Plain sieve of Eratosthenes. Raises ValueError for limit < 2 or beyond SIEVE_CAP."""
    limit = int(limit)
    if limit < 2:
        raise ValueError(f"no primes below {limit}: prime table would be empty")
    if limit > SIEVE_CAP:
        raise ValueError(f"sieve limit {limit} exceeds cap {SIEVE_CAP}")
    return PrimeTable(limit, _sieve(limit))


@lru_cache(maxsize=16)
def _sieve(limit: int) -> np.ndarray:
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    primes = np.flatnonzero(flags)
    primes.flags.writeable = False
    return primes


def is_prime(n: int) -> bool:
    n = int(n)
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for d in range(3, math.isqrt(n) + 1, 2):
        if n % d == 0:
            return False
    return True


def smallest_prime_factor(n: int) -> int:
    if n % 2 == 0:
        return 2
    for d in range(3, math.isqrt(n) + 1, 2):
        if n % d == 0:
            return d
    return n


def von_mangoldt(n: int) -> float:
    """log p if n = p^m, else 0 (trial factorization)."""
    n = int(n)
    if n < 1:
        raise ValueError(f"von Mangoldt function undefined at n={n}")
    if n == 1:
        return 0.0
    p = smallest_prime_factor(n)
    while n % p == 0:
        n //= p
    return math.log(p) if n == 1 else 0.0


def prime_powers_upto(x: float) -> tuple[np.ndarray, np.ndarray]:
    """All prime powers n = p^m <= x with their von Mangoldt weights, sorted by n."""
    limit = int(math.floor(x))
    if limit < 2:
        return np.zeros(0, dtype=np.int64), np.zeros(0)
    ns, lams = [], []
    for p in sieve_primes(limit):
        lp = math.log(p)
        pk = p
        while pk <= limit:
            ns.append(pk)
            lams.append(lp)
            pk *= p
    order = np.argsort(ns, kind="stable")
    return np.asarray(ns, dtype=np.int64)[order], np.asarray(lams)[order]


def require_odd_prime(q: int) -> int:
    q = int(q)
    if q < 3 or not is_prime(q):
        raise ValueError(f"modulus {q} is not an odd prime")
    return q


def _prime_divisors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


@lru_cache(maxsize=None)
def least_primitive_root(q: int) -> int:
    """Smallest g >= 2 generating the multiplicative group mod the odd prime q."""
    q = require_odd_prime(q)
    factors = _prime_divisors(q - 1)
    for g in range(2, q):
        if all(pow(g, (q - 1) // f, q) != 1 for f in factors):
            return g
    raise AssertionError("unreachable: every prime has a primitive root")


def prime_count_residue(x: float, q: int, a: int) -> int:
    """#{p <= x : p = a mod q}."""
    q = require_odd_prime(q)
    if math.gcd(a, q) != 1:
        raise ValueError(f"residue {a} is not coprime to {q}")
    if x < 2:
        return 0
    primes = sieve_primes(int(math.floor(x))).primes
    return int(np.count_nonzero(primes % q == a % q))


def brun_titchmarsh_bound(x: float, q: int) -> float:
    """2x / (phi(q) log(x/q)), valid for x > 2q (prime q)."""
    if x <= 2 * q:
        raise ValueError("Brun-Titchmarsh bound requires x > 2q")
    return 2.0 * x / ((q - 1) * math.log(x / q))
