"""Dirichlet characters modulo an odd prime, indexed against the least primitive root.

``chi_j(g^k) = exp(2 pi i j k / (q - 1))``; ``j = 0`` is the principal character.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .arith import least_primitive_root, require_odd_prime

DLOG_CAP = 10**5


@lru_cache(maxsize=64)
def discrete_log_table(q: int) -> np.ndarray:
    """ind[a] = k with g^k = a mod q; ind[0] = -1."""
    q = require_odd_prime(q)
    if q > DLOG_CAP:
        raise ValueError(f"modulus {q} exceeds discrete-log table cap {DLOG_CAP}")
    g = least_primitive_root(q)
    ind = np.full(q, -1, dtype=np.int64)
    x = 1
    for k in range(q - 1):
        ind[x] = k
        x = x * g % q
    ind.flags.writeable = False
    return ind


@lru_cache(maxsize=64)
def power_table(q: int) -> np.ndarray:
    """pw[k] = g^k mod q for k = 0..q-2."""
    g = least_primitive_root(q)
    pw = np.empty(q - 1, dtype=np.int64)
    x = 1
    for k in range(q - 1):
        pw[k] = x
        x = x * g % q
    pw.flags.writeable = False
    return pw


@dataclass(frozen=True)
class DirichletCharacter:
    q: int
    j: int
    g: int

    @property
    def order_modulus(self) -> int:
        return self.q - 1

    @property
    def is_principal(self) -> bool:
        return self.j == 0

    @property
    def parity_delta(self) -> int:
        """1 for even characters (chi(-1) = 1), else 0."""
        return 1 if self.j % 2 == 0 else 0

    @property
    def a(self) -> int:
        """Gamma-factor shift: 0 for even, 1 for odd characters."""
        return 1 - self.parity_delta

    @property
    def is_real(self) -> bool:
        return (2 * self.j) % (self.q - 1) == 0

    def conj(self) -> "DirichletCharacter":
        return DirichletCharacter(self.q, (-self.j) % (self.q - 1), self.g)

    def __call__(self, n: int) -> complex:
        return char_value(self, n)

    def values(self) -> np.ndarray:
        """chi(a) for a = 0..q-1 as a complex array."""
        return _values(self.q, self.j)

    def key(self) -> tuple[int, int, int]:
        return (self.q, self.g, self.j)


@lru_cache(maxsize=4096)
def _values(q: int, j: int) -> np.ndarray:
    ind = discrete_log_table(q)
    vals = np.exp(2j * np.pi * j * (ind % (q - 1)) / (q - 1))
    vals[0] = 0.0
    vals.flags.writeable = False
    return vals


def make_character(q: int, j: int) -> DirichletCharacter:
    q = require_odd_prime(q)
    if not 0 <= j < q - 1:
        raise ValueError(f"character index {j} out of range for q={q}")
    return DirichletCharacter(q, j, least_primitive_root(q))


def enumerate_characters(q: int) -> list[DirichletCharacter]:
    q = require_odd_prime(q)
    g = least_primitive_root(q)
    return [DirichletCharacter(q, j, g) for j in range(q - 1)]


def char_value(chi: DirichletCharacter, n: int) -> complex:
    r = int(n) % chi.q
    if r == 0:
        return 0j
    k = int(discrete_log_table(chi.q)[r])
    # exact values at the four axis points keep tests with == honest
    num = (chi.j * k) % (chi.q - 1)
    den = chi.q - 1
    if num == 0:
        return 1 + 0j
    if 2 * num == den:
        return -1 + 0j
    if 4 * num == den:
        return 1j
    if 4 * num == 3 * den:
        return -1j
    return cmath.exp(2j * math.pi * num / den)


def orthogonality_sum(q: int, n: int) -> int:
    """Sum of chi(n) over the non-principal characters mod q."""
    q = require_odd_prime(q)
    r = int(n) % q
    if r == 0:
        return 0
    return q - 2 if r == 1 else -1


@dataclass(frozen=True)
class RootNumber:
    epsilon: complex
    gauss_sum: complex


def gauss_sum(chi: DirichletCharacter) -> complex:
    a = np.arange(chi.q)
    terms = chi.values() * np.exp(2j * np.pi * a / chi.q)
    return complex(math.fsum(terms.real), math.fsum(terms.imag))


@lru_cache(maxsize=8192)
def root_number(chi: DirichletCharacter) -> RootNumber:
    if chi.is_principal:
        raise ValueError("root number undefined for the principal character")
    tau = gauss_sum(chi)
    eps = tau / ((1j) ** chi.a * math.sqrt(chi.q))
    eps /= abs(eps)
    return RootNumber(epsilon=eps, gauss_sum=tau)
