"""Small multiplicative-function helpers for the moduli that appear here."""

from __future__ import annotations

from functools import lru_cache

import numpy as np


@lru_cache(maxsize=4096)
def _factor(n: int) -> tuple[tuple[int, int], ...]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def prime_factors(n: int) -> dict[int, int]:
    """{p: exponent} for n >= 1 (trial division; n is always small here)."""
    if n < 1:
        raise ValueError("n must be positive")
    return dict(_factor(int(n)))


def omega(n: int) -> int:
    """Number of distinct prime divisors."""
    return len(_factor(int(n)))


def is_prime_power(n: int) -> bool:
    return omega(n) == 1


def euler_phi(n: int) -> int:
    out = n
    for p, _ in _factor(int(n)):
        out = out // p * (p - 1)
    return out


def mobius(n: int) -> int:
    fac = _factor(int(n))
    if any(e > 1 for _, e in fac):
        return 0
    return -1 if len(fac) % 2 else 1


def euler_phi_table(N: int) -> np.ndarray:
    """phi(0..N) by a linear-size sieve; phi[0] is 0."""
    phi = np.arange(N + 1, dtype=np.int64)
    for p in range(2, N + 1):
        if phi[p] == p:
            phi[p::p] -= phi[p::p] // p
    return phi


def primes_upto(n: int) -> list[int]:
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, int(n**0.5) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return [int(p) for p in np.flatnonzero(sieve)]
