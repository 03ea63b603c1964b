"""Prime generation, primality and factorization helpers."""

from __future__ import annotations

from typing import Dict, List

import gmpy2
import numpy as np
from sympy import factorint

# Bases making Miller-Rabin deterministic for every n < 2**64.
_MR_BASES_64 = (2, 325, 9375, 28178, 450775, 9780504, 1795265022)
_SMALL = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def primes_up_to(n: int) -> np.ndarray:
    """All primes <= n as an int64 array."""
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    sieve[4::2] = False
    for p in range(3, int(n ** 0.5) + 1, 2):
        if sieve[p]:
            sieve[p * p :: 2 * p] = False
    return np.flatnonzero(sieve).astype(np.int64)


def _strong_probable_prime(n: int, d: int, s: int, a: int) -> bool:
    a %= n
    if a == 0:
        return True
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_prime(n: int) -> bool:
    """Deterministic below 2**64; strong BPSW (no known counterexample) above."""
    if n < 2:
        return False
    for p in _SMALL:
        if n % p == 0:
            return n == p
    if n < 1 << 64:
        d, s = n - 1, 0
        while d % 2 == 0:
            d //= 2
            s += 1
        return all(_strong_probable_prime(n, d, s, a) for a in _MR_BASES_64)
    return bool(gmpy2.is_strong_bpsw_prp(n))


def is_prime_certain(n: int) -> bool:
    """True when is_prime(n) is a proof rather than a probable-prime verdict."""
    return n < 1 << 64


def factor(n: int) -> Dict[int, int]:
    if n < 1:
        raise ValueError("factor() needs a positive integer")
    return {int(p): int(e) for p, e in factorint(n).items()}


def factor_range(lo: int, hi: int) -> List[Dict[int, int]]:
    """Factorizations of every integer in [lo, hi) by a segmented sieve."""
    if lo < 1 or hi <= lo:
        return []
    size = hi - lo
    rest = np.arange(lo, hi, dtype=np.int64)
    out: List[Dict[int, int]] = [dict() for _ in range(size)]
    for p in primes_up_to(int(hi ** 0.5) + 1):
        p = int(p)
        start = (-lo) % p
        idx = np.arange(start, size, p)
        pk = p
        while idx.size:
            for i in idx.tolist():
                f = out[i]
                f[p] = f.get(p, 0) + 1
            rest[idx] //= p
            pk *= p
            if pk > hi:
                break
            idx = idx[rest[idx] % p == 0]
    big = np.flatnonzero(rest > 1)
    for i in big.tolist():
        out[i][int(rest[i])] = 1
    return out
