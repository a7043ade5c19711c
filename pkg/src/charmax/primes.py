"""Prime sieves and factorization tables shared across the library.

All cached tables are numpy arrays marked read-only after construction, so
they can be shared freely between threads.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .errors import DomainError


@lru_cache(maxsize=16)
def _prime_table(limit: int) -> np.ndarray:
    if limit < 2:
        arr = np.empty(0, dtype=np.int64)
    else:
        sieve = np.ones(limit + 1, dtype=bool)
        sieve[:2] = False
        for p in range(2, math.isqrt(limit) + 1):
            if sieve[p]:
                sieve[p * p :: p] = False
        arr = np.nonzero(sieve)[0].astype(np.int64)
    arr.flags.writeable = False
    return arr


def primes_up_to(limit: float) -> np.ndarray:
    """Primes p <= limit, ascending, as a read-only int64 array."""
    if limit != limit or limit < 0:  # NaN or negative
        raise DomainError(f"prime bound must be nonnegative, got {limit!r}")
    return _prime_table(int(math.floor(limit)))


def prime_count(limit: float) -> int:
    return len(primes_up_to(limit))


@lru_cache(maxsize=8)
def smallest_factor_table(limit: int) -> np.ndarray:
    """spf[n] for 2 <= n <= limit; spf[0] = spf[1] = 0."""
    spf = np.zeros(limit + 1, dtype=np.int64)
    for p in range(2, math.isqrt(limit) + 1):
        if spf[p] == 0:
            view = spf[p::p]
            view[view == 0] = p
    rest = np.nonzero(spf == 0)[0]
    spf[rest] = rest
    spf[:2] = 0
    spf.flags.writeable = False
    return spf


@lru_cache(maxsize=8)
def greatest_factor_table(limit: int) -> np.ndarray:
    """gpf[n] for 2 <= n <= limit; gpf[1] = 1 so 1 counts as friable."""
    gpf = np.zeros(limit + 1, dtype=np.int64)
    if limit >= 1:
        gpf[1] = 1
    for p in _prime_table(limit):
        gpf[p::p] = p
    gpf.flags.writeable = False
    return gpf


def friable_mask(limit: int, bound: float) -> np.ndarray:
    """Boolean array over 0..limit; True where n >= 1 has no prime factor > bound."""
    gpf = greatest_factor_table(limit)
    mask = gpf <= bound
    mask[0] = False
    if limit >= 1:
        mask[1] = True
    return mask


def factorize(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorization of n >= 1 as ((p, exponent), ...), p ascending."""
    if n < 1:
        raise DomainError(f"cannot factor {n}")
    out: list[tuple[int, int]] = []
    m = n
    for p in primes_up_to(math.isqrt(n)):
        p = int(p)
        if p * p > m:
            break
        if m % p == 0:
            a = 0
            while m % p == 0:
                m //= p
                a += 1
            out.append((p, a))
    if m > 1:
        out.append((m, 1))
    return tuple(out)


def divisors(n: int) -> list[int]:
    """All positive divisors of n, ascending."""
    divs = [1]
    for p, a in factorize(n):
        divs = [d * p**k for d in divs for k in range(a + 1)]
    return sorted(divs)


def euler_phi(n: int) -> int:
    phi = 1
    for p, a in factorize(n):
        phi *= p ** (a - 1) * (p - 1)
    return phi
