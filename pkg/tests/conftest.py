"""Shared oracles for the test suite."""

import math

import pytest

from charmax.primes import divisors


@pytest.fixture(scope="session")
def naive_conductor():
    """Brute-force conductor: smallest d | q with chi trivial on units = 1 mod d."""

    def compute(chi):
        q = chi.modulus
        for d in divisors(q):
            if all(
                chi.angle(n) == 0
                for n in range(1, q + 1)
                if n % d == 1 % d and math.gcd(n, q) == 1
            ):
                return d
        return q

    return compute
