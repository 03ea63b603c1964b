import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from cubicsieve.primes import factor, factor_range, is_prime, is_prime_certain, primes_up_to


def test_primes_up_to_matches_sympy():
    assert primes_up_to(10000).tolist() == list(sympy.primerange(2, 10001))
    assert primes_up_to(1).tolist() == []


@pytest.mark.parametrize("n", [2047, 1373653, 25326001, 3215031751, 2152302898747, 3474749660383,
                               341550071728321, 3825123056546413051, 318665857834031151167461])
def test_strong_pseudoprimes_rejected(n):
    assert not is_prime(n)


@pytest.mark.parametrize("n", [2, 3, 2447, 2 ** 61 - 1, 2 ** 89 - 1, 10 ** 18 + 9])
def test_known_primes(n):
    assert is_prime(n) == sympy.isprime(n)


@given(st.integers(0, 10 ** 20))
def test_is_prime_matches_sympy(n):
    assert is_prime(n) == sympy.isprime(n)


def test_is_prime_certain_marks_deterministic_range():
    assert is_prime_certain(2 ** 61 - 1)
    assert is_prime_certain(2 ** 64 - 1)
    assert not is_prime_certain(2 ** 64 + 13)


@given(st.integers(2, 10 ** 12))
def test_factor_roundtrip(n):
    f = factor(n)
    prod = 1
    for p, e in f.items():
        assert sympy.isprime(p)
        prod *= p ** e
    assert prod == n


def test_factor_range_matches_factorint():
    got = factor_range(1000, 6000)
    for n, f in zip(range(1000, 6000), got):
        assert dict(f) == sympy.factorint(n)
