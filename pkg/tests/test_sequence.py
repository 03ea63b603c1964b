import math
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from cubicsieve.densities import SieveConfig
from cubicsieve.ideals import UNIT, IdealFact, prime_ideal
from cubicsieve.sequence import (
    WindowSpec,
    census_A0,
    census_B0,
    count_divisibility,
    count_primes_interval,
    count_residue,
    enumerate_A0,
    squarefree_norm_ideals,
    typeI_residuals,
)

SMALL = SieveConfig(10, Fraction(1, 2), Y=4)


def test_enumerate_example():
    got = [(x, y) for x, y, _ in enumerate_A0(SMALL)]
    assert got == [(11, 5), (11, 6), (12, 5), (13, 5), (13, 6), (14, 5)]


def test_enumerate_empty():
    assert list(enumerate_A0(SieveConfig(10, Fraction(1, 100), Y=4))) == []


def test_census_example():
    rep = census_A0(SMALL)
    assert (rep.pairs, rep.primes) == (6, 1)
    assert 13 ** 3 + 2 * 5 ** 3 == 2447 and sympy.isprime(2447)


def test_census_empty():
    rep = census_A0(SieveConfig(10, Fraction(1, 100), Y=4), sigma=1.0)
    assert rep.primes == 0 and rep.ratio is None


def test_census_matches_bruteforce():
    w = WindowSpec(200, 260, 100, 140)
    brute = [x ** 3 + 2 * y ** 3 for x in range(201, 261) for y in range(101, 141) if math.gcd(x, y) == 1]
    rep = census_A0(w)
    assert rep.pairs == len(brute)
    assert rep.primes == sum(sympy.isprime(n) for n in brute)


def test_census_threads_agree():
    cfg = SieveConfig(2000, Fraction(1, 10), Fraction(7, 100))
    a, b = census_A0(cfg, 1.0, threads=1), census_A0(cfg, 1.0, threads=2)
    assert (a.pairs, a.primes, a.max_multiplicity) == (b.pairs, b.primes, b.max_multiplicity)


def test_census_B0():
    # ]3000, 3300[ holds 33 primes; sympy gives the same count independently
    assert census_B0(SieveConfig(10, Fraction(1, 10), Y=4)).primes == 33
    assert sympy.primepi(3299) - sympy.primepi(3000) == 33
    assert census_B0(SieveConfig(10, Fraction(0), Y=4)).primes == 0


@given(st.integers(0, 10 ** 6), st.integers(0, 5000))
@settings(max_examples=50)
def test_count_primes_interval(lo, width):
    hi = lo + width
    expected = max(0, sympy.primepi(hi - 1) - sympy.primepi(lo)) if hi - 1 > lo else 0
    assert count_primes_interval(lo, hi) == expected


def test_count_residue_examples():
    w = WindowSpec.from_config(SMALL)
    assert count_residue(w, prime_ideal((5, 3))) == 0
    assert count_residue(w, UNIT) == 6


def test_residue_matches_divisibility_and_bruteforce():
    w = WindowSpec(60, 90, 30, 50)
    pairs = list(enumerate_A0(w))
    for R in squarefree_norm_ideals(1, 400):
        obs = count_residue(w, R)
        assert obs == count_divisibility(w, R, pairs)
        # oracle: x + r y = 0 mod p for every (p, r) in R
        brute = sum(all((x + r * y) % p == 0 for (p, r), _ in R.factors) for x, y, _ in pairs)
        assert obs == brute


def test_degree_two_never_divides():
    w = WindowSpec.from_config(SMALL)
    assert count_residue(w, prime_ideal((5, "d2"))) == 0


def test_typeI_small():
    rep = typeI_residuals(SieveConfig(200, Fraction(1, 5), Fraction(7, 100)), 300, 40, seed=1)
    assert rep.agreement and len(rep.rows) == 40
    assert all(300 < r.norm <= 600 for r in rep.rows)
    assert rep.aggregate_abs_residual == pytest.approx(sum(abs(r.observed - r.main) for r in rep.rows))
