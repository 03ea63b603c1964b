import itertools
import math
import random
from collections import Counter
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cubicsieve.buchstab import (
    Boundaries,
    FactorPattern,
    decompose,
    patterns_A,
    power_ceil,
    power_floor,
    sift,
    verify_buchstab,
)
from cubicsieve.densities import SieveConfig
from cubicsieve.ideals import UNIT, prime_ideal

CFG = SieveConfig(10_000, Fraction(1, 5), Fraction(7, 100))


def pattern(*norms):
    return FactorPattern(tuple((n, 1) for n in sorted(norms)))


def test_sift_examples():
    assert sift([], UNIT, 2) == 0
    m = [pattern(5, 11)]
    assert sift(m, UNIT, 5) == 1
    assert sift(m, UNIT, 6) == 0
    assert sift(m, UNIT, 11) == 0


def test_sift_with_divisor():
    P5, P11 = ((5, 3), 1), ((11, 7), 1)
    m = FactorPattern(((5, 1), (11, 1)), ((5, 3), (11, 7)))
    assert sift([m], prime_ideal((5, 3)), 2) == 1
    assert sift([m], prime_ideal((5, "d2")), 2) == 0
    with pytest.raises(ValueError):
        sift([pattern(5, 11)], prime_ideal((5, 3)), 2)


def test_sift_vs_bruteforce():
    rng = random.Random(3)
    C = [pattern(*[rng.randint(2, 500) for _ in range(rng.randint(0, 4))]) for _ in range(100)]
    for z in (1, 2, 10, 50, 200, 600):
        assert sift(C, UNIT, z) == sum(all(n >= z for n, _ in m.norms) for m in C)


@given(st.integers(1, 50), st.integers(2, 10 ** 6), st.fractions(Fraction(-3), Fraction(3), max_denominator=67))
def test_power_ceil_floor_exact(c, X, e):
    c = Fraction(c, 7)
    v = power_ceil(c, X, e)
    with mpmath.workdps(80):
        t = mpmath.mpf(c.numerator) / c.denominator * mpmath.power(X, mpmath.mpf(e.numerator) / e.denominator)
        slack = mpmath.mpf(10) ** -60
        assert v >= t - slack and (v - 1 < t or v == 1)
        f = power_floor(c, X, e)
        assert f <= t + slack and f + 1 > t


def test_power_exact_cases():
    assert power_ceil(Fraction(1), 64, Fraction(1, 2)) == 8
    assert power_floor(Fraction(1), 64, Fraction(1, 2)) == 8
    assert power_floor(Fraction(1), 65, Fraction(1, 2)) == 8
    assert power_ceil(Fraction(1), 65, Fraction(1, 2)) == 9


def test_boundaries():
    b = Boundaries.from_config(CFG)
    b.validate()
    e = b.exponents
    assert e[3] == e[4]
    lit = Boundaries.from_config(CFG, contiguous=False)
    assert lit.exponents[3] < lit.exponents[4]


def test_empty_collection():
    d = decompose([], CFG)
    assert d.members == 0 and all(v == 0 for v in d.S.values())
    assert verify_buchstab([], CFG).all_zero


def test_hand_placed_S6_member():
    th = Boundaries.from_config(CFG).thresholds(CFG.X)
    n1, n2, big = 800, 900, 50_000
    assert CFG.X ** (1 / 6) < n1 < n2 < th.a < big
    assert n2 < th.b <= n1 * n2 and th.lo15 <= n1 * n2 < th.hi15
    d = decompose([pattern(n1, n2, big)], CFG)
    assert d.S[6] == 1 and d.S[7] == 0 and d.S[8] == 0
    assert d.U1[1] == 0 and d.U2[1] == 0
    assert verify_buchstab([pattern(n1, n2, big)], CFG).all_zero


def _brute_S_T(keys, th, n0):
    """S^(n) and T^(n) straight from the definitions with combinations."""
    S = [0] * (n0 + 1)
    T = [0] * n0
    for key in keys:
        if not key or key[0] < th.delta:
            continue  # sifted out at X^delta
        small = [n for n in key if n < th.a]
        for r in range(1, n0 + 1):
            for combo in itertools.combinations(small, r):
                if math.prod(combo) < th.b:
                    T[r - 1] += 1
        if key[0] < th.a:
            for r in range(1, n0 + 2):
                for combo in itertools.combinations(small[1:], r - 1):
                    if key[0] * math.prod(combo) < th.b:
                        S[r - 1] += 1
    return S, T


keys = st.lists(st.integers(2, 30_000), min_size=0, max_size=6).map(sorted)


@given(st.lists(keys, max_size=40))
def test_synthetic_residuals_zero(ks):
    C = [pattern(*k) for k in ks]
    res = verify_buchstab(C, CFG)
    assert res.all_zero
    th = Boundaries.from_config(CFG).thresholds(CFG.X)
    d = decompose(C, CFG)
    S, T = _brute_S_T(ks, th, CFG.n0)
    assert d.S_n == S and d.T_n == T
    assert sum(d.S[j] for j in range(2, 6)) + d.gap == d.S[1] - d.top


def test_cell_coverage_residuals_zero():
    th = Boundaries.from_config(CFG).thresholds(CFG.X)
    cells = [(3,), (th.delta,), (th.a - 1, th.a + 5), (th.a,), (th.b - 1,), (th.b,), (th.u4,),
             (th.s5,), (th.top,), (800, 900, 50_000), (40, 50, 60, 70), (30, 300, 3000),
             (20, 25, 30, 35, 40, 45)]
    C = [pattern(*c) for c in cells]
    assert verify_buchstab(C, CFG).all_zero


def test_weighted_collection_equals_list():
    C = [pattern(800, 900, 50_000), pattern(800, 900, 50_000), pattern(40, 50)]
    assert decompose(C, CFG).as_dict() == decompose(Counter(C), CFG).as_dict()


def test_A_small_run():
    cfg = SieveConfig(100, Fraction(1, 5), Fraction(7, 100))
    C = patterns_A(cfg)
    assert len(C) > 0
    assert verify_buchstab(C, cfg).all_zero


def test_literal_boundaries_flag_gap():
    cfg = SieveConfig(500, Fraction(1, 5), Fraction(7, 100))
    C = patterns_A(cfg)
    res = verify_buchstab(C, cfg, Boundaries.from_config(cfg, contiguous=False))
    assert res.flagged and res.all_zero
