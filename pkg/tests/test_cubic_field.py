import math

import mpmath
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from cubicsieve.cubic_field import (
    EPS0,
    EPS0_INV,
    CubicInt,
    cross,
    cross_delta,
    det_identity_check,
    divide_exact,
    embed,
    l_maps,
    mul,
    mult_matrix,
    norm,
    normalize_associate,
    power,
    reconstruct_alpha,
    unit_quotient,
)

coef = st.integers(-10 ** 6, 10 ** 6)
elements = st.builds(CubicInt, coef, coef, coef)
small = st.builds(CubicInt, *[st.integers(-50, 50)] * 3)


def _value(x):
    t = mpmath.cbrt(2)
    return x.a + x.b * t + x.c * t * t


def _unit(n):
    return power(EPS0, n) if n >= 0 else power(EPS0_INV, -n)


@pytest.mark.parametrize("x, n", [((1, 0, 0), 1), ((0, 1, 0), 2), ((5, 4, 3), 1)])
def test_norm_examples(x, n):
    assert norm(CubicInt(*x)) == n


@pytest.mark.parametrize("x, y, z", [
    ((0, 1, 0), (0, 1, 0), (0, 0, 1)),
    ((1, 1, 1), (1, 1, 1), (5, 4, 3)),
    ((1, 0, 0), (7, -2, 3), (7, -2, 3)),
])
def test_mul_examples(x, y, z):
    assert mul(CubicInt(*x), CubicInt(*y)) == CubicInt(*z)


@pytest.mark.parametrize("x, maps", [
    ((1, 2, 3), ((3, 2, 1), (2, 1, 6), (1, 6, 4))),
    ((1, 0, 0), ((0, 0, 1), (0, 1, 0), (1, 0, 0))),
    ((0, 0, 1), ((1, 0, 0), (0, 0, 2), (0, 2, 0))),
])
def test_l_map_examples(x, maps):
    assert l_maps(CubicInt(*x)) == maps


@pytest.mark.parametrize("x", [(1, 1, 1), (1, 0, 0), (2, -1, 4)])
def test_det_identity_examples(x):
    assert det_identity_check(CubicInt(*x))


def test_eps0_inverse():
    assert mul(EPS0, EPS0_INV) == CubicInt(1)


@pytest.mark.parametrize("x, expected", [((1, 1, 1), (1, 0, 0)), ((0, 1, 0), (0, 1, 0)), ((5, 4, 3), (1, 0, 0))])
def test_normalize_examples(x, expected):
    assert normalize_associate(CubicInt(*x)) == CubicInt(*expected)


def test_normalize_window_by_enumeration():
    # oracle: try every eps0^n for |n| <= 12 and keep the one inside the window
    for x in [CubicInt(7, -3, 2), CubicInt(101, 5, -40), CubicInt(0, 0, 9)]:
        n_abs = abs(norm(x))
        lo = mpmath.cbrt(n_abs) / mpmath.sqrt(_value(EPS0))
        hi = mpmath.cbrt(n_abs) * mpmath.sqrt(_value(EPS0))
        hits = []
        for n in range(-12, 13):
            for s in (1, -1):
                y = mul(x, _unit(n))
                y = y if s == 1 else -y
                if lo < _value(y) <= hi:
                    hits.append(y)
        assert hits == [normalize_associate(x)]


def test_normalize_zero_rejected():
    with pytest.raises(ValueError):
        normalize_associate(CubicInt(0))


@pytest.mark.parametrize("g1, g2, w, d", [
    ((1, 0, 0), (0, 1, 0), (0, 0, 1), 1),
    ((2, 0, 0), (0, 2, 0), (0, 0, 4), 4),
    ((3, 2, 1), (1, 1, 2), (3, -5, 1), 1),
])
def test_cross_examples(g1, g2, w, d):
    # gamma(x) = (c, b, a), so build elements whose gamma vectors are g1, g2
    b1, b2 = CubicInt(*g1[::-1]), CubicInt(*g2[::-1])
    assert cross_delta(b1, b2) == (w, d)


def test_cross_from_betas():
    assert cross_delta(CubicInt(1, 2, 3), CubicInt(2, 1, 1)) == ((3, -5, 1), 1)


def test_reconstruct_example():
    alpha = reconstruct_alpha(CubicInt(1, 0, 0), CubicInt(0, 0, 1))
    assert alpha == CubicInt(0, 1, 0)
    assert mul(alpha, CubicInt(1, 0, 0)).c == 0


def test_reconstruct_parallel_is_none():
    assert reconstruct_alpha(CubicInt(1, 2, 3), CubicInt(2, 4, 6)) is None


def test_overflow_is_loud():
    with pytest.raises(OverflowError):
        CubicInt(1 << 127)
    with pytest.raises(OverflowError):
        power(CubicInt(10 ** 6, 10 ** 6, 10 ** 6), 8)


@given(elements, elements)
def test_norm_multiplicative(x, y):
    assert norm(mul(x, y)) == norm(x) * norm(y)


@given(elements, elements, elements)
def test_mul_associative_commutative(x, y, z):
    assert mul(x, y) == mul(y, x)
    assert mul(mul(x, y), z) == mul(x, mul(y, z))


@given(elements)
def test_det_identity(x):
    assert det_identity_check(x)


@given(elements)
def test_norm_matches_embedding(x):
    # independent oracle: product of the three complex embeddings
    with mpmath.workdps(80):
        t = mpmath.cbrt(2)
        w = mpmath.exp(2j * mpmath.pi / 3)
        prod = 1
        for k in range(3):
            s = t * w ** k
            prod *= x.a + x.b * s + x.c * s * s
        assert int(mpmath.nint(prod.real)) == norm(x)


@given(elements)
def test_mult_matrix_det_is_norm(x):
    m = mult_matrix(x)
    det = (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
           - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
           + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))
    assert abs(det) == abs(norm(x))


@given(elements, elements)
def test_l_maps_give_product_coefficients(x, y):
    l1, l2, l3 = l_maps(x)
    dot = lambda u, v: sum(a * b for a, b in zip(u, v))
    assert mul(x, y).hat == (dot(l3, y.hat), dot(l2, y.hat), dot(l1, y.hat))


@given(elements, elements)
def test_divide_exact_roundtrip(x, y):
    assume(not y.is_zero())
    assert divide_exact(mul(x, y), y) == x


@given(small, small)
def test_divide_exact_rejects_non_multiples(x, y):
    assume(not y.is_zero() and abs(norm(y)) > 1)
    q = divide_exact(x, y)
    if q is not None:
        assert mul(q, y) == x


@given(elements, st.integers(-8, 8), st.booleans())
def test_normalize_associate_invariant(x, n, neg):
    assume(not x.is_zero())
    y = mul(x, _unit(n))
    y = -y if neg else y
    beta = normalize_associate(x)
    assert beta == normalize_associate(y)
    assert unit_quotient(beta, x) is not None
    assert abs(norm(beta)) == abs(norm(x))
    assert float(embed(beta).real) > 0


@given(st.builds(CubicInt, *[st.integers(-1000, 1000)] * 3),
       st.lists(st.integers(-50, 50), min_size=6, max_size=6))
def test_alpha_reconstruction_roundtrip(a, r):
    g = math.gcd(a.a, a.b, a.c)
    assume(g)
    alpha = CubicInt(a.a // g, a.b // g, a.c // g)
    k1 = l_maps(alpha)[0]
    b1 = CubicInt(*cross(k1, tuple(r[:3])))
    b2 = CubicInt(*cross(k1, tuple(r[3:])))
    assume(cross(b1.gamma, b2.gamma) != (0, 0, 0))
    got = reconstruct_alpha(b1, b2)
    assert got in (alpha, -alpha)
    # alpha * b_i has no cbrt4 part
    assert mul(got, b1).c == 0 and mul(got, b2).c == 0


@given(st.integers(-6, 6))
def test_unit_quotient_recovers_exponent(n):
    x = CubicInt(3, -1, 2)
    assert unit_quotient(mul(x, _unit(n)), x) == n
