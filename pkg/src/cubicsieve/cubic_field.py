"""
Exact arithmetic in Z[2^(1/3)].

An element a + b*t + c*t^2 (t = 2^(1/3)) is stored as the integer triple
(a, b, c).  All results are checked against the signed 128-bit range so an
accidental blow-up fails loudly instead of silently growing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import mpmath

Vec3 = Tuple[int, int, int]

INT128_MAX = (1 << 127) - 1
INT128_MIN = -(1 << 127)


def _checked(*values: int) -> None:
    for v in values:
        if v > INT128_MAX or v < INT128_MIN:
            raise OverflowError(f"value {v} leaves the signed 128-bit range")


@dataclass(frozen=True, order=True)
class CubicInt:
    a: int
    b: int = 0
    c: int = 0

    def __post_init__(self):
        _checked(self.a, self.b, self.c)

    @property
    def hat(self) -> Vec3:
        return (self.a, self.b, self.c)

    @property
    def gamma(self) -> Vec3:
        return (self.c, self.b, self.a)

    def __mul__(self, other: "CubicInt") -> "CubicInt":
        return mul(self, other)

    def __neg__(self) -> "CubicInt":
        return CubicInt(-self.a, -self.b, -self.c)

    def __add__(self, other: "CubicInt") -> "CubicInt":
        return CubicInt(self.a + other.a, self.b + other.b, self.c + other.c)

    def __sub__(self, other: "CubicInt") -> "CubicInt":
        return CubicInt(self.a - other.a, self.b - other.b, self.c - other.c)

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0 and self.c == 0


ONE = CubicInt(1, 0, 0)
CBRT2 = CubicInt(0, 1, 0)
EPS0 = CubicInt(1, 1, 1)
# 1/eps0 = -1 + cbrt2
EPS0_INV = CubicInt(-1, 1, 0)


def norm(x: CubicInt) -> int:
    a, b, c = x.hat
    n = a ** 3 + 2 * b ** 3 + 4 * c ** 3 - 6 * a * b * c
    _checked(n)
    return n


def l_maps(x: CubicInt) -> Tuple[Vec3, Vec3, Vec3]:
    a, b, c = x.hat
    return (c, b, a), (b, a, 2 * c), (a, 2 * c, 2 * b)


def _dot(u: Vec3, v: Vec3) -> int:
    return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]


def mul(x: CubicInt, y: CubicInt) -> CubicInt:
    l1, l2, l3 = l_maps(x)
    yh = y.hat
    return CubicInt(_dot(l3, yh), _dot(l2, yh), _dot(l1, yh))


def power(x: CubicInt, n: int) -> CubicInt:
    """x**n for n >= 0; negative n only for the fundamental unit."""
    if n < 0:
        if x == EPS0:
            x, n = EPS0_INV, -n
        elif x == EPS0_INV:
            x, n = EPS0, -n
        else:
            raise ValueError("negative powers are only defined for eps0")
    result = ONE
    while n:
        if n & 1:
            result = mul(result, x)
        n >>= 1
        if n:
            x = mul(x, x)
    return result


def mult_matrix(x: CubicInt) -> Tuple[Vec3, Vec3, Vec3]:
    """Rows (L3, L2, L1): mult_matrix(x) @ hat(y) == hat(x*y)."""
    l1, l2, l3 = l_maps(x)
    return l3, l2, l1


def _det3(m) -> int:
    (a, b, c), (d, e, f), (g, h, i) = m
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)


def det_identity_check(x: CubicInt) -> bool:
    d = _det3(mult_matrix(x))
    _checked(d)
    return d == norm(x)


def divide_exact(x: CubicInt, y: CubicInt) -> Optional[CubicInt]:
    """Return x/y if it lies in Z[2^(1/3)], else None."""
    n = norm(y)
    if n == 0:
        raise ZeroDivisionError("division by zero element")
    (a, b, c), (d, e, f), (g, h, i) = mult_matrix(y)
    adj = (
        (e * i - f * h, c * h - b * i, b * f - c * e),
        (f * g - d * i, a * i - c * g, c * d - a * f),
        (d * h - e * g, b * g - a * h, a * e - b * d),
    )
    xh = x.hat
    q = [_dot(row, xh) for row in adj]
    if any(v % n for v in q):
        return None
    return CubicInt(*(v // n for v in q))


# ---------------------------------------------------------------------------
# real embedding


@dataclass(frozen=True)
class EmbeddingValue:
    real: mpmath.mpf
    precision: int


def embed(x: CubicInt, precision: int = 96) -> EmbeddingValue:
    with mpmath.workprec(precision):
        t = mpmath.cbrt(2)
        val = x.a + x.b * t + x.c * t * t
    return EmbeddingValue(val, precision)


def _unit_window_position(x: CubicInt, precision: int):
    """(t, log eps0) with t = (log|x| - log(N)/3) / log eps0."""
    with mpmath.workprec(precision):
        v = abs(embed(x, precision).real)
        n = abs(norm(x))
        le = mpmath.log(embed(EPS0, precision).real)
        t = (mpmath.log(v) - mpmath.log(n) / 3) / le
    return t


def _on_upper_boundary(beta: CubicInt) -> bool:
    # beta = N^(1/3) eps0^(1/2) exactly  <=>  beta^6 == N^2 eps0^3
    n = norm(beta)
    return power(beta, 6) == mul(CubicInt(n * n), power(EPS0, 3))


def normalize_associate(x: CubicInt, precision: int = 96, max_precision: int = 4096) -> CubicInt:
    """The associate beta = +-eps0^n x with beta > 0 and
    N^(1/3) eps0^(-1/2) < beta <= N^(1/3) eps0^(1/2)."""
    if x.is_zero():
        raise ValueError("zero has no normalized associate")
    prec = precision
    while True:
        t = _unit_window_position(x, prec)
        with mpmath.workprec(prec):
            target = mpmath.mpf(1) / 2 - t
            n = int(mpmath.floor(target))
            frac = target - n
            guard = mpmath.ldexp(1, -prec // 2)
        near = frac < guard or (1 - frac) < guard
        if not near:
            break
        if prec >= max_precision:
            # A true tie: decide it in exact ring arithmetic.
            m = int(mpmath.nint(target))
            cand = mul(x, power(EPS0, m))
            if embed(cand, prec).real < 0:
                cand = -cand
            # upper endpoint is included; otherwise trust the 4096-bit floor
            n = m if _on_upper_boundary(cand) else n
            break
        prec *= 2
    beta = mul(x, power(EPS0, n))
    if embed(beta, prec).real < 0:
        beta = -beta
    return beta


def unit_quotient(x: CubicInt, y: CubicInt) -> Optional[int]:
    """If x = +-eps0^n * y return n, else None."""
    q = divide_exact(x, y)
    if q is None or abs(norm(q)) != 1:
        return None
    # units of Z[2^(1/3)] are +-eps0^n; recover n from the embedding
    with mpmath.workprec(128):
        v = abs(embed(q, 128).real)
        n = int(mpmath.nint(mpmath.log(v) / mpmath.log(embed(EPS0, 128).real)))
    unit = power(EPS0, n)
    if q != unit and q != -unit:
        return None
    return n


# ---------------------------------------------------------------------------
# cross products and alpha reconstruction


def cross(u: Vec3, v: Vec3) -> Vec3:
    return (
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    )


def cross_delta(b1: CubicInt, b2: CubicInt) -> Tuple[Vec3, int]:
    w = cross(b1.gamma, b2.gamma)
    _checked(*w)
    if w == (0, 0, 0):
        raise ValueError("gamma vectors are parallel")
    return w, math.gcd(*w)


def reconstruct_alpha(b1: CubicInt, b2: CubicInt) -> Optional[CubicInt]:
    """Primitive alpha with L1(alpha).hat(b_i) == 0, i.e. alpha*b_i has no
    cbrt4 part.  Sign: L2(alpha).hat(b1) > 0, falling back to L3."""
    try:
        w, delta = cross_delta(b1, b2)
    except ValueError:
        return None
    alpha = CubicInt(*(c // delta for c in w))
    _, l2, l3 = l_maps(alpha)
    s = _dot(l2, b1.hat) or _dot(l3, b1.hat)
    if s < 0:
        alpha = -alpha
    return alpha


def coefficient_constant(samples) -> float:
    """max(|a|,|b|,|c|) / |N|^(1/3) over normalized samples.

    Measures the implicit constant in the coefficient bound for normalized
    elements; nothing is asserted about its value.
    """
    worst = 0.0
    for x in samples:
        n = norm(x)
        if n == 0:
            continue
        beta = normalize_associate(x)
        worst = max(worst, max(abs(v) for v in beta.hat) / abs(n) ** (1 / 3))
    return worst
