"""
Independent ideal-count oracle: sublattices of Z^3 of index n that are
stable under multiplication by 2^(1/3).

Coordinates are (c, b, a) for a + b*t + c*t^2, so t acts as
(c, b, a) -> (b, a, 2c).  Every sublattice has a unique upper-triangular
row Hermite form

    r1 = (h11, h12, h13)
    r2 = (0,   h22, h23)
    r3 = (0,   0,   h33)

with 0 <= h12 < h22 and 0 <= h13, h23 < h33.
"""

from __future__ import annotations

from typing import Iterator, List, Tuple

Row = Tuple[int, int, int]
HNF = Tuple[Row, Row, Row]


def theta(v: Row) -> Row:
    c, b, a = v
    return (b, a, 2 * c)


def in_lattice(v: Row, h: HNF) -> bool:
    """Exact membership by back substitution in the triangular basis."""
    (h11, h12, h13), (_, h22, h23), (_, _, h33) = h
    x, y, z = v
    if x % h11:
        return False
    k1 = x // h11
    y -= k1 * h12
    z -= k1 * h13
    if y % h22:
        return False
    z -= (y // h22) * h23
    return z % h33 == 0


def is_stable(h: HNF) -> bool:
    return all(in_lattice(theta(r), h) for r in h)


def _solve_linear(a: int, b: int, m: int):
    """Solutions of a*x = b (mod m) as (x0, step), or None."""
    from math import gcd

    a %= m
    b %= m
    g = gcd(a, m)
    if b % g:
        return None
    step = m // g
    if step == 1:
        return 0, 1
    return (b // g) * pow(a // g, -1, step) % step, step


def _divisors(n: int) -> List[int]:
    out = [d for d in range(1, int(n ** 0.5) + 1) if n % d == 0]
    return sorted(set(out + [n // d for d in out]))


def stable_hnfs(n: int) -> Iterator[HNF]:
    """All stable Hermite forms of determinant n."""
    for h11 in _divisors(n):
        for h22 in _divisors(n // h11):
            if h22 % h11:
                continue
            h33 = n // (h11 * h22)
            if h33 % h22:
                continue
            k = h22 // h11
            for h12 in range(0, h22, h11):
                m = h12 // h11
                for h23 in range(0, h33, h22):
                    # t*r2 = (h22, h23, 0): after removing k*r1 the middle
                    # entry must be a multiple of h22.
                    s2 = h23 - k * h12
                    if s2 % h22:
                        continue
                    # t*r1 = (h12, h13, 2*h11): middle entry forces
                    # h13 = m*h12 (mod h22); write h13 = base + h22*q.
                    base = (m * h12) % h22
                    span = h33 // h22
                    # t*r2 last entry: -k*h13 - (s2/h22)*h23 = 0 (mod h33)
                    sol = _solve_linear(k * h22, -k * base - (s2 // h22) * h23, h33)
                    if sol is None:
                        continue
                    q0, step = sol
                    for q in range(q0, span, step):
                        h13 = base + h22 * q
                        h = ((h11, h12, h13), (0, h22, h23), (0, 0, h33))
                        if is_stable(h):
                            yield h


def stable_hnfs_bruteforce(n: int) -> Iterator[HNF]:
    """Unpruned enumeration over every Hermite form; small n only."""
    for h11 in _divisors(n):
        for h22 in _divisors(n // h11):
            h33 = n // (h11 * h22)
            for h12 in range(h22):
                for h13 in range(h33):
                    for h23 in range(h33):
                        h = ((h11, h12, h13), (0, h22, h23), (0, 0, h33))
                        if is_stable(h):
                            yield h


def count_stable_sublattices(n: int) -> int:
    return sum(1 for _ in stable_hnfs(n))
