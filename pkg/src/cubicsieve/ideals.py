"""
Ideals of Z[2^(1/3)] (the maximal order of Q(2^(1/3)), class number one).

A prime ideal is a pair (p, tag): tag is the integer root r of t^3 = 2 mod p
for a degree-one prime (so x + y*2^(1/3) lies in it iff x + r*y = 0 mod p),
"d2" for the degree-two prime above p = 2 mod 3 and "inert" for (p) itself.
"""

from __future__ import annotations

import itertools
import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Sequence, Tuple, Union

from sympy.ntheory import nthroot_mod

from .cubic_field import CubicInt, divide_exact, mul, norm
from .primes import factor, is_prime, primes_up_to

Tag = Union[int, str]
PrimeIdeal = Tuple[int, Tag]

SPLIT3 = "split3"
SPLIT12 = "split12"
INERT = "inert"
RAMIFIED = "ramified"


@dataclass(frozen=True)
class PrimeSplit:
    p: int
    kind: str
    roots: Tuple[int, ...]

    @property
    def nu_p(self) -> int:
        return len(self.roots)

    def primes(self) -> List[Tuple[PrimeIdeal, int]]:
        """(prime ideal, residue degree) pairs above p."""
        if self.kind == INERT:
            return [((self.p, INERT), 3)]
        out = [((self.p, r), 1) for r in self.roots]
        if self.kind == SPLIT12:
            out.append(((self.p, "d2"), 2))
        return out


_split_cache: Dict[int, PrimeSplit] = {}
_split_lock = threading.Lock()


def nu(p: int) -> int:
    """Number of solutions of x^3 = 2 mod p, for prime p."""
    if p in (2, 3) or p % 3 == 2:
        return 1
    return 3 if pow(2, (p - 1) // 3, p) == 1 else 0


def split_prime(p: int) -> PrimeSplit:
    cached = _split_cache.get(p)
    if cached is not None:
        return cached
    if p < 2 or not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if p == 2:
        sp = PrimeSplit(2, RAMIFIED, (0,))
    elif p == 3:
        sp = PrimeSplit(3, RAMIFIED, (2,))
    elif p % 3 == 2:
        # cubing is a bijection mod p, so the unique root is 2^(1/3 mod p-1)
        sp = PrimeSplit(p, SPLIT12, (pow(2, pow(3, -1, p - 1), p),))
    elif nu(p) == 0:
        sp = PrimeSplit(p, INERT, ())
    else:
        roots = tuple(sorted(int(r) for r in nthroot_mod(2, 3, p, all_roots=True)))
        sp = PrimeSplit(p, SPLIT3, roots)
    with _split_lock:
        _split_cache.setdefault(p, sp)
    return sp


def prime_norm(P: PrimeIdeal) -> int:
    p, tag = P
    if tag == INERT:
        return p ** 3
    if tag == "d2":
        return p * p
    return p


def _tag_key(tag: Tag):
    return (0, tag, "") if isinstance(tag, int) else (1, 0, tag)


def prime_key(P: PrimeIdeal):
    """Total order on prime ideals: by norm, then p, then tag."""
    return (prime_norm(P), P[0], _tag_key(P[1]))


@dataclass(frozen=True)
class IdealFact:
    factors: Tuple[Tuple[PrimeIdeal, int], ...] = ()

    @staticmethod
    def make(items: Iterable[Tuple[PrimeIdeal, int]]) -> "IdealFact":
        acc: Dict[PrimeIdeal, int] = {}
        for P, e in items:
            if e < 0:
                raise ValueError("negative exponent")
            if e:
                acc[P] = acc.get(P, 0) + e
        return IdealFact(tuple(sorted(acc.items(), key=lambda it: (it[0][0], _tag_key(it[0][1])))))

    @property
    def norm(self) -> int:
        n = 1
        for P, e in self.factors:
            n *= prime_norm(P) ** e
        return n

    def __mul__(self, other: "IdealFact") -> "IdealFact":
        return IdealFact.make(self.factors + other.factors)

    def is_unit(self) -> bool:
        return not self.factors

    def divisors(self) -> List["IdealFact"]:
        ranges = [range(e + 1) for _, e in self.factors]
        primes = [P for P, _ in self.factors]
        return [IdealFact.make(zip(primes, es)) for es in itertools.product(*ranges)]

    def quotient(self, other: "IdealFact") -> "IdealFact":
        mine = dict(self.factors)
        for P, e in other.factors:
            if mine.get(P, 0) < e:
                raise ValueError("not a divisor")
            mine[P] -= e
        return IdealFact.make(mine.items())


UNIT = IdealFact()


def prime_ideal(P: PrimeIdeal) -> IdealFact:
    return IdealFact.make([(P, 1)])


def _local_ideals(p: int, k: int) -> List[List[Tuple[PrimeIdeal, int]]]:
    """All ideals of norm p^k supported above p, as factor lists."""
    sp = split_prime(p)
    primes = sp.primes()
    out = []

    def rec(i, remaining, acc):
        if i == len(primes):
            if remaining == 0:
                out.append(list(acc))
            return
        P, f = primes[i]
        for e in range(remaining // f + 1):
            acc.append((P, e))
            rec(i + 1, remaining - e * f, acc)
            acc.pop()

    rec(0, k, [])
    return out


def ideals_from_factorization(fac: Dict[int, int]) -> List[IdealFact]:
    local = [_local_ideals(p, k) for p, k in sorted(fac.items())]
    return [IdealFact.make(itertools.chain.from_iterable(choice)) for choice in itertools.product(*local)]


def ideals_of_norm(n: int) -> List[IdealFact]:
    if n < 1:
        raise ValueError("norm must be positive")
    if n == 1:
        return [UNIT]
    return ideals_from_factorization(factor(n))


def count_ideals_of_norm(n: int) -> int:
    count = 1
    for p, k in factor(n).items():
        count *= len(_local_ideals(p, k))
    return count


def ideals_up_to(bound: int) -> List[IdealFact]:
    """All ideals with norm <= bound, sorted by (norm, factors)."""
    out = []
    for n in range(1, bound + 1):
        out.extend(ideals_of_norm(n))
    return out


# ---------------------------------------------------------------------------
# arithmetic functions


def mu_K(I: IdealFact) -> int:
    if any(e > 1 for _, e in I.factors):
        return 0
    return -1 if len(I.factors) % 2 else 1


def lambda_K(I: IdealFact) -> float:
    if len(I.factors) != 1:
        return 0.0
    (P, _), = I.factors
    return math.log(prime_norm(P))


def tau_K(I: IdealFact) -> int:
    t = 1
    for _, e in I.factors:
        t *= e + 1
    return t


def _squarefree_primes(q: int) -> List[int]:
    fac = factor(q)
    if any(e > 1 for e in fac.values()):
        raise ValueError(f"{q} is not squarefree")
    return sorted(fac)


def rho0(q: int) -> Fraction:
    out = Fraction(1)
    for p in _squarefree_primes(q) if q > 1 else []:
        out *= Fraction(nu(p) * p, p + 1)
    return out


def rho1(q: int) -> Fraction:
    out = Fraction(1)
    for p in _squarefree_primes(q) if q > 1 else []:
        prod = Fraction(1)
        for P, _ in split_prime(p).primes():
            prod *= 1 - Fraction(1, prime_norm(P))
        out *= p * (1 - prod)
    return out


def rho2(R: IdealFact) -> Fraction:
    out = Fraction(1)
    for P, _ in R.factors:
        out *= 1 / (1 + Fraction(1, prime_norm(P)))
    return out


def h_density(d: int) -> Fraction:
    """h(d) = rho0(d)/d, the sieve density of the integer sequence."""
    return rho0(d) / d


# ---------------------------------------------------------------------------
# principal generators


@lru_cache(maxsize=None)
def prime_generator(P: PrimeIdeal) -> CubicInt:
    """A generator of the (principal) prime ideal P."""
    p, tag = P
    if tag == INERT:
        return CubicInt(p)
    target = prime_norm(P)
    if tag == "d2":
        # P_d2 = (p) / P_1
        r = split_prime(p).roots[0]
        g1 = prime_generator((p, r))
        q = divide_exact(CubicInt(p), g1)
        assert q is not None and abs(norm(q)) == target
        return q
    r = tag
    basis = _lll([(p, 0, 0), (-r, 1, 0), (-r * r % p, 0, 1)])
    bound = 1
    while True:
        for coeffs in itertools.product(range(-bound, bound + 1), repeat=3):
            v = [sum(c * b[i] for c, b in zip(coeffs, basis)) for i in range(3)]
            x = CubicInt(*v)
            if abs(norm(x)) == target:
                return x
        bound += 1


def ideal_generator(I: IdealFact) -> CubicInt:
    g = CubicInt(1)
    for P, e in I.factors:
        gp = prime_generator(P)
        for _ in range(e):
            g = mul(g, gp)
    return g


def _lll(basis: Sequence[Sequence[int]], delta: Fraction = Fraction(3, 4)) -> List[List[int]]:
    """Textbook LLL with exact rationals (3x3, tiny entries)."""
    b = [list(v) for v in basis]
    n = len(b)

    def dot(u, v):
        return sum(x * y for x, y in zip(u, v))

    def gram_schmidt():
        bs, mu = [], [[Fraction(0)] * n for _ in range(n)]
        for i in range(n):
            v = [Fraction(x) for x in b[i]]
            for j in range(i):
                mu[i][j] = Fraction(dot(b[i], bs[j])) / dot(bs[j], bs[j])
                v = [x - mu[i][j] * y for x, y in zip(v, bs[j])]
            bs.append(v)
        return bs, mu

    bs, mu = gram_schmidt()
    k = 1
    while k < n:
        for j in range(k - 1, -1, -1):
            q = round(mu[k][j])
            if q:
                b[k] = [x - q * y for x, y in zip(b[k], b[j])]
                bs, mu = gram_schmidt()
        if dot(bs[k], bs[k]) >= (delta - mu[k][k - 1] ** 2) * dot(bs[k - 1], bs[k - 1]):
            k += 1
        else:
            b[k], b[k - 1] = b[k - 1], b[k]
            bs, mu = gram_schmidt()
            k = max(k - 1, 1)
    return b


def element_ideal(x: CubicInt) -> IdealFact:
    """Factor the principal ideal (x) for x = a + b*2^(1/3) + c*4^(1/3)."""
    n = abs(norm(x))
    if n == 0:
        raise ValueError("zero element")
    items = []
    for p, k in factor(n).items() if n > 1 else []:
        remaining = k
        for P, f in split_prime(p).primes():
            g = prime_generator(P)
            y = x
            e = 0
            while f * e < remaining:
                q = divide_exact(y, g)
                if q is None:
                    break
                y, e = q, e + 1
            if e:
                items.append((P, e))
                remaining -= f * e
        assert remaining == 0
    return IdealFact.make(items)


# ---------------------------------------------------------------------------
# Heath-Brown identity


def _convolve(f: Dict[int, int], g: Dict[int, int], norms: Dict[int, int], bound: int) -> Dict[int, int]:
    out: Dict[int, int] = {}
    for a, fa in f.items():
        if not fa:
            continue
        na = norms[a]
        for b, gb in g.items():
            if gb and na * norms[b] <= bound:
                c = a * b
                out[c] = out.get(c, 0) + fa * gb
    return out


def _coded_ideals(bound: int) -> Tuple[List[IdealFact], List[int], Dict[int, int]]:
    """Ideals up to bound with an integer code: each prime ideal gets its
    own rational-prime label, so ideal multiplication is integer product."""
    ideals = ideals_up_to(bound)
    labels: Dict[PrimeIdeal, int] = {}
    fresh = iter(int(q) for q in primes_up_to(max(100, 20 * bound)))
    codes, norms = [], {}
    for I in ideals:
        code = 1
        for P, e in I.factors:
            if P not in labels:
                labels[P] = next(fresh)
            code *= labels[P] ** e
        codes.append(code)
        norms[code] = I.norm
    return ideals, codes, norms


@dataclass(frozen=True)
class HBReport:
    k: int
    U: int
    bound: int
    checked: int
    max_abs_residual: float


def verify_hb_identity(k: int, U: int, bound: int) -> HBReport:
    """Check Lambda_K(T) against the k-fold Heath-Brown decomposition for
    every ideal T with N(T) <= bound.

    The combinatorial part is kept exact: for each T we accumulate integer
    weights w(n) so that the right-hand side is sum_n w(n) log n.
    """
    if k < 1 or U < 1:
        raise ValueError("k and U must be positive")
    if bound > U ** k:
        raise ValueError(f"bound {bound} exceeds U^k = {U ** k}")
    ideals, codes, norms = _coded_ideals(bound)
    one = {c: 1 for c in codes}
    mu_trunc = {c: mu_K(I) for I, c in zip(ideals, codes) if I.norm <= U}
    by_norm = [(norms[c], c) for c in codes]  # already sorted by norm

    # weights[T][n]: exact integer coefficient of log n
    weights: Dict[int, Dict[int, int]] = {}
    mu_pow = {1: 1}
    one_pow = {1: 1}
    for j in range(1, k + 1):
        mu_pow = _convolve(mu_pow, mu_trunc, norms, bound)
        if j > 1:
            one_pow = _convolve(one_pow, one, norms, bound)
        inner = _convolve(mu_pow, one_pow, norms, bound)
        coef = (-1) ** (j - 1) * math.comb(k, j)
        for a, va in inner.items():
            if not va:
                continue
            na = norms[a]
            for nd, d in by_norm:
                if na * nd > bound:
                    break
                if nd == 1:
                    continue
                w = weights.setdefault(a * d, {})
                w[nd] = w.get(nd, 0) + coef * va

    worst = 0.0
    for I, c in zip(ideals, codes):
        rhs = math.fsum(m * math.log(n) for n, m in weights.get(c, {}).items())
        worst = max(worst, abs(rhs - lambda_K(I)))
    return HBReport(k, U, bound, len(ideals), worst)


def verify_mobius(bound: int) -> int:
    """Number of ideals J with N(J) <= bound violating sum_{D|J} mu(D) = [J=1]."""
    bad = 0
    for J in ideals_up_to(bound):
        s = sum(mu_K(D) for D in J.divisors())
        if s != (1 if J.is_unit() else 0):
            bad += 1
    return bad
