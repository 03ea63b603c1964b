"""
Exact evaluation of the sifting functions and the Buchstab decomposition
S_1..S_8, S^(n), T^(n), U^(n), U_1^(n), U_2^(n) on finite collections.

A member of a collection is described by its FactorPattern: one entry per
distinct prime ideal, in a fixed total order (norm first, then a tie-break
label).  "N(P_2) < N(P_1)" along a chain is read in this total order, so
a member with two distinct prime ideals of the same norm is still counted
exactly once by each Buchstab step.  On the pair sequence all norms are
distinct and the two readings coincide.
"""

from __future__ import annotations

import functools
import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import mpmath

from .densities import SieveConfig
from .ideals import IdealFact, PrimeIdeal, _local_ideals, nu, prime_key, prime_norm
from .primes import factor, factor_range


@dataclass(frozen=True)
class FactorPattern:
    """norms[i] = (N(P_i), e_i) over the distinct prime ideals P_i of a
    member, sorted in the total order; primes[i] optionally labels P_i."""

    norms: Tuple[Tuple[int, int], ...]
    primes: Tuple[PrimeIdeal, ...] = ()

    def __post_init__(self):
        if self.primes and len(self.primes) != len(self.norms):
            raise ValueError("labels must align with norms")
        if any(self.norms[i][0] > self.norms[i + 1][0] for i in range(len(self.norms) - 1)):
            raise ValueError("norms must be sorted")

    @property
    def norm(self) -> int:
        out = 1
        for n, e in self.norms:
            out *= n ** e
        return out

    @property
    def key(self) -> Tuple[int, ...]:
        """Distinct-prime norms; all the decomposition depends on."""
        return tuple(n for n, _ in self.norms)

    @staticmethod
    def from_ideal(I: IdealFact) -> "FactorPattern":
        items = sorted(I.factors, key=lambda it: prime_key(it[0]))
        return FactorPattern(tuple((prime_norm(P), e) for P, e in items), tuple(P for P, _ in items))


Collection = Union[Iterable[FactorPattern], Mapping[FactorPattern, int]]


def _weighted(C: Collection):
    if isinstance(C, Mapping):
        return C.items()
    return ((m, 1) for m in C)


def sift(C: Collection, E: IdealFact, z) -> int:
    """#{I in C : E | I and every prime ideal P | I has N(P) >= z}."""
    need = dict(E.factors)
    total = 0
    for m, w in _weighted(C):
        if need:
            if not m.primes:
                raise ValueError("divisibility by E needs labelled patterns")
            have = dict(zip(m.primes, (e for _, e in m.norms)))
            if any(have.get(P, 0) < e for P, e in need.items()):
                continue
        if all(n >= z for n, _ in m.norms):
            total += w
    return total


# ---------------------------------------------------------------------------
# thresholds


def _pow_ge(v: int, c: Fraction, X: int, e: Fraction) -> bool:
    """v >= c * X**e, decided in integers."""
    if v <= 0:
        return False
    # clear cases by logarithms; the exact powers below can have huge exponents
    with mpmath.workdps(50):
        gap = mpmath.log(v) - mpmath.log(mpmath.mpf(c.numerator) / c.denominator) \
            - mpmath.mpf(e.numerator) / e.denominator * mpmath.log(X)
    if abs(gap) > mpmath.mpf(10) ** -30:
        return gap > 0
    p, q = e.numerator, e.denominator
    a, b = c.numerator, c.denominator
    if p >= 0:
        return v ** q * b ** q >= a ** q * X ** p
    return v ** q * b ** q * X ** (-p) >= a ** q


def power_ceil(c: Fraction, X: int, e: Fraction) -> int:
    """Smallest integer v with v >= c * X**e (c > 0, X >= 1)."""
    with mpmath.workdps(60):
        approx = mpmath.mpf(c.numerator) / c.denominator * mpmath.power(X, mpmath.mpf(e.numerator) / e.denominator)
        v = int(mpmath.ceil(approx))
    # exact repair inside the guard band
    while not _pow_ge(v, c, X, e):
        v += 1
    while v > 1 and _pow_ge(v - 1, c, X, e):
        v -= 1
    return v


def power_floor(c: Fraction, X: int, e: Fraction) -> int:
    """Largest integer v with v <= c * X**e."""
    v = power_ceil(c, X, e)
    return v if _is_exact(v, c, X, e) else v - 1


def _is_exact(v: int, c: Fraction, X: int, e: Fraction) -> bool:
    with mpmath.workdps(50):
        gap = mpmath.log(v) - mpmath.log(mpmath.mpf(c.numerator) / c.denominator) \
            - mpmath.mpf(e.numerator) / e.denominator * mpmath.log(X)
    if abs(gap) > mpmath.mpf(10) ** -30:
        return False
    p, q = e.numerator, e.denominator
    a, b = c.numerator, c.denominator
    if p >= 0:
        return v ** q * b ** q == a ** q * X ** p
    return v ** q * b ** q * X ** (-p) == a ** q


@dataclass(frozen=True)
class Boundaries:
    """Cut exponents (times log X).  contiguous=True closes the gap between
    the S_4 upper limit 3/2(1 - tau) and the S_5 lower limit 3/2 - tau."""

    delta: Fraction
    tau: Fraction
    contiguous: bool = True

    @staticmethod
    def from_config(cfg: SieveConfig, contiguous: bool = True) -> "Boundaries":
        return Boundaries(cfg.delta, cfg.tau, contiguous)

    @property
    def u4_hi(self) -> Fraction:
        return Fraction(3, 2) - self.tau if self.contiguous else Fraction(3, 2) * (1 - self.tau)

    @property
    def exponents(self) -> Tuple[Fraction, ...]:
        t = self.tau
        return (self.delta, 1 - t / 2, 1 + t, self.u4_hi, Fraction(3, 2) - t, Fraction(3, 2))

    def validate(self) -> None:
        e = self.exponents
        if not (e[0] < e[1] < e[2] < e[3] <= e[4] < e[5]):
            raise ValueError(f"boundary exponents not increasing: {e}")

    def thresholds(self, X: int) -> "Thresholds":
        return _thresholds(self, X)

    def _compute_thresholds(self, X: int) -> "Thresholds":
        self.validate()
        t = self.tau
        one = Fraction(1)
        lo15 = Fraction(3, 2) * (1 - t)
        return Thresholds(
            delta=power_ceil(one, X, self.delta),
            a=power_ceil(one, X, 1 - t / 2),
            b=power_ceil(one, X, 1 + t),
            u4=power_ceil(one, X, self.u4_hi),
            s5=power_ceil(one, X, Fraction(3, 2) - t),
            top=power_ceil(Fraction(2), X, Fraction(3, 2)),
            lo15=power_ceil(one, X, lo15),
            lo15_floor=power_floor(one, X, lo15),
            hi15=power_ceil(one, X, Fraction(3, 2) * (1 + t)),
        )


@functools.lru_cache(maxsize=256)
def _thresholds(b: Boundaries, X: int) -> "Thresholds":
    return b._compute_thresholds(X)


@dataclass(frozen=True)
class Thresholds:
    """Integer cut points: N >= X^e  <=>  N >= ceil(X^e), and
    N > X^e  <=>  N > floor(X^e)."""

    delta: int
    a: int
    b: int
    u4: int
    s5: int
    top: int
    lo15: int
    lo15_floor: int
    hi15: int


# ---------------------------------------------------------------------------
# classification


@dataclass
class Decomposition:
    n0: int
    top: int = 0
    S: Dict[int, int] = field(default_factory=dict)  # S1..S8
    gap: int = 0
    S_n: List[int] = field(default_factory=list)  # S^(1)..S^(n0+1)
    T_n: List[int] = field(default_factory=list)  # T^(1)..T^(n0)
    U_n: List[int] = field(default_factory=list)  # U^(1)..U^(n0)
    U1: Dict[int, int] = field(default_factory=dict)  # n = 1, 2, 3
    U2: Dict[int, int] = field(default_factory=dict)
    members: int = 0

    def as_dict(self) -> dict:
        return {
            "members": self.members,
            "n0": self.n0,
            "top": self.top,
            **{f"S{j}": self.S[j] for j in range(1, 9)},
            "gap": self.gap,
            "S_n": list(self.S_n),
            "T_n": list(self.T_n),
            "U_n": list(self.U_n),
            "U1": {str(k): v for k, v in self.U1.items()},
            "U2": {str(k): v for k, v in self.U2.items()},
        }


def _classify(key: Tuple[int, ...], th: Thresholds, n0: int):
    """Per-member contribution vector, as a flat tuple of counts."""
    top = s1 = s2 = s3 = s4 = s5 = gap = 0
    S_n = [0] * (n0 + 1)
    T_n = [0] * n0
    U_n = [0] * n0
    U1 = [0, 0, 0]
    U2 = [0, 0, 0]
    S678 = [0, 0, 0]
    if key:
        n1 = key[0]
        top = int(n1 >= th.top)
        if n1 >= th.delta:
            s1 = 1
            if n1 < th.a:
                s2 = 1
            elif n1 < th.b:
                s3 = 1
            elif n1 < th.u4:
                s4 = 1
            elif n1 < th.s5:
                gap = 1
            elif n1 < th.top:
                s5 = 1
            small = [n for n in key if n < th.a]
            # T^(n): n-subsets of the small primes with product < X^(1+tau)
            _subsets(small, th.b, T_n, 0)
            if n1 < th.a:
                later = small[1:]
                # S^(n): q1 plus (n-1) later primes, product < X^(1+tau)
                S_n[0] = 1
                _subsets(later, -(-th.b // n1), S_n, 1)
                # U^(n): n later primes A with N(A) < X^(1+tau) <= n1 N(A)
                for r in range(1, min(n0, len(later)) + 1):
                    for combo in itertools.combinations(later, r):
                        prod = math.prod(combo)
                        if prod >= th.b:
                            continue
                        m = prod * n1
                        if m < th.b:
                            continue
                        U_n[r - 1] += 1
                        if r <= 3:
                            if m < th.lo15:
                                U1[r - 1] += 1
                            elif m >= th.hi15:
                                U2[r - 1] += 1
                            elif r < 3 and m >= th.lo15:
                                S678[r - 1] += 1
                            elif r == 3 and m > th.lo15_floor:
                                S678[2] += 1
    return (top, s1, s2, s3, s4, s5, gap, tuple(S_n), tuple(T_n), tuple(U_n), tuple(U1), tuple(U2), tuple(S678))


def _subsets(norms: Sequence[int], bound: int, out: List[int], offset: int) -> None:
    """Add the number of r-subsets (r >= 1) of the sorted norms with product
    < bound to out[r - 1 + offset], for r up to len(out) - offset."""
    cap = len(out) - offset

    def rec(start, r, prod):
        for i in range(start, len(norms)):
            p = prod * norms[i]
            if p >= bound:
                break
            out[r + offset] += 1
            if r + 1 < cap:
                rec(i + 1, r + 1, p)

    rec(0, 0, 1)


def decompose(C: Collection, cfg: SieveConfig, b: Optional[Boundaries] = None) -> Decomposition:
    b = b or Boundaries.from_config(cfg)
    th = b.thresholds(cfg.X)
    n0 = cfg.n0
    agg = Counter()
    for m, w in _weighted(C):
        agg[m.key] += w
    d = Decomposition(n0=n0, S={j: 0 for j in range(1, 9)}, S_n=[0] * (n0 + 1), T_n=[0] * n0,
                      U_n=[0] * n0, U1={1: 0, 2: 0, 3: 0}, U2={1: 0, 2: 0, 3: 0})
    cache: Dict[Tuple[int, ...], tuple] = {}
    for key, w in agg.items():
        v = cache.get(key)
        if v is None:
            v = _classify(key, th, n0)
            cache[key] = v
        top, s1, s2, s3, s4, s5, gap, S_n, T_n, U_n, U1, U2, S678 = v
        d.members += w
        d.top += w * top
        d.S[1] += w * s1
        d.S[2] += w * s2
        d.S[3] += w * s3
        d.S[4] += w * s4
        d.S[5] += w * s5
        d.gap += w * gap
        for i in range(n0 + 1):
            d.S_n[i] += w * S_n[i]
        for i in range(n0):
            d.T_n[i] += w * T_n[i]
            d.U_n[i] += w * U_n[i]
        for i in range(3):
            d.U1[i + 1] += w * U1[i]
            d.U2[i + 1] += w * U2[i]
            d.S[6 + i] += w * S678[i]
    return d


@dataclass(frozen=True)
class BuchstabResiduals:
    top: int
    s2_expansion: int
    u_splits: Tuple[int, int, int]
    recursion: Tuple[int, ...]
    tail: int
    gap: int
    flagged: bool

    @property
    def all_zero(self) -> bool:
        return (self.top == 0 and self.s2_expansion == 0 and not any(self.u_splits)
                and not any(self.recursion) and self.tail == 0)


def verify_buchstab(C: Collection, cfg: SieveConfig, b: Optional[Boundaries] = None,
                    decomposition: Optional[Decomposition] = None) -> BuchstabResiduals:
    """Residuals of the decomposition identities (all exactly 0 when they hold).

    With non-contiguous boundaries the members whose least prime ideal falls
    in the uncovered gap are added back as a correction and flagged.
    """
    b = b or Boundaries.from_config(cfg)
    d = decomposition or decompose(C, cfg, b)
    S = d.S
    top = d.top - (S[1] - S[2] - S[3] - S[4] - S[5] - d.gap)
    alt = sum((-1) ** (n + 1) * (d.T_n[n - 1] - d.U_n[n - 1]) for n in range(1, d.n0 + 1))
    s2 = S[2] - alt
    rec = tuple(d.S_n[n - 1] - (d.T_n[n - 1] - d.U_n[n - 1] - d.S_n[n]) for n in range(1, d.n0 + 1))
    splits = tuple(d.U_n[n - 1] - (d.U1[n] + d.U2[n] + S[5 + n]) if n <= d.n0 else 0 for n in (1, 2, 3))
    s1_check = S[2] - d.S_n[0]
    return BuchstabResiduals(top, s2 + s1_check, splits, rec, d.S_n[d.n0], d.gap, not b.contiguous)


# ---------------------------------------------------------------------------
# collections


def patterns_A(cfg: SieveConfig, window=None) -> List[FactorPattern]:
    """Factor patterns of the ideals (x + y*2^(1/3)) over the coprime window.

    Every prime ideal dividing such an element has degree one, and the
    one above p is the one with root -x/y mod p; the pattern is therefore
    the rational factorization of x^3 + 2y^3 with those labels.
    """
    from .sequence import WindowSpec, enumerate_A0

    w = window or WindowSpec.from_config(cfg)
    out = []
    for x, y, n in enumerate_A0(w):
        items = []
        for p, e in sorted(factor(n).items()):
            r = (-x * pow(y, -1, p)) % p
            if (r ** 3 - 2) % p:
                raise AssertionError(f"({x},{y}): {p} does not come from a degree-one prime")
            items.append(((p, r), e))
        out.append(FactorPattern(tuple((p, e) for (p, _), e in items), tuple(P for P, _ in items)))
    return out


_local_cache: Dict[Tuple[int, int], List[Tuple[int, ...]]] = {}


def _local_keys(p: int, k: int) -> List[Tuple[int, ...]]:
    """Distinct-prime norm tuples of the ideals of norm p^k above p.

    Only the splitting type matters here, so no roots are computed."""
    v = nu(p)
    if k == 1:
        return [(p,)] * v
    got = _local_cache.get((p, k))
    if got is None:
        got = []
        for choice in _local_ideals(p, k):
            got.append(tuple(sorted(prime_norm(P) for P, e in choice if e)))
        _local_cache[(p, k)] = got
    return got


def patterns_B(cfg: SieveConfig) -> Counter:
    """Weighted patterns of all ideals J with N(J) in ]3X^3, 3X^3(1+eta)[,
    as a Counter keyed by unlabelled FactorPattern (exponents dropped)."""
    lo = cfg.Z
    hi = math.ceil(cfg.Z * (1 + cfg.eta))  # open upper end
    counts: Counter = Counter()
    for fac in factor_range(lo + 1, hi):
        parts = [_local_keys(p, k) for p, k in fac.items()]
        for combo in itertools.product(*parts):
            counts[tuple(sorted(itertools.chain.from_iterable(combo)))] += 1
    return Counter({FactorPattern(tuple((n, 1) for n in key)): c for key, c in counts.items()})
