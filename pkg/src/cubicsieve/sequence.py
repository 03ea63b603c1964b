"""
Enumeration of the pair sequence n = x^3 + 2y^3 and the norm interval,
prime censuses, and Type-I residual tables.
"""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .cubic_field import CubicInt, divide_exact
from .densities import SieveConfig, predicted_counts
from .ideals import IdealFact, ideal_generator, nu, split_prime
from .primes import is_prime, primes_up_to

INT64_SAFE = (1 << 63) - 1
_TRIAL_PRIMES = primes_up_to(1000)


@dataclass(frozen=True)
class WindowSpec:
    """x in ]x_lo, x_hi], y in ]y_lo, y_hi]."""

    x_lo: int
    x_hi: int
    y_lo: int
    y_hi: int

    def __post_init__(self):
        if self.x_lo < 1 or self.y_lo < 1:
            raise ValueError("window lower ends must be >= 1")
        if self.x_hi < self.x_lo or self.y_hi < self.y_lo:
            raise ValueError("window upper ends must not lie below lower ends")

    @staticmethod
    def from_config(cfg: SieveConfig) -> "WindowSpec":
        scale = 1 + cfg.eta
        return WindowSpec(cfg.X, math.floor(cfg.X * scale), cfg.Y, math.floor(cfg.Y * scale))

    @property
    def is_empty(self) -> bool:
        return self.x_hi == self.x_lo or self.y_hi == self.y_lo

    @property
    def max_value(self) -> int:
        return self.x_hi ** 3 + 2 * self.y_hi ** 3


def _window(source) -> WindowSpec:
    return source if isinstance(source, WindowSpec) else WindowSpec.from_config(source)


def _stripe(w: WindowSpec, x0: int, x1: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Coprime pairs with x in ]x0, x1] as arrays (x, y, n), x-major order."""
    xs = np.arange(x0 + 1, x1 + 1, dtype=np.int64)
    ys = np.arange(w.y_lo + 1, w.y_hi + 1, dtype=np.int64)
    if xs.size == 0 or ys.size == 0:
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty, empty
    xg, yg = np.meshgrid(xs, ys, indexing="ij")
    keep = np.gcd(xg, yg) == 1
    x, y = xg[keep], yg[keep]
    if w.max_value > INT64_SAFE:
        raise OverflowError("window values exceed the 64-bit fast path")
    n = x ** 3 + 2 * y ** 3
    return x, y, n


def enumerate_A0(source) -> Iterator[Tuple[int, int, int]]:
    """Coprime (x, y) in the window with n = x^3 + 2y^3, x-major order."""
    w = _window(source)
    if w.is_empty:
        return
    if w.max_value > INT64_SAFE:
        for x in range(w.x_lo + 1, w.x_hi + 1):
            for y in range(w.y_lo + 1, w.y_hi + 1):
                if math.gcd(x, y) == 1:
                    yield x, y, x ** 3 + 2 * y ** 3
        return
    step = max(1, 2_000_000 // max(1, w.y_hi - w.y_lo))
    for x0 in range(w.x_lo, w.x_hi, step):
        x, y, n = _stripe(w, x0, min(x0 + step, w.x_hi))
        yield from zip(x.tolist(), y.tolist(), n.tolist())


def _prime_values(n: np.ndarray) -> np.ndarray:
    """Entries of n (all > 1000) that are prime."""
    alive = np.ones(n.shape, dtype=bool)
    for p in _TRIAL_PRIMES.tolist():
        alive &= n % p != 0
    cand = n[alive].tolist()
    return np.array([v for v in cand if is_prime(v)], dtype=np.int64)


def _census_stripe(args) -> Tuple[int, np.ndarray]:
    w, x0, x1 = args
    _, _, n = _stripe(w, x0, x1)
    small = n <= 1000
    primes = [v for v in n[small].tolist() if is_prime(v)]
    big = _prime_values(n[~small])
    return int(n.size), np.concatenate([np.array(primes, dtype=np.int64), big])


def default_threads() -> int:
    env = os.environ.get("CSL_THREADS")
    if env:
        return max(1, int(env))
    return 1


@dataclass(frozen=True)
class CensusReport:
    pairs: int
    primes: int
    max_multiplicity: int
    predicted: Optional[float]
    ratio: Optional[float]
    wall_time: float
    probabilistic: bool = False
    extra: Dict[str, float] = field(default_factory=dict)


def census_A0(source, sigma: Optional[float] = None, threads: Optional[int] = None) -> CensusReport:
    """Count primes n = x^3 + 2y^3 over the coprime window (with multiplicity).

    The prediction sigma * eta^2 X Y / (3 log X) needs a SieveConfig and a
    sigma value; otherwise predicted and ratio are None.
    """
    start = time.perf_counter()
    w = _window(source)
    threads = threads or default_threads()
    if w.is_empty:
        return CensusReport(0, 0, 0, None, None, time.perf_counter() - start)
    if w.max_value > INT64_SAFE:
        pairs = primes = 0
        seen: Dict[int, int] = {}
        for _, _, n in enumerate_A0(w):
            pairs += 1
            if is_prime(n):
                primes += 1
                seen[n] = seen.get(n, 0) + 1
        mult = max(seen.values(), default=0)
        probabilistic = w.max_value >= 1 << 64
    else:
        step = max(1, 500_000 // max(1, w.y_hi - w.y_lo))
        jobs = [(w, x0, min(x0 + step, w.x_hi)) for x0 in range(w.x_lo, w.x_hi, step)]
        if threads > 1 and len(jobs) > 1:
            with ProcessPoolExecutor(max_workers=threads) as pool:
                results = list(pool.map(_census_stripe, jobs))
        else:
            results = [_census_stripe(j) for j in jobs]
        pairs = sum(r[0] for r in results)
        values = np.concatenate([r[1] for r in results]) if results else np.zeros(0, np.int64)
        primes = int(values.size)
        mult = int(np.unique(values, return_counts=True)[1].max()) if values.size else 0
        probabilistic = False
    predicted = ratio = None
    if sigma is not None and isinstance(source, SieveConfig):
        predicted = predicted_counts(source, sigma).pi_A0
        ratio = primes / predicted if predicted > 0 and pairs else None
    return CensusReport(pairs, primes, mult, predicted, ratio, time.perf_counter() - start, probabilistic)


def count_primes_interval(lo: int, hi: int, segment: int = 1 << 22) -> int:
    """Number of primes p with lo < p < hi (segmented sieve)."""
    first, last = lo + 1, hi - 1
    if last < first:
        return 0
    base = primes_up_to(math.isqrt(last) + 1)
    total = 0
    for a in range(first, last + 1, segment):
        b = min(a + segment, last + 1)
        mark = np.ones(b - a, dtype=bool)
        for p in base.tolist():
            if p * p >= b:
                break
            s = max(p * p, -(-a // p) * p)
            mark[s - a :: p] = False
        if a < 2:
            mark[: 2 - a] = False
        total += int(mark.sum())
    return total


def census_B0(cfg: SieveConfig) -> CensusReport:
    """Rational primes in ]3X^3, 3X^3(1+eta)[."""
    start = time.perf_counter()
    lo = Fraction(cfg.Z)
    hi = cfg.Z * (1 + cfg.eta)
    # open interval ]lo, hi[ over the integers
    count = count_primes_interval(int(lo), math.ceil(hi))
    predicted = float(cfg.eta) * cfg.X ** 3 / math.log(cfg.X)
    ratio = count / predicted if predicted > 0 else None
    return CensusReport(math.ceil(hi) - int(lo) - 1, count, 1 if count else 0, predicted or None, ratio,
                        time.perf_counter() - start, math.ceil(hi) >= 1 << 64)


# ---------------------------------------------------------------------------
# Type I


def degree_one_roots(R: IdealFact) -> Optional[List[Tuple[int, int]]]:
    """(p, root) per prime of R if R has squarefree norm and only
    degree-one primes above distinct p; None otherwise."""
    out = []
    seen = set()
    for (p, tag), e in R.factors:
        if e != 1 or not isinstance(tag, int) or p in seen:
            return None
        seen.add(p)
        out.append((p, tag))
    return out


def _crt_root(pairs: Sequence[Tuple[int, int]]) -> Tuple[int, int]:
    """rho mod q with rho = r_i mod p_i."""
    rho, q = 0, 1
    for p, r in pairs:
        t = (r - rho) * pow(q, -1, p) % p
        rho, q = rho + q * t, q * p
    return rho % q, q


def count_residue(w: WindowSpec, R: IdealFact) -> int:
    """#A_R by residues: x + r*y = 0 mod p for each prime (p, r) of R."""
    pairs = degree_one_roots(R)
    if pairs is None:
        # a degree-two or inert prime, or two primes above one p, never
        # divides x + y*2^(1/3) with gcd(x, y) = 1
        return 0
    rho, q = _crt_root(pairs)
    total = 0
    for y in range(w.y_lo + 1, w.y_hi + 1):
        x0 = (-rho * y) % q
        first = w.x_lo + 1 + ((x0 - w.x_lo - 1) % q)
        if first > w.x_hi:
            continue
        xs = np.arange(first, w.x_hi + 1, q, dtype=np.int64)
        total += int(np.count_nonzero(np.gcd(xs, y) == 1))
    return total


def count_divisibility(w: WindowSpec, R: IdealFact, pairs=None) -> int:
    """#A_R by exact division of x + y*2^(1/3) by a generator of R."""
    g = ideal_generator(R)
    q = R.norm
    count = 0
    if pairs is None:
        pairs = list(enumerate_A0(w))
    for x, y, n in pairs:
        if n % q == 0 and divide_exact(CubicInt(x, y, 0), g) is not None:
            count += 1
    return count


@dataclass(frozen=True)
class TypeIRow:
    R: IdealFact
    norm: int
    observed: int
    dual: int
    main: float
    residual: float


@dataclass(frozen=True)
class TypeIReport:
    rows: List[TypeIRow]
    aggregate_abs_residual: float
    agreement: bool


def squarefree_norm_ideals(lo: int, hi: int) -> List[IdealFact]:
    """Ideals R with lo < N(R) <= hi and squarefree N(R), built from
    degree-one primes above distinct rational primes."""
    from .primes import factor

    out = []
    for q in range(max(lo + 1, 1), hi + 1):
        fac = factor(q) if q > 1 else {}
        if any(e > 1 for e in fac.values()) or any(nu(p) == 0 for p in fac):
            continue
        choices = [[(p, r) for r in split_prime(p).roots] for p in sorted(fac)]
        for combo in _product(choices):
            out.append(IdealFact.make(((p, r), 1) for p, r in combo))
    return out


def _product(choices):
    import itertools

    return itertools.product(*choices)


def typeI_residuals(cfg: SieveConfig, Q: int, sample: int, seed: int = 0) -> TypeIReport:
    """Observed #A_R against the main term for sampled R with Q < N(R) <= 2Q."""
    w = WindowSpec.from_config(cfg)
    pool = squarefree_norm_ideals(Q, 2 * Q)
    rng = np.random.default_rng(seed)
    if sample < len(pool):
        idx = np.sort(rng.choice(len(pool), size=sample, replace=False))
        pool = [pool[i] for i in idx]
    main_fn = predicted_counts(cfg, 1.0).typeI_A_main
    pairs = list(enumerate_A0(w))
    rows = []
    for R in pool:
        obs = count_residue(w, R)
        dual = count_divisibility(w, R, pairs)
        main = main_fn(R)
        rows.append(TypeIRow(R, R.norm, obs, dual, main, obs - main))
    agg = math.fsum(abs(r.residual) for r in rows)
    return TypeIReport(rows, agg, all(r.observed == r.dual for r in rows))
