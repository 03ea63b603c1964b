"""Parameter bundle, local densities and main-term predictors."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Union

import mpmath
import numpy as np

from .ideals import IdealFact, rho0, rho2
from .primes import primes_up_to

Rational = Union[int, str, float, Fraction]

GAMMA_MAX = Fraction(5, 67)


def as_fraction(value: Rational) -> Fraction:
    """Exact rational from int, Fraction, '5/67'-style strings or decimals.

    Floats go through their shortest decimal repr, so 0.07 becomes 7/100.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"non-finite value {value}")
        return Fraction(repr(value))
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot read {value!r} as a rational")


@dataclass(frozen=True)
class SieveConfig:
    """Shared parameters.  Y is derived as round(X^(1-gamma)) unless given."""

    X: int
    eta: Fraction
    gamma_sparsity: Fraction = Fraction(7, 100)
    tau: Optional[Fraction] = None
    delta: Fraction = Fraction(1, 6)
    Y: Optional[int] = None
    Y_explicit: bool = field(default=False, init=False)

    def __post_init__(self):
        set_ = object.__setattr__
        set_(self, "eta", as_fraction(self.eta))
        set_(self, "gamma_sparsity", as_fraction(self.gamma_sparsity))
        set_(self, "delta", as_fraction(self.delta))
        gamma = self.gamma_sparsity
        tau = (gamma + GAMMA_MAX) / 2 if self.tau is None else as_fraction(self.tau)
        set_(self, "tau", tau)
        if not isinstance(self.X, int) or self.X < 3:
            raise ValueError("X must be an integer >= 3")
        if not 0 <= self.eta < 1:
            raise ValueError("eta must lie in [0, 1)")
        if not 0 < self.delta <= Fraction(1, 6):
            raise ValueError("delta must lie in (0, 1/6]")
        if not 0 < tau < GAMMA_MAX:
            raise ValueError("tau must lie in (0, 5/67)")
        if self.Y is None:
            if not 0 < gamma < GAMMA_MAX:
                raise ValueError("gamma_sparsity must lie in (0, 5/67)")
            if not gamma < tau:
                raise ValueError("tau must exceed gamma_sparsity")
            with mpmath.workdps(40):
                y = int(mpmath.nint(mpmath.power(self.X, 1 - mpmath.mpf(gamma.numerator) / gamma.denominator)))
            set_(self, "Y", y)
        else:
            set_(self, "Y_explicit", True)
        if self.Y < 2:
            raise ValueError("Y must be >= 2")

    @property
    def Z(self) -> int:
        return 3 * self.X ** 3

    @property
    def n0(self) -> int:
        """Largest n such that n prime ideals of norm >= X^delta can have
        product below X^(1+tau); S^(n) vanishes beyond it."""
        return math.ceil((1 + self.tau) / self.delta) - 1

    def snapshot(self) -> dict:
        return {
            "X": self.X,
            "Y": self.Y,
            "eta": str(self.eta),
            "gamma_sparsity": str(self.gamma_sparsity),
            "tau": str(self.tau),
            "delta": str(self.delta),
            "Y_explicit": self.Y_explicit,
        }


# ---------------------------------------------------------------------------
# sigma_0


def _powmod_vec(base: int, exps: np.ndarray, mods: np.ndarray) -> np.ndarray:
    """base**exps mod mods elementwise; needs mods < 3.03e9 to stay in int64."""
    if mods.size and int(mods.max()) >= 3_037_000_499:
        raise OverflowError("modulus too large for vectorized powmod")
    result = np.ones_like(mods)
    b = np.full_like(mods, base) % mods
    e = exps.copy()
    while e.any():
        odd = (e & 1).astype(bool)
        result[odd] = result[odd] * b[odd] % mods[odd]
        b = b * b % mods
        e >>= 1
    return result


def nu_array(primes: np.ndarray) -> np.ndarray:
    """Number of cube roots of 2 modulo each prime."""
    primes = np.asarray(primes, dtype=np.int64)
    nu = np.ones(primes.shape, dtype=np.int64)
    one_mod3 = (primes % 3 == 1)
    p = primes[one_mod3]
    if p.size:
        cubic_residue = _powmod_vec(2, (p - 1) // 3, p) == 1
        nu[one_mod3] = np.where(cubic_residue, 3, 0)
    return nu


@dataclass(frozen=True)
class SigmaEstimate:
    p_max: int
    value: float
    oscillation: float


def sigma0(p_max: int) -> SigmaEstimate:
    """Partial Euler product prod_{p <= p_max} (1 - (nu_p - 1)/p).

    oscillation is max |log P(q) - log P(p_max)| over primes q in
    (p_max/10, p_max], a measured stand-in for the unknown tail.
    """
    primes = primes_up_to(int(p_max))
    if primes.size == 0:
        return SigmaEstimate(int(p_max), 1.0, 0.0)
    nu = nu_array(primes)
    logs = np.log1p(-(nu - 1) / primes.astype(np.float64))
    partial = np.cumsum(logs)
    total = float(partial[-1])
    tail = partial[primes > p_max / 10]
    osc = float(np.max(np.abs(tail - total))) if tail.size else 0.0
    return SigmaEstimate(int(p_max), math.exp(total), osc)


def sigma0_exact(p_max: int) -> Fraction:
    """Exact rational partial product (small p_max only)."""
    out = Fraction(1)
    for p, v in zip(primes_up_to(int(p_max)).tolist(), nu_array(primes_up_to(int(p_max))).tolist()):
        out *= 1 - Fraction(v - 1, p)
    return out


def gamma0() -> float:
    """Residue constant pi * log(eps0) / sqrt(27)."""
    with mpmath.workdps(30):
        eps0 = 1 + mpmath.cbrt(2) + mpmath.cbrt(4)
        return float(mpmath.pi * mpmath.log(eps0) / mpmath.sqrt(27))


# ---------------------------------------------------------------------------
# predictors


def nu_factor(cfg: SieveConfig, sigma: float) -> float:
    return sigma * float(cfg.eta) * cfg.Y / (3 * cfg.X ** 2)


@dataclass(frozen=True)
class PredictedCounts:
    pi_A0: float
    pi_B0: float
    typeI_A_main: Callable[[IdealFact], float]
    typeI_B_main: Callable[[IdealFact], float]
    typeI_A0_main: Callable[[int], float]


def predicted_counts(cfg: SieveConfig, sigma: float) -> PredictedCounts:
    X, Y, eta = cfg.X, cfg.Y, float(cfg.eta)
    logX = math.log(X)
    a_scale = 6 * eta * eta * X * Y / math.pi ** 2
    b_scale = 3 * gamma0() * eta * X ** 3

    return PredictedCounts(
        pi_A0=sigma * eta * eta * X * Y / (3 * logX),
        pi_B0=eta * X ** 3 / logX,
        typeI_A_main=lambda R: a_scale * float(rho2(R)) / R.norm,
        typeI_B_main=lambda R: b_scale / R.norm,
        typeI_A0_main=lambda q: a_scale * float(rho0(q)) / q,
    )
