"""
Linear sieve functions, the kernels K and J, their closed-form surrogate
bounds, the integration regions, and assembly of the constants c_3..c_8.

All B-side integrals are returned in units of eta*Z/log X, so that after
multiplication by nu they are in units of sigma_0 eta^2 X Y / log X; the
A-side integrals include the e^(-gamma_E) prefactor and are in the same
units.  Each c_j is then a plain difference.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .quadrature import Limits, QuadResult, gl_integrate, integrate, integrate_1d

EULER_GAMMA = 0.57721566490153286060651209008240243
E_GAMMA = math.exp(EULER_GAMMA)
TAU_DEFAULT = Fraction(5, 67)

Real = Union[float, Fraction]


class DomainError(ValueError):
    """Argument outside the range where a closed form is implemented."""


# ---------------------------------------------------------------------------
# linear sieve functions


def F_linear(s):
    """Upper bound function: 2 e^gamma / s on (0, 3]."""
    arr = np.asarray(s, dtype=np.float64)
    if np.any(~(arr > 0)) or np.any(arr > 3):
        raise DomainError("F_linear is implemented on (0, 3] only")
    out = 2 * E_GAMMA / arr
    return float(out) if out.ndim == 0 else out


def f_linear(s):
    """Lower bound function: 0 on (0, 2], 2 e^gamma log(s - 1) / s on (2, 4]."""
    arr = np.asarray(s, dtype=np.float64)
    if np.any(~(arr > 0)) or np.any(arr > 4):
        raise DomainError("f_linear is implemented on (0, 4] only")
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(arr > 2, 2 * E_GAMMA * np.log(np.maximum(arr - 1, 1.0)) / arr, 0.0)
    return float(out) if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# kernels


def _k_third_integrand(w):
    # inner r1-integral of the three-prime term done in closed form:
    # int_{r}^{(w-r)/2} dr1 / (r1 (w - r - r1)) = log((w - 2r)/r) / (w - r)
    return lambda r: np.log((w - 2 * r) / r) / ((w - r) * r)


def K_kernel(v1: float, v2: float, tol: float = 1e-12) -> float:
    """K(v1, v2) with v' = min(v1, v2); inner integrals by adaptive quadrature."""
    w = 3 - v1 - v2
    vp = min(v1, v2)
    if w <= 0 or vp <= 0:
        raise DomainError("K needs 3 - v1 - v2 > 0 and positive v")
    out = 1 / w
    if vp < w / 2:
        out += 2 * integrate_1d(lambda r: 1 / (r * (w - r)), vp, w / 2, tol=tol).value
    if vp < w / 3:
        out += 6 * integrate(
            lambda x: 1 / (x[:, 0] * x[:, 1] * (w - x[:, 0] - x[:, 1])),
            [(vp, w / 3), (lambda p: p[:, 0], lambda p: (w - p[:, 0]) / 2)],
            tol=tol,
        ).value
    return out


def J_kernel(v: float, vprime: float, tol: float = 1e-11) -> float:
    """J(v, v') including the four-prime term; nested integrals adaptive."""
    w = 3 - v
    vp = vprime
    if w <= 0 or vp <= 0:
        raise DomainError("J needs 3 - v > 0 and v' > 0")
    out = 1 / w
    if vp < w / 2:
        out += 2 * integrate_1d(lambda r: 1 / (r * (w - r)), vp, w / 2, tol=tol).value
    if vp < w / 3:
        out += 6 * integrate(
            lambda x: 1 / (x[:, 0] * x[:, 1] * (w - x[:, 0] - x[:, 1])),
            [(vp, w / 3), (lambda p: p[:, 0], lambda p: (w - p[:, 0]) / 2)],
            tol=tol,
        ).value
    if vp < w / 4:
        out += 24 * integrate(
            lambda x: 1 / (x[:, 0] * x[:, 1] * x[:, 2] * (w - x.sum(1))),
            [
                (vp, w / 4),
                (lambda p: p[:, 0], lambda p: (w - p[:, 0]) / 3),
                (lambda p: p[:, 1], lambda p: (w - p[:, 0] - p[:, 1]) / 2),
            ],
            tol=tol,
        ).value
    return out


# vectorized kernels used inside outer integrals; inner integrals by fixed
# Gauss-Legendre with |Q_n - Q_2n| folded into a returned error array


@np.errstate(divide="ignore", invalid="ignore")
def K_vec(v1: np.ndarray, v2: np.ndarray, n: int = 20):
    w = 3 - v1 - v2
    vp = np.minimum(v1, v2)
    t2 = np.where(vp < w / 2, 2 / w * np.log(np.maximum((w - vp) / vp, 1.0)), 0.0)
    wc = w[:, None]
    t3, e3 = gl_integrate(lambda r: np.log((wc - 2 * r) / r) / ((wc - r) * r), vp, w / 3, n)
    return 1 / w + t2 + 6 * t3, 6 * e3


@np.errstate(divide="ignore", invalid="ignore")
def J_vec(v: np.ndarray, vp: np.ndarray, n: int = 16):
    """Exact J(v, v') vectorized; returns (value, error estimate)."""
    w = 3 - v
    t2 = np.where(vp < w / 2, 2 / w * np.log(np.maximum((w - vp) / vp, 1.0)), 0.0)
    wc = w[:, None]
    t3, e3 = gl_integrate(lambda r: np.log((wc - 2 * r) / r) / ((wc - r) * r), vp, w / 3, n)
    # four-prime term: r3 outer on [v', w/4], r2 on [r3, (w - r3)/3]
    x, wts = np.polynomial.legendre.leggauss(n)
    a, b = vp, np.maximum(w / 4, vp)
    r3 = a[:, None] + (x[None, :] + 1) / 2 * (b - a)[:, None]  # (m, n)
    inner_lo = r3.reshape(-1)
    inner_hi = ((w[:, None] - r3) / 3).reshape(-1)
    wr = np.repeat(w, n)[:, None]
    r3c = inner_lo[:, None]
    inner, e_in = gl_integrate(lambda r2: np.log((wr - r3c - 2 * r2) / r2) / ((wr - r3c - r2) * r2),
                               inner_lo, inner_hi, n)
    inner = (inner / inner_lo).reshape(-1, n)
    e_in = (e_in / inner_lo).reshape(-1, n)
    t4 = inner @ wts * (b - a) / 2
    e4 = e_in @ wts * (b - a) / 2
    return 1 / w + t2 + 6 * t3 + 24 * t4, 6 * e3 + 24 * e4


# ---------------------------------------------------------------------------
# surrogate bounds


@np.errstate(divide="ignore", invalid="ignore")
def K_upper(v1, v2, n: int = 20):
    """K bound with the three-prime term replaced by
    18/(3 - v1 - v2) int_{v'}^{w/3} log((w - r)/(2r)) dr/r."""
    v1 = np.atleast_1d(np.asarray(v1, dtype=np.float64))
    v2 = np.atleast_1d(np.asarray(v2, dtype=np.float64))
    w = 3 - v1 - v2
    vp = np.minimum(v1, v2)
    t2 = np.where(vp < w / 2, 2 / w * np.log(np.maximum((w - vp) / vp, 1.0)), 0.0)
    wc = w[:, None]
    t3, e3 = gl_integrate(lambda r: np.log((wc - r) / (2 * r)) / r, vp, w / 3, n)
    return 1 / w + t2 + 18 / w * t3, 18 / w * e3


def J_lower(v1, v2, v3, variant: str = "derived"):
    """Closed-form lower bound for J(v1 + v2 + v3, v3).

    variant="derived" uses -log v3 in the three-prime term (what the two
    displayed integral inequalities give); "printed" uses -log v2.
    Terms over empty ranges are 0.
    """
    v1, v2, v3 = (np.asarray(a, dtype=np.float64) for a in (v1, v2, v3))
    w = 3 - v1 - v2 - v3
    lv = np.log(v3) if variant == "derived" else np.log(v2)
    if variant not in ("derived", "printed"):
        raise ValueError(f"unknown J_lower variant {variant!r}")
    with np.errstate(divide="ignore", invalid="ignore"):
        t2 = np.where(v3 < w / 2, 2 / (w - v3) * np.log(w / (2 * v3)), 0.0)
        t3 = np.where(
            v3 < w / 3,
            6 / (w - 2 * v3) * (-lv - 2 * np.log(w - v3) - 3 * math.log(3) + 3 * np.log(w) + 2 * math.log(2)),
            0.0,
        )
    return 1 / w + t2 + t3


def J_upper(v, vp, variant: str = "derived"):
    """Closed-form upper bound for J(v, v') from iterated maxima.

    variant="derived": fourth term (w - 4v')^3 / (v'^3 (w - 3v'));
    "printed": 2 (3 - 5v')(2 - v - 4v') / (v'^3 (3 - v - 3v')).
    Terms over empty ranges are 0.
    """
    v = np.asarray(v, dtype=np.float64)
    vp = np.asarray(vp, dtype=np.float64)
    w = 3 - v
    with np.errstate(divide="ignore", invalid="ignore"):
        t2 = np.where(w > 2 * vp, 1.5 * (w - 2 * vp) / (vp * (w - vp)), 0.0)
        t3 = np.where(w > 3 * vp, (w - 3 * vp) ** 2 / (vp ** 2 * (w - 2 * vp)), 0.0)
        if variant == "derived":
            t4 = np.where(w > 4 * vp, (w - 4 * vp) ** 3 / (vp ** 3 * (w - 3 * vp)), 0.0)
        elif variant == "printed":
            t4 = 2 * (3 - 5 * vp) * (2 - v - 4 * vp) / (vp ** 3 * (3 - v - 3 * vp))
        else:
            raise ValueError(f"unknown J_upper variant {variant!r}")
    return 1 / w + t2 + t3 + t4


@dataclass(frozen=True)
class SurrogateValues:
    K_upper: Optional[float]
    J_lower: Optional[float]
    J_upper: Optional[float]


def surrogate_bounds(point: Sequence[float]) -> SurrogateValues:
    """Closed-form surrogates at a point: (v1, v2) gives K_upper,
    (v1, v2, v3) gives J_lower, (v1, .., v4) gives J_upper at (sum, v4)."""
    p = [float(x) for x in point]
    if len(p) == 2:
        return SurrogateValues(float(K_upper(p[0], p[1])[0][0]), None, None)
    if len(p) == 3:
        return SurrogateValues(None, float(J_lower(*p)), None)
    if len(p) == 4:
        return SurrogateValues(None, None, float(J_upper(sum(p), p[3])))
    raise ValueError("point must have 2, 3 or 4 coordinates")


# ---------------------------------------------------------------------------
# regions


@dataclass(frozen=True)
class Region:
    """An integration region: membership predicate plus iterated limits."""

    kind: str
    tau: Fraction
    variant: str = "default"

    @property
    def dim(self) -> int:
        return {"S3_1": 1, "S3_2": 2, "S5": 1, "S6_a": 2, "S6_b": 2, "S6_A": 2,
                "R7": 3, "R7_tilde": 3, "R8": 4, "R8_tilde": 4}[self.kind]

    def contains(self, p: Sequence[Real]) -> bool:
        """The displayed inequalities verbatim; exact on Fractions."""
        t = self.tau
        h = Fraction(1, 2)
        lo = h - 5 * t / 2
        k = self.kind
        if k == "S3_1":
            (u,) = p
            return 1 - t / 2 <= u <= 1 + t
        if k == "S5":
            (u,) = p
            return Fraction(3, 2) - t <= u <= Fraction(3, 2)
        if k == "S3_2":
            v, u = p
            return 1 - t / 2 <= v <= 1 and v <= u <= (3 - v) / 2
        if k == "S6_a":
            v2, v1 = p
            return h - t <= v2 <= h + 2 * t and Fraction(3, 2) * (1 - t) - v2 <= v1 <= 1 - t / 2
        if k == "S6_b":
            v2, v1 = p
            return (h + 2 * t <= v2 <= 1 - t / 2
                    and Fraction(3, 2) * (1 - t) - v2 <= v1 <= Fraction(3, 2) * (1 + t) - v2)
        if k == "S6_A":
            v2, v1 = p
            return (h - t <= v2 < v1 < 1 - t / 2
                    and Fraction(3, 2) * (1 - t) <= v1 + v2 <= Fraction(3, 2) * (1 + t))
        if k == "R7":
            v3, v2, v1 = p
            s = v1 + v2 + v3
            return (lo <= v3 < v2 < v1 < 1 - t / 2 and v1 + v2 < 1 + t
                    and Fraction(3, 2) * (1 - t) < s < Fraction(3, 2) * (1 + t))
        if k == "R7_tilde":
            v3, v2, v1 = p
            return (lo <= v3 <= (1 + t) / 2 and v3 <= v2 <= (1 + t) / 2
                    and Fraction(3, 2) * (1 - t) - v2 - v3 <= v1 <= Fraction(3, 2) * (1 + t) - v2 - v3)
        if k == "R8":
            v4, v3, v2, v1 = p
            s = v1 + v2 + v3 + v4
            return (lo <= v4 < v3 < v2 < v1 < 1 - t / 2 and v1 + v2 + v3 < 1 + t
                    and Fraction(3, 2) * (1 - t) < s < Fraction(3, 2) * (1 + t))
        if k == "R8_tilde":
            v4, v3, v2, v1 = p
            (a4, b4), (a3, b3), (a2, b2), (a1, b1) = self._r8_box()
            return a4 <= v4 < b4 and a3 <= v3 < b3 and a2 <= v2 <= b2 and a1 <= v1 <= b1
        raise ValueError(f"unknown region {k}")

    def _r8_box(self):
        t = self.tau
        h = Fraction(1, 2)
        lo = h - 5 * t / 2
        # the printed v1 upper limit uses 1/2 - 5tau/4, which does not
        # contain R8; "default" uses the actual lower limit 1/2 - 5tau/2
        sub = h - 5 * t / 4 if self.variant == "printed" else lo
        return (
            (lo, (1 + t) / 3),
            (lo, (1 + t) / 3),
            (lo, Fraction(1, 4) + 7 * t / 4),
            (Fraction(3, 2) * (1 - t) - (1 + t), Fraction(3, 2) * (1 + t) - 3 * sub),
        )

    def limits(self) -> Limits:
        """Iterated limits, outermost first, in the coordinate order used by
        contains()."""
        t = float(self.tau)
        lo = 0.5 - 2.5 * t
        a, b = 1.5 * (1 - t), 1.5 * (1 + t)
        k = self.kind
        if k == "S3_1":
            return [(1 - t / 2, 1 + t)]
        if k == "S5":
            return [(1.5 - t, 1.5)]
        if k == "S3_2":
            return [(1 - t / 2, 1.0), (lambda p: p[:, 0], lambda p: (3 - p[:, 0]) / 2)]
        if k == "S6_a":
            return [(0.5 - t, 0.5 + 2 * t), (lambda p: a - p[:, 0], 1 - t / 2)]
        if k == "S6_b":
            return [(0.5 + 2 * t, 1 - t / 2), (lambda p: a - p[:, 0], lambda p: b - p[:, 0])]
        if k == "S6_A":
            return [(0.5 - t, 1 - t / 2),
                    (lambda p: np.maximum(p[:, 0], a - p[:, 0]), lambda p: np.minimum(1 - t / 2, b - p[:, 0]))]
        if k == "R7_tilde":
            return [(lo, (1 + t) / 2), (lambda p: p[:, 0], (1 + t) / 2),
                    (lambda p: a - p[:, 0] - p[:, 1], lambda p: b - p[:, 0] - p[:, 1])]
        if k == "R7":
            return [
                (lo, (1 + t) / 2),
                (lambda p: p[:, 0], (1 + t) / 2),
                (lambda p: np.maximum(p[:, 1], a - p[:, 0] - p[:, 1]),
                 lambda p: np.minimum.reduce([np.full(p.shape[0], 1 - t / 2), 1 + t - p[:, 1],
                                              b - p[:, 0] - p[:, 1]])),
            ]
        if k == "R8":
            return [
                (lo, (1 + t) / 3),
                (lambda p: p[:, 0], (1 + t) / 3),
                (lambda p: p[:, 1], (1 + t) / 2),
                (lambda p: np.maximum(p[:, 2], a - p[:, 0] - p[:, 1] - p[:, 2]),
                 lambda p: np.minimum.reduce([np.full(p.shape[0], 1 - t / 2), 1 + t - p[:, 1] - p[:, 2],
                                              b - p[:, 0] - p[:, 1] - p[:, 2]])),
            ]
        if k == "R8_tilde":
            return [(float(x), float(y)) for x, y in self._r8_box()]
        raise ValueError(f"unknown region {k}")


# ---------------------------------------------------------------------------
# the integrals


def _f(x: float) -> float:
    return float(x)


def integral_Sj_B(j: int, tau: Real = TAU_DEFAULT, tol: float = 5e-4, mode: str = "bound",
                  jlower_variant: str = "derived", jupper_variant: str = "derived",
                  rtilde8: str = "default") -> QuadResult:
    """B-side integral for S_j in units of eta Z / log X.

    mode="bound" uses the surrogates exactly as the constants do (K bound on
    the second S_6 piece, J lower bound over R~7, J upper bound over R~8);
    mode="exact" integrates the exact kernels over the exact regions.
    """
    tau = Fraction(tau)
    if j == 3:
        t = float(tau)
        if tau == 0:
            return QuadResult(0.0, 0.0, 0)
        r1 = integrate(lambda x: 1 / (x[:, 0] * (3 - x[:, 0])), Region("S3_1", tau).limits(), tol=tol / 2)
        r2 = integrate(lambda x: 1 / (x[:, 0] * x[:, 1] * (3 - x[:, 0] - x[:, 1])),
                       Region("S3_2", tau).limits(), tol=tol / 2)
        return r1 + r2
    if j == 5:
        if tau == 0:
            return QuadResult(0.0, 0.0, 0)
        return integrate(lambda x: 1 / (x[:, 0] * (3 - x[:, 0])), Region("S5", tau).limits(), tol=tol)
    if j == 6:
        return _s6_pieces(tau, tol, surrogate=(mode == "bound"))[0]
    if j == 7:
        if mode == "bound":
            return integrate(
                lambda x: J_lower(x[:, 2], x[:, 1], x[:, 0], jlower_variant) / (x[:, 0] * x[:, 1] * x[:, 2]),
                Region("R7_tilde", tau).limits(), tol=tol)
        return _exact_J_integral(Region("R7", tau), tol)
    if j == 8:
        if mode == "bound":
            return integrate(
                lambda x: J_upper(x.sum(1), x[:, 0], jupper_variant) / np.prod(x, axis=1),
                Region("R8_tilde", tau, rtilde8).limits(), tol=tol)
        return _exact_J_integral(Region("R8", tau), tol)
    raise ValueError("j must be one of 3, 5, 6, 7, 8")


def _exact_J_integral(region: Region, tol: float) -> QuadResult:
    extra = [0.0]

    def f(x):
        val, err = J_vec(x.sum(1), x[:, 0])
        extra[0] = max(extra[0], float(np.max(err / np.prod(x, axis=1))) if len(err) else 0.0)
        return val / np.prod(x, axis=1)

    r = integrate(f, region.limits(), tol=tol)
    # inner-rule error bounded by the worst pointwise error times the region volume
    vol = integrate(lambda x: np.ones(len(x)), region.limits(), tol=1e-3 * max(tol, 1e-12)).value
    return QuadResult(r.value, r.err + extra[0] * vol, r.evals, r.converged)


def _s6_pieces(tau: Fraction, tol: float, surrogate: bool = True):
    """(I_B(6), first piece, second piece); I_B(6) includes the factor 1/2."""
    extra = [0.0, 0.0]

    def exact(x):
        val, err = K_vec(x[:, 1], x[:, 0])
        extra[0] = max(extra[0], float(np.max(err / (x[:, 0] * x[:, 1]))))
        return val / (x[:, 0] * x[:, 1])

    def bound(x):
        val, err = K_upper(x[:, 1], x[:, 0])
        extra[1] = max(extra[1], float(np.max(err / (x[:, 0] * x[:, 1]))))
        return val / (x[:, 0] * x[:, 1])

    ra, rb = Region("S6_a", tau), Region("S6_b", tau)
    p1 = integrate(exact, ra.limits(), tol=tol / 2)
    p2 = integrate(bound if surrogate else exact, rb.limits(), tol=tol / 2)
    va = integrate(lambda x: np.ones(len(x)), ra.limits(), tol=1e-9).value
    vb = integrate(lambda x: np.ones(len(x)), rb.limits(), tol=1e-9).value
    p1 = QuadResult(p1.value, p1.err + extra[0] * va, p1.evals, p1.converged)
    p2 = QuadResult(p2.value, p2.err + extra[1 if surrogate else 0] * vb, p2.evals, p2.converged)
    return (p1 + p2).scale(0.5), p1, p2


def _a_side_integrand(j: int, gamma: float, path: str):
    """Vectorized A-side integrand (with e^-gamma_E) over the j-th region."""
    if path not in ("cancelled", "uncancelled"):
        raise ValueError("path must be 'cancelled' or 'uncancelled'")
    if j in (3, 5):
        if path == "cancelled":
            return lambda x: 2 / (x[:, 0] * (2 - gamma - x[:, 0]))
        return lambda x: np.exp(-EULER_GAMMA) * F_linear((2 - gamma - x[:, 0]) / x[:, 0]) / x[:, 0] ** 2
    if j == 7:
        # coordinates (v3, v2, v1)
        if path == "cancelled":
            return lambda x: 2 / (x[:, 0] * x[:, 1] * x[:, 2] * (2 - gamma - x.sum(1)))
        return lambda x: (np.exp(-EULER_GAMMA) * F_linear((2 - gamma - x.sum(1)) / x[:, 0])
                          / (x[:, 2] * x[:, 1] * x[:, 0] ** 2))
    if j == 6:
        # coordinates (v2, v1); f vanishes identically on this region
        return lambda x: (np.exp(-EULER_GAMMA) * f_linear((2 - gamma - x[:, 0] - x[:, 1]) / x[:, 0])
                          / (x[:, 1] * x[:, 0] ** 2))
    if j == 8:
        return lambda x: (np.exp(-EULER_GAMMA) * f_linear((2 - gamma - x.sum(1)) / x[:, 0])
                          / (np.prod(x, axis=1) * x[:, 0]))
    raise ValueError("j must be one of 3, 5, 6, 7, 8")


def integral_Sj_A(j: int, tau: Real = TAU_DEFAULT, gamma_s: Real = TAU_DEFAULT, tol: float = 5e-4,
                  path: str = "cancelled") -> QuadResult:
    """A-side sieve integral including the e^(-gamma_E) prefactor.

    For j = 3, 5, 7 (upper bound sieve) e^(-gamma_E) F(s) = 2/s, and
    path="cancelled" integrates that simplification while "uncancelled"
    evaluates F itself.  j = 6, 8 use f, which vanishes on these regions.
    """
    tau = Fraction(tau)
    g = float(gamma_s)
    region = {3: "S3_1", 5: "S5", 6: "S6_A", 7: "R7_tilde", 8: "R8"}[j]
    if j in (3, 5) and tau == 0:
        return QuadResult(0.0, 0.0, 0)
    return integrate(_a_side_integrand(j, g, path), Region(region, tau).limits(), tol=tol)


# ---------------------------------------------------------------------------
# assembly


GAMMA_MODES = ("gamma_s", "zero")


@dataclass(frozen=True)
class ConstantsReport:
    c3: QuadResult
    c5: QuadResult
    c6: QuadResult
    c7: QuadResult
    c8: QuadResult
    c7_pos: QuadResult
    c7_neg: QuadResult
    sum: float
    final_bound: float
    tau: Fraction
    gamma_s: Fraction
    gamma_mode: str
    tol: float
    pieces: Dict[str, QuadResult] = field(default_factory=dict)
    alternatives: Dict[str, float] = field(default_factory=dict)
    variants: Dict[str, str] = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)

    @property
    def evals(self) -> int:
        return sum(r.evals for r in (self.c3, self.c5, self.c6, self.c7, self.c8))


PUBLISHED_CONSTANTS = {"c3": -0.187, "c5": -0.172, "c6": -0.088, "c7": -0.124, "c8": -0.037,
                   "c7_pos": 0.114, "c7_neg": 0.238, "sum": -0.608, "final_bound": 0.392}


def _gamma_value(mode: str, gamma_s: Fraction) -> Fraction:
    if mode == "gamma_s":
        return gamma_s
    if mode == "zero":
        return Fraction(0)
    raise ValueError(f"gamma_mode must be one of {GAMMA_MODES}")


def constants_report(tau: Real = TAU_DEFAULT, gamma_s: Real = TAU_DEFAULT, tol: float = 5e-4,
                     gamma_mode: str = "gamma_s", jlower_variant: str = "derived",
                     jupper_variant: str = "derived", rtilde8: str = "default",
                     check_paths: bool = True) -> ConstantsReport:
    """c_3..c_8, their sum and 1 + sum.

    c3 = I_B(3) - I_A(3), c5 = I_B(5) - I_A(5), c6 = -I_B(6),
    c7 = I_B(7) - I_A(7) = c7_pos - c7_neg, c8 = -I_B(8).
    """
    tau = Fraction(tau)
    gamma_s = Fraction(gamma_s)
    g = _gamma_value(gamma_mode, gamma_s)
    each = tol / 2

    b3 = integral_Sj_B(3, tau, each)
    a3 = integral_Sj_A(3, tau, g, each)
    b5 = integral_Sj_B(5, tau, each)
    a5 = integral_Sj_A(5, tau, g, each)
    b6, p1, p2 = _s6_pieces(tau, tol, surrogate=True)
    a6 = integral_Sj_A(6, tau, g, each)
    b7 = integral_Sj_B(7, tau, each, jlower_variant=jlower_variant)
    a7 = integral_Sj_A(7, tau, g, each)
    b8 = integral_Sj_B(8, tau, tol, jupper_variant=jupper_variant, rtilde8=rtilde8)
    a8 = integral_Sj_A(8, tau, g, each)

    c3 = b3 - a3
    c5 = b5 - a5
    c6 = b6.scale(-1)
    c7 = b7 - a7
    c8 = b8.scale(-1)
    total = c3.value + c5.value + c6.value + c7.value + c8.value
    notes = []

    if check_paths:
        for j, res in ((3, a3), (5, a5), (7, a7)):
            other = integral_Sj_A(j, tau, g, each, path="uncancelled")
            if abs(other.value - res.value) > other.err + res.err + 1e-12:
                raise AssertionError(f"A-side paths disagree for j={j}")

    alternatives = {}
    for mode in GAMMA_MODES:
        gm = _gamma_value(mode, gamma_s)
        alternatives[f"c5[{mode}]"] = b5.value - integral_Sj_A(5, tau, gm, each).value
        alternatives[f"c3[{mode}]"] = b3.value - integral_Sj_A(3, tau, gm, each).value
    for key in ("c5[gamma_s]", "c5[zero]"):
        diff = alternatives[key] - PUBLISHED_CONSTANTS["c5"]
        notes.append(f"{key} = {alternatives[key]:.5f}, differs from -0.172 by {diff:+.5f}")

    return ConstantsReport(
        c3=c3, c5=c5, c6=c6, c7=c7, c8=c8, c7_pos=b7, c7_neg=a7,
        sum=total, final_bound=1 + total, tau=tau, gamma_s=gamma_s, gamma_mode=gamma_mode, tol=tol,
        pieces={"B3": b3, "A3": a3, "B5": b5, "A5": a5, "B6": b6, "B6_first": p1, "B6_second": p2,
                "A6": a6, "B7": b7, "A7": a7, "B8": b8, "A8": a8},
        alternatives=alternatives,
        variants={"jlower": jlower_variant, "jupper": jupper_variant, "rtilde8": rtilde8},
        notes=notes,
    )
