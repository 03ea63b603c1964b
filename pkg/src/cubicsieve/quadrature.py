"""
Globally adaptive quadrature over iterated regions.

A region is given as a list of limits, outermost variable first.  Each
limit is a pair (lo, hi) whose entries are numbers or vectorized callables
of the preceding coordinates, so a point t of the unit cube maps to

    x_0 = lo_0 + t_0 (hi_0 - lo_0),  x_1 = lo_1(x_0) + t_1 (hi_1(x_0) - lo_1(x_0)), ...

with Jacobian prod max(hi_i - lo_i, 0).  Empty inner ranges contribute 0.
One dimension uses Gauss-Kronrod 7/15; two or more use the Genz-Malik
degree 7 rule with its embedded degree 5 rule for the error estimate.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, List, Sequence, Tuple, Union

import numpy as np

Bound = Union[float, Callable[[np.ndarray], np.ndarray]]
Limits = Sequence[Tuple[Bound, Bound]]

# Gauss-Kronrod 15 nodes on [-1, 1] (non-negative half) and weights.
_XGK = np.array([
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0,
])
_WGK = np.array([
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
])
GK_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])  # 15 nodes, ascending
GK_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
G_WEIGHTS = np.zeros(15)
G_WEIGHTS[[1, 3, 5, 7, 9, 11, 13]] = np.concatenate([_WG[:-1], _WG[::-1]])


@dataclass(frozen=True)
class QuadResult:
    value: float
    err: float
    evals: int
    converged: bool = True

    def __add__(self, other: "QuadResult") -> "QuadResult":
        return QuadResult(self.value + other.value, self.err + other.err, self.evals + other.evals,
                          self.converged and other.converged)

    def __sub__(self, other: "QuadResult") -> "QuadResult":
        return QuadResult(self.value - other.value, self.err + other.err, self.evals + other.evals,
                          self.converged and other.converged)

    def scale(self, c: float) -> "QuadResult":
        return QuadResult(c * self.value, abs(c) * self.err, self.evals, self.converged)


def _bound(b: Bound, prefix: np.ndarray) -> np.ndarray:
    if callable(b):
        return np.asarray(b(prefix), dtype=np.float64) * np.ones(prefix.shape[0])
    return np.full(prefix.shape[0], float(b))


def map_unit_cube(t: np.ndarray, limits: Limits) -> Tuple[np.ndarray, np.ndarray]:
    """Points t in [0,1]^d to region coordinates, with the Jacobian."""
    n, d = t.shape
    x = np.empty_like(t)
    jac = np.ones(n)
    for i, (lo_b, hi_b) in enumerate(limits):
        prefix = x[:, :i]
        lo = _bound(lo_b, prefix)
        hi = _bound(hi_b, prefix)
        width = np.maximum(hi - lo, 0.0)
        x[:, i] = lo + t[:, i] * width
        jac *= width
    return x, jac


# ---------------------------------------------------------------------------
# Genz-Malik


def _genz_malik_table(d: int):
    l2 = math.sqrt(9 / 70)
    l3 = math.sqrt(9 / 10)
    l4 = math.sqrt(9 / 10)
    l5 = math.sqrt(9 / 19)
    pts: List[np.ndarray] = [np.zeros(d)]
    w7: List[float] = [(12824 - 9120 * d + 400 * d * d) / 19683]
    w5: List[float] = [(729 - 950 * d + 50 * d * d) / 729]
    for lam, a7, a5 in ((l2, 980 / 6561, 245 / 486), (l3, (1820 - 400 * d) / 19683, (265 - 100 * d) / 1458)):
        for i in range(d):
            for s in (1, -1):
                p = np.zeros(d)
                p[i] = s * lam
                pts.append(p)
                w7.append(a7)
                w5.append(a5)
    for i, j in itertools.combinations(range(d), 2):
        for si, sj in itertools.product((1, -1), repeat=2):
            p = np.zeros(d)
            p[i], p[j] = si * l4, sj * l4
            pts.append(p)
            w7.append(200 / 19683)
            w5.append(25 / 729)
    for signs in itertools.product((1, -1), repeat=d):
        pts.append(l5 * np.array(signs, dtype=float))
        w7.append(6859 / 19683 / 2 ** d)
        w5.append(0.0)
    return np.array(pts), np.array(w7), np.array(w5), l2, l3


class _Rule:
    def __init__(self, d: int):
        self.d = d
        if d == 1:
            self.nodes = GK_NODES[:, None]
            self.w_hi = GK_WEIGHTS / 2  # unit-volume normalization on [-1,1]
            self.w_lo = G_WEIGHTS / 2
        else:
            self.nodes, w7, w5, self.l2, self.l3 = _genz_malik_table(d)
            self.w_hi, self.w_lo = w7, w5
        self.npts = self.nodes.shape[0]

    def apply(self, f, limits, centers, halves):
        """Rule values, error estimates and split axes for m boxes."""
        m, d = centers.shape
        t = centers[:, None, :] + halves[:, None, :] * self.nodes[None, :, :]
        x, jac = map_unit_cube(t.reshape(-1, d), limits)
        vals = np.zeros(x.shape[0])
        live = jac > 0
        if live.any():
            vals[live] = np.asarray(f(x[live]), dtype=np.float64) * jac[live]
        vals = vals.reshape(m, self.npts)
        vol = np.prod(2 * halves, axis=1)
        hi = vol * (vals @ self.w_hi)
        lo = vol * (vals @ self.w_lo)
        err = np.abs(hi - lo)
        if d == 1:
            axis = np.zeros(m, dtype=np.int64)
        else:
            c = vals[:, :1]
            a2 = vals[:, 1 : 1 + 2 * d].reshape(m, d, 2).sum(axis=2) - 2 * c
            a3 = vals[:, 1 + 2 * d : 1 + 4 * d].reshape(m, d, 2).sum(axis=2) - 2 * c
            diff = np.abs(a2 - (self.l2 / self.l3) ** 2 * a3)
            # ties go to the widest side
            axis = np.argmax(diff + 1e-14 * halves * (np.abs(hi) + 1)[:, None], axis=1)
        return hi, err, axis


_RULES = {}


def _rule(d: int) -> _Rule:
    if d not in _RULES:
        _RULES[d] = _Rule(d)
    return _RULES[d]


def integrate(f: Callable[[np.ndarray], np.ndarray], limits: Limits, tol: float = 5e-4,
              rtol: float = 0.0, max_evals: int = 5_000_000) -> QuadResult:
    """Adaptive integral of a vectorized f over an iterated region.

    f receives an (n, d) array of points and returns n values.  The result
    reported is the (value, err) pair with the smallest err seen along the
    deterministic refinement path, so tightening tol never raises err.
    """
    d = len(limits)
    if d == 0:
        raise ValueError("need at least one dimension")
    if tol <= 0 and rtol <= 0:
        raise ValueError("tol or rtol must be positive")
    rule = _rule(d)
    centers = np.full((1, d), 0.5)
    halves = np.full((1, d), 0.5)
    vals, errs, axes = rule.apply(f, limits, centers, halves)
    evals = rule.npts
    best = (float(vals.sum()), float(errs.sum()))
    while True:
        total = float(np.sum(vals))
        err = float(np.sum(errs))
        if err < best[1]:
            best = (total, err)
        if err <= max(tol, rtol * abs(total)):
            return QuadResult(best[0], best[1], evals, True)
        if evals >= max_evals:
            return QuadResult(best[0], best[1], evals, False)
        order = np.argsort(-errs, kind="stable")
        cum = np.cumsum(errs[order])
        k = int(np.searchsorted(cum, 0.5 * err)) + 1
        k = max(1, min(k, 2048, len(order)))
        pick = np.sort(order[:k])
        if np.all(halves[pick] < 1e-13):
            return QuadResult(best[0], best[1], evals, False)
        keep = np.ones(len(vals), dtype=bool)
        keep[pick] = False
        c = centers[pick]
        h = halves[pick].copy()
        ax = axes[pick]
        rows = np.arange(k)
        h[rows, ax] /= 2
        c_lo = c.copy()
        c_hi = c.copy()
        c_lo[rows, ax] -= h[rows, ax]
        c_hi[rows, ax] += h[rows, ax]
        new_c = np.concatenate([c_lo, c_hi])
        new_h = np.concatenate([h, h])
        nv, ne, na = rule.apply(f, limits, new_c, new_h)
        evals += rule.npts * new_c.shape[0]
        centers = np.concatenate([centers[keep], new_c])
        halves = np.concatenate([halves[keep], new_h])
        vals = np.concatenate([vals[keep], nv])
        errs = np.concatenate([errs[keep], ne])
        axes = np.concatenate([axes[keep], na])


def integrate_1d(g: Callable[[np.ndarray], np.ndarray], a: float, b: float, tol: float = 1e-10,
                 rtol: float = 0.0, max_evals: int = 200_000) -> QuadResult:
    """Scalar-limit convenience wrapper; g takes a 1-D array."""
    return integrate(lambda x: g(x[:, 0]), [(a, b)], tol=tol, rtol=rtol, max_evals=max_evals)


# ---------------------------------------------------------------------------
# fixed Gauss-Legendre for vectorized inner integrals


_GL = {}


def gauss_legendre(n: int) -> Tuple[np.ndarray, np.ndarray]:
    if n not in _GL:
        _GL[n] = np.polynomial.legendre.leggauss(n)
    return _GL[n]


def gl_integrate(g: Callable[[np.ndarray], np.ndarray], a: np.ndarray, b: np.ndarray, n: int = 24):
    """Vectorized integral of g over [a_k, b_k] (empty when b <= a).

    g maps an (m, n) node array to values of the same shape.  Returns the
    n-point value and |Q_n - Q_2n| as an error estimate.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    width = np.maximum(b - a, 0.0)
    out = []
    for k in (n, 2 * n):
        x, w = gauss_legendre(k)
        nodes = a[:, None] + (x[None, :] + 1) / 2 * width[:, None]
        vals = np.where(width[:, None] > 0, g(np.where(width[:, None] > 0, nodes, 1.0)), 0.0)
        out.append(vals @ w * width / 2)
    return out[1], np.abs(out[1] - out[0])
