"""Continuous Fréchet distance via the Alt-Godau free-space diagram.

``decide_frechet`` answers ``d_F(a, b) <= r`` exactly up to floating-point
evaluation of the free-interval endpoints. ``frechet_distance`` brackets the
distance and bisects on the decision procedure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import ParameterError
from .geometry import PolygonalCurve

__all__ = [
    "FrechetConfig",
    "decide_frechet",
    "frechet_distance",
    "reachable_free_space",
]


@dataclass(frozen=True)
class FrechetConfig:
    """Tolerances for ``frechet_distance``.

    ``abs_tol=None`` means 1e-9 times the bounding-box diameter of the pair.
    """

    abs_tol: float | None = None
    rel_tol: float = 1e-9

    def __post_init__(self) -> None:
        if self.abs_tol is not None and self.abs_tol < 0:
            raise ParameterError("abs_tol must be >= 0")
        if self.rel_tol < 0:
            raise ParameterError("rel_tol must be >= 0")
        if self.abs_tol == 0 and self.rel_tol == 0:
            raise ParameterError("at least one tolerance must be positive")


DEFAULT_CONFIG = FrechetConfig()

# Slack in edge-parameter space for chaining intervals across vertices.
_TSLACK = 1e-12


@njit(cache=True, nogil=True)
def _free_interval(a, b, c, r2):
    # {t in [0,1] : |a + t(b-a) - c|^2 <= r2}; returns (lo, hi), lo > hi if empty
    d = a.shape[0]
    A = 0.0
    B = 0.0
    C = 0.0
    for k in range(d):
        u = b[k] - a[k]
        w = a[k] - c[k]
        A += u * u
        B += 2.0 * u * w
        C += w * w
    C -= r2
    if A == 0.0:
        if C <= 0.0:
            return 0.0, 1.0
        return 1.0, 0.0
    disc = B * B - 4.0 * A * C
    if disc < 0.0:
        # tangency lost to rounding
        if disc >= -1e-12 * B * B:
            disc = 0.0
        else:
            return 1.0, 0.0
    sq = math.sqrt(disc)
    lo = (-B - sq) / (2.0 * A)
    hi = (-B + sq) / (2.0 * A)
    if lo < 0.0:
        lo = 0.0
    if hi > 1.0:
        hi = 1.0
    return lo, hi


@njit(cache=True, nogil=True)
def _point_curve_max(p, Q):
    best = 0.0
    for j in range(Q.shape[0]):
        s = 0.0
        for k in range(p.shape[0]):
            u = p[k] - Q[j, k]
            s += u * u
        if s > best:
            best = s
    return math.sqrt(best)


@njit(cache=True, nogil=True)
def _dist(p, q):
    s = 0.0
    for k in range(p.shape[0]):
        u = p[k] - q[k]
        s += u * u
    return math.sqrt(s)


@njit(cache=True, nogil=True)
def _reachable(P, Q, r):
    """Forward-reachable free intervals.

    LR[i, j]: reachable part of the vertical boundary (vertex P[i], edge Q[j]),
    parameterised along Q's edge. BR[i, j]: reachable part of the horizontal
    boundary (edge P[i], vertex Q[j]), parameterised along P's edge.
    Empty intervals have lo > hi.
    """
    p = P.shape[0]
    q = Q.shape[0]
    r2 = r * r
    LR = np.empty((p, q - 1, 2))
    BR = np.empty((p - 1, q, 2))
    LR[:, :, 0] = 1.0
    LR[:, :, 1] = 0.0
    BR[:, :, 0] = 1.0
    BR[:, :, 1] = 0.0
    if _dist(P[0], Q[0]) > r:
        return LR, BR
    # left column: vertex P[0] against Q's edges
    for j in range(q - 1):
        lo, hi = _free_interval(Q[j], Q[j + 1], P[0], r2)
        if lo > hi or lo > _TSLACK:
            break
        LR[0, j, 0] = lo
        LR[0, j, 1] = hi
        if hi < 1.0 - _TSLACK:
            break
    # bottom row: vertex Q[0] against P's edges
    for i in range(p - 1):
        lo, hi = _free_interval(P[i], P[i + 1], Q[0], r2)
        if lo > hi or lo > _TSLACK:
            break
        BR[i, 0, 0] = lo
        BR[i, 0, 1] = hi
        if hi < 1.0 - _TSLACK:
            break
    for i in range(p - 1):
        for j in range(q - 1):
            l_lo = LR[i, j, 0]
            l_hi = LR[i, j, 1]
            b_lo = BR[i, j, 0]
            b_hi = BR[i, j, 1]
            l_ok = l_lo <= l_hi
            b_ok = b_lo <= b_hi
            if not (l_ok or b_ok):
                continue
            # right boundary: vertex P[i+1] vs edge Q[j]
            f_lo, f_hi = _free_interval(Q[j], Q[j + 1], P[i + 1], r2)
            if f_lo <= f_hi:
                if b_ok:
                    LR[i + 1, j, 0] = f_lo
                    LR[i + 1, j, 1] = f_hi
                else:
                    lo = max(l_lo, f_lo)
                    if lo <= f_hi:
                        LR[i + 1, j, 0] = lo
                        LR[i + 1, j, 1] = f_hi
            # top boundary: edge P[i] vs vertex Q[j+1]
            f_lo, f_hi = _free_interval(P[i], P[i + 1], Q[j + 1], r2)
            if f_lo <= f_hi:
                if l_ok:
                    BR[i, j + 1, 0] = f_lo
                    BR[i, j + 1, 1] = f_hi
                else:
                    lo = max(b_lo, f_lo)
                    if lo <= f_hi:
                        BR[i, j + 1, 0] = lo
                        BR[i, j + 1, 1] = f_hi
    return LR, BR


@njit(cache=True, nogil=True)
def _decide(P, Q, r):
    p = P.shape[0]
    q = Q.shape[0]
    if p == 1:
        return _point_curve_max(P[0], Q) <= r
    if q == 1:
        return _point_curve_max(Q[0], P) <= r
    if _dist(P[0], Q[0]) > r or _dist(P[p - 1], Q[q - 1]) > r:
        return False
    LR, BR = _reachable(P, Q, r)
    # the corner (1, 1) of the last cell must be reached from its left or bottom
    if LR[p - 1, q - 2, 0] <= LR[p - 1, q - 2, 1] and LR[p - 1, q - 2, 1] >= 1.0 - _TSLACK:
        return True
    if BR[p - 2, q - 1, 0] <= BR[p - 2, q - 1, 1] and BR[p - 2, q - 1, 1] >= 1.0 - _TSLACK:
        return True
    return False


@njit(cache=True, nogil=True)
def _distance(P, Q, abs_tol, rel_tol):
    p = P.shape[0]
    q = Q.shape[0]
    if p == 1:
        return _point_curve_max(P[0], Q)
    if q == 1:
        return _point_curve_max(Q[0], P)
    lo = max(_dist(P[0], Q[0]), _dist(P[p - 1], Q[q - 1]))
    if _decide(P, Q, lo):
        return lo
    hi = 0.0
    for i in range(p):
        for j in range(q):
            dd = _dist(P[i], Q[j])
            if dd > hi:
                hi = dd
    # rounding in the free intervals can reject the exact upper bound
    while not _decide(P, Q, hi):
        hi = hi * (1.0 + 1e-12) + 1e-300
    while hi - lo > max(abs_tol, rel_tol * lo):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if _decide(P, Q, mid):
            hi = mid
        else:
            lo = mid
    return hi


def _arr(c) -> np.ndarray:
    if isinstance(c, PolygonalCurve):
        return c.vertices
    v = np.asarray(c, dtype=np.float64)
    return v.reshape(1, -1) if v.ndim == 1 else v


def _check_pair(P: np.ndarray, Q: np.ndarray) -> None:
    if P.shape[0] == 0 or Q.shape[0] == 0:
        raise ParameterError("curves must be non-empty")
    if P.shape[1] != Q.shape[1]:
        raise ParameterError(f"dimension mismatch: {P.shape[1]} vs {Q.shape[1]}")


def decide_frechet(a, b, r: float) -> bool:
    """Return True iff ``d_F(a, b) <= r`` (closed comparison)."""
    if not r >= 0:
        raise ParameterError(f"radius must be >= 0, got {r}")
    P, Q = _arr(a), _arr(b)
    _check_pair(P, Q)
    return bool(_decide(P, Q, float(r)))


def resolve_abs_tol(P: np.ndarray, Q: np.ndarray, cfg: FrechetConfig) -> float:
    if cfg.abs_tol is not None:
        return cfg.abs_tol
    both = np.vstack((P, Q))
    diam = float(np.linalg.norm(both.max(axis=0) - both.min(axis=0)))
    # identical single points: any positive floor stops the bisection
    return 1e-9 * diam if diam > 0 else 1e-300


def frechet_distance(a, b, cfg: FrechetConfig = DEFAULT_CONFIG) -> float:
    """Fréchet distance within ``max(abs_tol, rel_tol * d_F)``.

    The returned value is the upper end of the final bracket, so the
    decision procedure accepts it.
    """
    P, Q = _arr(a), _arr(b)
    _check_pair(P, Q)
    return float(_distance(P, Q, resolve_abs_tol(P, Q, cfg), cfg.rel_tol))


def reachable_free_space(a, b, r: float) -> tuple[np.ndarray, np.ndarray]:
    """Forward-reachable free intervals on the cell boundaries of ``(a, b)``.

    Returns ``(LR, BR)`` with shapes ``(|a|, |b|-1, 2)`` and ``(|a|-1, |b|, 2)``;
    see ``_reachable``. Both curves need at least two vertices.
    """
    P, Q = _arr(a), _arr(b)
    _check_pair(P, Q)
    if P.shape[0] < 2 or Q.shape[0] < 2:
        raise ParameterError("free-space diagram needs curves with >= 2 vertices")
    return _reachable(P, Q, float(r))
