"""Per-segment division points.

With different ``xi_i`` the matrix stays row-stochastic but its columns no
longer sum to one, so the centroid is not preserved.  The unnormalized
iteration still collapses to a single point: the barycenter weighted by the
left fixed probability vector ``w`` (``w^T M = w^T``).  Column ``j`` of that
equation reads ``w_j xi_j = w_{j-1} xi_{j-1}``, so ``w_j`` is proportional to
``1 / xi_j``; the uniform case gives back the ordinary centroid.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from polygonflow.errors import LcmOverflow, SizeMismatch
from polygonflow.polygon import Polygon, TransformMatrix, apply_transform, centroid

INT64_MAX = 2**63 - 1


@dataclass(frozen=True, eq=False)
class LimitPrediction:
    weights: np.ndarray
    point: tuple[float, float]
    spectral_gap: float


def left_fixed_vector(T: TransformMatrix) -> np.ndarray:
    """Probability vector ``w`` with ``w^T M = w^T``, from a dense solve."""
    M = T.dense()
    n = T.n
    A = M.T - np.eye(n)
    A[-1, :] = 1.0  # the fixed-point equations are rank n-1; pin the total mass
    rhs = np.zeros(n)
    rhs[-1] = 1.0
    w = np.linalg.solve(A, rhs)
    w.setflags(write=False)
    return w


def second_eigen_magnitude(T: TransformMatrix) -> float:
    mags = np.sort(np.abs(np.linalg.eigvals(T.dense())))[::-1]
    return float(mags[1])


def limit_prediction(p: Polygon, T: TransformMatrix) -> LimitPrediction:
    if T.n != p.n:
        raise SizeMismatch(f"transform is {T.n}x{T.n}, polygon has {p.n} vertices")
    w = left_fixed_vector(T)
    return LimitPrediction(w, (float(w @ p.xs), float(w @ p.ys)), second_eigen_magnitude(T))


def predict_limit_point(p: Polygon, T: TransformMatrix) -> tuple[float, float]:
    return limit_prediction(p, T).point


def centroid_drift(p: Polygon, T: TransformMatrix) -> float:
    """Distance the centroid moves under one application of ``T``."""
    c0 = centroid(p)
    c1 = centroid(apply_transform(T, p))
    return math.hypot(c1[0] - c0[0], c1[1] - c0[1])


def hetero_period_lcm(periods) -> int:
    periods = [int(q) for q in periods]
    if not periods or any(q < 1 for q in periods):
        raise ValueError("periods must be a nonempty sequence of positive integers")
    out = 1
    for q in periods:
        out = math.lcm(out, q)
        if out > INT64_MAX:
            raise LcmOverflow(f"LCM exceeds the 64-bit range after {q}")
    return out
