"""Limiting-ellipse geometry.

In the limit the normalized vertices are ``sqrt(2/n) A (cos t_i, sin t_i)``
where the rows of the 2x2 matrix ``A`` are ``(cos a, sin a)`` and
``(cos b, sin b)`` with ``a = theta_u - k arg z`` and ``b = theta_v - k arg z``.
Its SVD gives the ellipse: ``U`` the axis directions, ``sqrt(2/n) sigma`` the
semi-axes.  Because ``A A^T = [[1, c], [c, 1]]`` with ``c = cos(a - b)``, the
singular values are ``sqrt(1 +- |c|)`` and the major axis is at +-45 degrees
whenever ``c != 0``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from polygonflow.errors import CircleDegenerate, DegenerateFit
from polygonflow.harmonic import rotation_number

CIRCLE_TOL = 1e-9


@dataclass(frozen=True)
class CoefficientMatrix:
    a: float
    b: float
    a11: float
    a12: float
    a21: float
    a22: float

    @property
    def array(self) -> np.ndarray:
        return np.array([[self.a11, self.a12], [self.a21, self.a22]])


@dataclass(frozen=True, eq=False)
class EllipseDecomposition:
    """``A = U diag(sigma1, sigma2) V^T`` with ``det U = +1``."""

    U: np.ndarray
    sigma1: float
    sigma2: float
    V: np.ndarray
    semi_axes: tuple[float, float]

    @property
    def sigma(self) -> np.ndarray:
        return np.array([self.sigma1, self.sigma2])

    def reconstruct(self) -> np.ndarray:
        return self.U @ np.diag(self.sigma) @ self.V.T


def coefficient_matrix(theta_u: float, theta_v: float, n: int, xi: float,
                       k: int) -> CoefficientMatrix:
    phase = rotation_number(n, xi).phase
    a = theta_u - k * phase
    b = theta_v - k * phase
    return CoefficientMatrix(a, b, math.cos(a), math.sin(a), math.cos(b), math.sin(b))


def _rot(t):
    c, s = math.cos(t), math.sin(t)
    return np.array([[c, -s], [s, c]])


def svd_2x2(A, n: Optional[int] = None) -> EllipseDecomposition:
    """Closed-form SVD of a real 2x2 matrix.

    Splitting ``A`` into a similarity part ``[[E, -H], [H, E]]`` and a
    reflection part ``[[F, G], [G, -F]]`` gives ``sigma = Q +- R`` with
    ``Q = hypot(E, H)``, ``R = hypot(F, G)`` and rotation angles from the two
    phases.  When ``Q < R`` the second singular value flips sign; that sign is
    moved into ``V`` so ``U`` stays a rotation.  ``semi_axes`` are the singular
    values scaled by ``sqrt(2/n)`` when ``n`` is given, unscaled otherwise.
    """
    if isinstance(A, CoefficientMatrix):
        A = A.array
    A = np.asarray(A, dtype=np.float64)
    if A.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix entries must be finite")
    (a11, a12), (a21, a22) = A
    E = 0.5 * (a11 + a22)
    F = 0.5 * (a11 - a22)
    G = 0.5 * (a21 + a12)
    H = 0.5 * (a21 - a12)
    Q = math.hypot(E, H)
    R = math.hypot(F, G)
    s1 = Q + R
    s2 = Q - R
    t1 = math.atan2(G, F)
    t2 = math.atan2(H, E)
    phi = 0.5 * (t2 + t1)
    theta = 0.5 * (t2 - t1)
    U = _rot(phi)
    Vt = _rot(theta)
    if s2 < 0:
        s2 = -s2
        Vt[1] = -Vt[1]
    scale = 1.0 if n is None else math.sqrt(2.0 / n)
    return EllipseDecomposition(U, s1, s2, Vt.T, (scale * s1, scale * s2))


def paper_sigma(theta_u: float, theta_v: float, k: int, arg_z: float,
                n: int) -> tuple[float, float]:
    """``sqrt(2/n) * sqrt(1 +- sin(theta_u + theta_v - 2 k arg z))``.

    This closed form does not match the exact singular values in general
    (for ``A = I`` it gives ``(sqrt 2, 0)`` instead of ``(1, 1)``); it is kept
    so the two can be reported side by side.
    """
    s = math.sin(theta_u + theta_v - 2 * k * arg_z)
    scale = math.sqrt(2.0 / n)
    return scale * math.sqrt(max(1.0 + s, 0.0)), scale * math.sqrt(max(1.0 - s, 0.0))


def _canonical_axis_angle(t: float) -> float:
    """Reduce a line direction to ``(-pi/2, pi/2]``."""
    t = math.remainder(t, math.pi)
    if t <= -math.pi / 2:
        t += math.pi
    return t


def orientation(dec: EllipseDecomposition) -> float:
    """Angle of the major axis, in ``(-pi/2, pi/2]``."""
    if dec.sigma1 - dec.sigma2 < CIRCLE_TOL:
        raise CircleDegenerate(
            f"singular values {dec.sigma1!r} and {dec.sigma2!r} coincide"
        )
    return _canonical_axis_angle(math.atan2(dec.U[1, 0], dec.U[0, 0]))


@dataclass(frozen=True)
class EllipseFit:
    center: tuple[float, float]
    semi_axes: tuple[float, float]
    angle: float
    conic: tuple


def fit_ellipse(points) -> EllipseFit:
    """Direct least-squares ellipse fit (Fitzgibbon; Halir-Flusser partition).

    Points are centered and isotropically scaled before fitting, which
    leaves the axis angle unchanged.  Returns the center, ``(major, minor)``
    semi-axes and the major-axis angle in ``(-pi/2, pi/2]``.
    """
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 6:
        raise DegenerateFit("need at least 6 points of shape (m, 2)")
    shift = pts.mean(axis=0)
    scale = float(np.sqrt(np.mean(np.sum((pts - shift) ** 2, axis=1))))
    if not scale > 0:
        raise DegenerateFit("all points coincide")
    x, y = ((pts - shift) / scale).T

    D1 = np.column_stack([x * x, x * y, y * y])
    D2 = np.column_stack([x, y, np.ones_like(x)])
    S1 = D1.T @ D1
    S2 = D1.T @ D2
    S3 = D2.T @ D2
    if np.linalg.cond(S3) > 1e12:
        raise DegenerateFit("points are collinear")
    T = -np.linalg.solve(S3, S2.T)
    M = S1 + S2 @ T
    M = np.array([M[2] / 2.0, -M[1], M[0] / 2.0])
    evals, evecs = np.linalg.eig(M)
    evecs = np.real(evecs)
    cond = 4 * evecs[0] * evecs[2] - evecs[1] ** 2
    ok = np.flatnonzero(cond > 0)
    if ok.size == 0:
        raise DegenerateFit("no elliptic conic fits the points")
    a1 = evecs[:, ok[np.argmin(np.abs(np.real(evals[ok])))]]
    A, B, C = a1
    Dd, Ee, Ff = T @ a1

    disc = 4 * A * C - B * B
    if disc <= 0:
        raise DegenerateFit("fitted conic is not an ellipse")
    cx, cy = np.linalg.solve([[2 * A, B], [B, 2 * C]], [-Dd, -Ee])
    f0 = A * cx * cx + B * cx * cy + C * cy * cy + Dd * cx + Ee * cy + Ff
    lam, vec = np.linalg.eigh(np.array([[A, B / 2], [B / 2, C]]))
    axes_sq = -f0 / lam
    if np.any(axes_sq <= 0):
        raise DegenerateFit("fitted conic is imaginary")
    axes = np.sqrt(axes_sq)
    major = int(np.argmax(axes))
    angle = _canonical_axis_angle(math.atan2(vec[1, major], vec[0, major]))
    return EllipseFit(
        center=(float(cx * scale + shift[0]), float(cy * scale + shift[1])),
        semi_axes=(float(axes[major] * scale), float(axes[1 - major] * scale)),
        angle=angle,
        conic=(A, B, C, Dd, Ee, Ff),
    )


def ellipse_report(theta_u: float, theta_v: float, n: int, xi: float, k: int) -> dict:
    """Exact and closed-form singular values side by side, as plain data."""
    cm = coefficient_matrix(theta_u, theta_v, n, xi, k)
    dec = svd_2x2(cm, n)
    scale = math.sqrt(2.0 / n)
    printed = paper_sigma(theta_u, theta_v, k, rotation_number(n, xi).phase, n)
    try:
        orient = orientation(dec)
    except CircleDegenerate:
        orient = None
    exact = (scale * dec.sigma1, scale * dec.sigma2)
    return {
        "a": cm.a,
        "b": cm.b,
        "sigma_svd": [dec.sigma1, dec.sigma2],
        "sigma_paper": [printed[0] / scale, printed[1] / scale],
        "semi_axes": list(dec.semi_axes),
        "orientation_rad": orient,
        "discrepancy_flag": bool(max(abs(e - p) for e, p in zip(exact, printed)) > 1e-9),
    }
