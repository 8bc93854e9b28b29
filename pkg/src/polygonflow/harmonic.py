"""First-harmonic dynamics of the uniform averaging map.

The cosine/sine vectors ``C(tau + s)``, ``S(tau + s)`` with
``tau_i = 2 pi i / n`` (scaled by ``sqrt(2/n)``) span the plane the
normalized iteration is attracted to.  One step maps the pair at shift
``s`` to the pair at shift ``s + pi/n``::

    M S_0 = alpha C_1 + beta S_1
    M C_0 = beta  C_1 - alpha S_1

with ``alpha = (2 xi - 1) sin(pi/n)`` and ``beta = cos(pi/n)``.  Writing
``z = beta + i alpha`` gives the k-th powers in closed form::

    M^k S_0 = |z|^k (cos(k arg z) S_k + sin(k arg z) C_k)
    M^k C_0 = |z|^k (cos(k arg z) C_k - sin(k arg z) S_k)

where ``C_k``/``S_k`` carry the shift ``k pi / n``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from polygonflow._backend import kernels
from polygonflow.errors import SizeMismatch, TooFewVertices
from polygonflow.polygon import (
    NORMALIZED,
    IterationTrace,
    Polygon,
    Uniform,
    _check_xi,
    as_scheme,
    iterate,
)

ZERO_PROJECTION = 1e-24


@dataclass(frozen=True, eq=False)
class HarmonicBasis:
    n: int
    shift: float
    C: np.ndarray
    S: np.ndarray


@dataclass(frozen=True)
class RotationNumber:
    n: int
    xi: float
    alpha: float
    beta: float
    z: complex
    modulus: float
    phase: float


@dataclass(frozen=True)
class D2Projection:
    """Coordinates of a vector against ``C_0`` and ``S_0``.

    ``theta`` is ``None`` when the in-plane part vanishes
    (``zeta**2 + eta**2 < 1e-24``); ``zero_projection`` flags that case.
    """

    zeta: float
    eta: float
    theta: Optional[float]
    residual: float
    zero_projection: bool


def _require_n(n):
    if n < 3:
        raise TooFewVertices(f"n must be at least 3, got {n}")


def _freeze(a):
    a.setflags(write=False)
    return a


def make_basis(n: int, shift: float = 0.0) -> HarmonicBasis:
    _require_n(n)
    ang = 2.0 * np.pi * np.arange(n) / n + shift
    scale = math.sqrt(2.0 / n)
    return HarmonicBasis(n, shift, _freeze(scale * np.cos(ang)), _freeze(scale * np.sin(ang)))


def shifted_basis(n: int, k: int) -> HarmonicBasis:
    """Basis at shift ``k pi / n``.

    Angles are ``pi (2i + k) / n`` with the integer ``2i + k`` reduced mod
    ``2n`` first, so ``C_{k+2}`` is an exact cyclic relabeling of ``C_k``.
    """
    _require_n(n)
    r = (2 * np.arange(n) + int(k)) % (2 * n)
    ang = np.pi * r / n
    scale = math.sqrt(2.0 / n)
    return HarmonicBasis(n, k * math.pi / n, _freeze(scale * np.cos(ang)), _freeze(scale * np.sin(ang)))


def rotation_number(n: int, xi: float) -> RotationNumber:
    _require_n(n)
    xi = _check_xi(xi, "xi")
    alpha = (2.0 * xi - 1.0) * math.sin(math.pi / n)
    beta = math.cos(math.pi / n)
    z = complex(beta, alpha)
    return RotationNumber(n, xi, alpha, beta, z, abs(z), math.atan2(alpha, beta))


def closed_power_S(n: int, xi: float, k: int) -> np.ndarray:
    """``M^k S_0`` evaluated in closed form."""
    if k < 0:
        raise ValueError("k must be non-negative")
    b = shifted_basis(n, k)
    if k == 0:
        return b.S.copy()
    rn = rotation_number(n, xi)
    r = rn.modulus ** k
    return r * (math.cos(k * rn.phase) * b.S + math.sin(k * rn.phase) * b.C)


def closed_power_C(n: int, xi: float, k: int) -> np.ndarray:
    """``M^k C_0`` evaluated in closed form."""
    if k < 0:
        raise ValueError("k must be non-negative")
    b = shifted_basis(n, k)
    if k == 0:
        return b.C.copy()
    rn = rotation_number(n, xi)
    r = rn.modulus ** k
    return r * (math.cos(k * rn.phase) * b.C - math.sin(k * rn.phase) * b.S)


def closed_power_complex(n: int, xi: float, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Same pair as ``closed_power_S``/``closed_power_C`` computed from ``z**k``.

    ``M^k S_0 = Re(z^k) S_k + Im(z^k) C_k`` and
    ``M^k C_0 = Im(conj(z)^k) S_k + Re(conj(z)^k) C_k``.
    """
    b = shifted_basis(n, k)
    zk = rotation_number(n, xi).z ** k
    zbk = zk.conjugate()
    return zk.real * b.S + zk.imag * b.C, zbk.imag * b.S + zbk.real * b.C


def predicted_norm(n: int, xi: float, k: int) -> float:
    """Norm ``|z|^k`` of ``M^k u`` for any unit ``u`` in span(C_0, S_0)."""
    if k < 0:
        raise ValueError("k must be non-negative")
    return rotation_number(n, xi).modulus ** k


def project_D2(vec, n: Optional[int] = None) -> D2Projection:
    vec = np.asarray(vec, dtype=np.float64)
    if n is None:
        n = vec.shape[0]
    if vec.shape != (n,):
        raise SizeMismatch(f"vector of length {vec.shape[0]} where n = {n}")
    b = make_basis(n)
    zeta = float(vec @ b.C)
    eta = float(vec @ b.S)
    residual = float(np.linalg.norm(vec - zeta * b.C - eta * b.S))
    zero = zeta * zeta + eta * eta < ZERO_PROJECTION
    theta = None if zero else math.atan2(eta, zeta)
    return D2Projection(zeta, eta, theta, residual, zero)


def predict_vertex_vectors(theta_u: float, theta_v: float, n: int, xi: float,
                           k: int) -> tuple[np.ndarray, np.ndarray]:
    """Normalized coordinate vectors after k steps from phase-``theta`` starts.

    ``u_k = cos(theta_u - k arg z) C_k + sin(theta_u - k arg z) S_k``, and
    likewise for ``v_k``.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    phase = rotation_number(n, xi).phase
    b = shifted_basis(n, k)
    a = theta_u - k * phase
    c = theta_v - k * phase
    u = math.cos(a) * b.C + math.sin(a) * b.S
    v = math.cos(c) * b.C + math.sin(c) * b.S
    return u, v


def phase_start(theta: float, n: int) -> np.ndarray:
    """Unit vector ``cos(theta) C_0 + sin(theta) S_0``."""
    b = make_basis(n)
    return math.cos(theta) * b.C + math.sin(theta) * b.S


def predicted_trace(theta_u: float, theta_v: float, n: int, xi: float,
                    steps: int) -> IterationTrace:
    """Closed-form counterpart of a normalized :func:`~polygonflow.polygon.iterate` run."""
    xs = np.empty((steps + 1, n))
    ys = np.empty((steps + 1, n))
    for k in range(steps + 1):
        xs[k], ys[k] = predict_vertex_vectors(theta_u, theta_v, n, xi, k)
    norms = np.full((steps + 1, 2), rotation_number(n, xi).modulus)
    norms[0] = 1.0
    for a in (xs, ys, norms):
        a.setflags(write=False)
    return IterationTrace(xs, ys, norms, NORMALIZED, Uniform(xi))


def d2_residuals(vec, xi: float, K: int) -> np.ndarray:
    """Out-of-plane residual of the normalized iterates of one vector, k = 0..K."""
    n = len(vec)
    b = make_basis(n)
    xis = np.full(n, _check_xi(xi, "xi"))
    cur = np.asarray(vec, dtype=np.float64)
    cur = cur - cur.mean()
    cur = cur / np.linalg.norm(cur)
    out = np.empty(K + 1)
    for k in range(K + 1):
        if k:
            cur = kernels.step(xis, cur)
            cur = cur - cur.mean()
            cur = cur / np.linalg.norm(cur)
        out[k] = np.linalg.norm(cur - (cur @ b.C) * b.C - (cur @ b.S) * b.S)
    return out


def d2_decay_rate(p: Polygon, scheme, K: int) -> np.ndarray:
    """Combined out-of-plane residual ``sqrt(r_x**2 + r_y**2)`` along a normalized run."""
    if K < 2:
        raise ValueError("K must be at least 2")
    scheme = as_scheme(scheme)
    if not isinstance(scheme, Uniform):
        raise TypeError("the first-harmonic plane is only invariant for uniform schemes")
    trace = iterate(p, scheme, K, NORMALIZED)
    b = make_basis(p.n)
    out = np.empty(K + 1)
    for k in range(K + 1):
        sq = 0.0
        for v in (trace.xs[k], trace.ys[k]):
            r = v - (v @ b.C) * b.C - (v @ b.S) * b.S
            sq += float(r @ r)
        out[k] = math.sqrt(sq)
    return out


def step_ratios(residuals, start: int, stop: int) -> np.ndarray:
    """``residual[k+1] / residual[k]`` for ``k`` in ``[start, stop)``."""
    r = np.asarray(residuals)
    return r[start + 1:stop + 1] / r[start:stop]


__all__ = [
    "HarmonicBasis", "RotationNumber", "D2Projection", "make_basis",
    "shifted_basis", "rotation_number", "closed_power_S", "closed_power_C",
    "closed_power_complex", "predicted_norm", "project_D2",
    "predict_vertex_vectors", "phase_start", "predicted_trace",
    "d2_residuals", "d2_decay_rate", "step_ratios",
]
