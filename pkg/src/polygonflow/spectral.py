"""Closed-form eigenstructure of the uniform averaging matrix.

With ``M = (1 - xi) I + xi S`` and ``S`` the cyclic upshift, the Fourier
vectors ``v_j[m] = omega_j**m / sqrt(n)`` (``omega_j = exp(2 pi i j / n)``)
are eigenvectors with eigenvalues ``lambda_j = 1 - xi + xi * omega_j``.  All
eigenvalues lie on the circle of radius ``xi`` about ``1 - xi`` and satisfy

    |lambda_j|**2 = 1 - 4 xi (1 - xi) sin(pi j / n)**2.

The damping factor is the magnitude ratio of the second conjugate pair
(``j = 2``) to the first (``j = 1``).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from polygonflow.errors import IndexOutOfRange, TooFewVertices
from polygonflow.polygon import _check_xi


@dataclass(frozen=True)
class EigenPair:
    index: int
    omega: complex
    lam: complex
    vector: np.ndarray


@dataclass(frozen=True)
class DampingReport:
    """Damping factor of the uniform transform at one ``(n, xi)``.

    ``rho`` comes from the complex eigenvalues.  ``rho_closed`` is the
    simplified expression ``sqrt((1 - c sin^2(2pi/n)) / (1 - c sin^2(pi/n)))``
    with ``c = 4 xi (1 - xi)``, and ``rho_printed`` the variant whose
    denominator uses ``sin^2(4pi/n)``; the two closed forms are kept for
    comparison only and only ``rho_closed`` agrees with ``rho``.
    """

    n: int
    xi: float
    magnitudes: np.ndarray
    rho: float
    rho_closed: float
    rho_printed: float
    argmin_xi: float


def roots_of_unity(n: int) -> np.ndarray:
    if n < 1:
        raise ValueError("n must be positive")
    j = np.arange(n)
    # evaluate the lower half only so omega_{n-j} is exactly conj(omega_j)
    w = np.exp(2j * np.pi * np.minimum(j, n - j) / n)
    upper = j > n - j
    w[upper] = np.conj(w[upper])
    w[j == n - j] = -1.0
    return w


def eigenvalues(n: int, xi: float) -> np.ndarray:
    """All ``lambda_j`` for ``j = 0..n-1``, in index order."""
    xi = _check_xi(xi, "xi")
    return 1.0 - xi + xi * roots_of_unity(n)


def eigenpair(n: int, xi: float, j: int) -> EigenPair:
    if n < 3:
        raise TooFewVertices(f"n must be at least 3, got {n}")
    if not 0 <= j < n:
        raise IndexOutOfRange(f"eigen index {j} outside 0..{n - 1}")
    xi = _check_xi(xi, "xi")
    omega = complex(np.exp(2j * np.pi * j / n))
    # exact index reduction keeps powers of omega accurate for large m
    m = np.arange(n)
    vec = np.exp(2j * np.pi * ((j * m) % n) / n) / math.sqrt(n)
    vec.setflags(write=False)
    return EigenPair(j, omega, 1.0 - xi + xi * omega, vec)


def magnitude_law(n: int, xi: float, j) -> np.ndarray:
    """``|lambda_j|`` from ``1 - 4 xi (1 - xi) sin^2(pi j / n)``."""
    s = np.sin(np.pi * np.asarray(j) / n)
    return np.sqrt(np.maximum(1.0 - 4.0 * xi * (1.0 - xi) * s * s, 0.0))


def eigen_magnitude_order(n: int, xi: float) -> list[int]:
    """Indices ``1..n-1`` sorted by descending ``|lambda_j|``.

    Magnitude is strictly decreasing in the harmonic ``min(j, n - j)``, so
    sorting on that key gives the exact order with conjugate pairs adjacent;
    equal magnitudes fall back to ascending ``j``.
    """
    _check_xi(xi, "xi")
    return sorted(range(1, n), key=lambda j: (min(j, n - j), j))


def _rho_from_eigs(n: int, xi) -> np.ndarray:
    xi = np.asarray(xi, dtype=np.float64)
    w1 = np.exp(2j * np.pi / n)
    w2 = np.exp(4j * np.pi / n)
    return np.abs(1.0 - xi + xi * w2) / np.abs(1.0 - xi + xi * w1)


def rho_closed(n: int, xi: float) -> float:
    c = 4.0 * xi * (1.0 - xi)
    return math.sqrt((1.0 - c * math.sin(2 * math.pi / n) ** 2)
                     / (1.0 - c * math.sin(math.pi / n) ** 2))


def rho_printed(n: int, xi: float) -> float:
    """The ``1/xi - 4(1-xi) sin^2`` form with ``4 pi / n`` in the denominator."""
    num = 1.0 / xi - 4.0 * (1.0 - xi) * math.sin(2 * math.pi / n) ** 2
    den = 1.0 / xi - 4.0 * (1.0 - xi) * math.sin(4 * math.pi / n) ** 2
    if den <= 0.0:  # n = 8, xi = 1/2
        return math.inf
    return math.sqrt(num / den)


def damping_argmin_scan(n: int, grid_points: int = 999) -> float:
    """Grid minimizer of the damping factor over ``xi = i / (grid_points + 1)``."""
    if grid_points < 3:
        raise ValueError("grid_points must be at least 3")
    grid = np.arange(1, grid_points + 1) / (grid_points + 1)
    return float(grid[int(np.argmin(_rho_from_eigs(n, grid)))])


def damping_factor(n: int, xi: float, grid_points: int = 999) -> DampingReport:
    if n < 5:
        raise TooFewVertices(f"damping factor needs n >= 5, got {n}")
    xi = _check_xi(xi, "xi")
    lam = eigenvalues(n, xi)
    order = eigen_magnitude_order(n, xi)
    mags = np.abs(lam[order])
    mags.setflags(write=False)
    rho = float(abs(lam[2]) / abs(lam[1]))
    return DampingReport(
        n=n,
        xi=xi,
        magnitudes=mags,
        rho=rho,
        rho_closed=rho_closed(n, xi),
        rho_printed=rho_printed(n, xi),
        argmin_xi=damping_argmin_scan(n, grid_points),
    )
