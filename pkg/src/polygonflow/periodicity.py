"""Exact and approximate periods of the normalized first-harmonic orbit.

After k steps vertex ``i`` sits at parameter ``2 pi i / n + k (pi/n + arg z)``
on the limiting ellipse.  If ``arg z = (p/q) pi`` then ``2q`` steps advance
every parameter by ``2 pi q / n``, i.e. the vertex set repeats with the
labels shifted by ``q``.  Irrational phases still come close to repeating at
the denominators of the continued-fraction convergents of ``|arg z| / pi``.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from polygonflow.errors import DivisionPointOutOfRange
from polygonflow.harmonic import rotation_number
from polygonflow.polygon import IterationTrace

EXACT_TOL = 1e-12
EMPIRICAL_TOL = 1e-8
CF_FLOOR = 1e-12


@dataclass(frozen=True)
class RationalApprox:
    p: int
    q: int
    value: float
    error: float


@dataclass(frozen=True)
class NearPeriod:
    period: int
    p: int
    q: int
    deviation: float


@dataclass(frozen=True)
class EmpiricalPeriod:
    period: int
    distance: float
    offset: int


@dataclass
class PeriodReport:
    n: int
    xi: float
    arg_z: float
    exact: Optional[dict] = None
    near: list = field(default_factory=list)
    empirical: Optional[dict] = None

    def to_dict(self) -> dict:
        return asdict(self)


def continued_fraction(x: float, max_terms: int = 64, floor_tol: float = CF_FLOOR) -> list[int]:
    """Regular continued-fraction terms ``[a0; a1, a2, ...]`` of ``x``."""
    if not math.isfinite(x):
        raise ValueError("x must be finite")
    if max_terms < 1:
        raise ValueError("max_terms must be at least 1")
    terms = []
    for _ in range(max_terms):
        a = math.floor(x)
        terms.append(int(a))
        frac = x - a
        if frac < floor_tol:
            break
        x = 1.0 / frac
    return terms


def convergents(terms) -> list[Fraction]:
    out = []
    p_prev, p = 1, terms[0]
    q_prev, q = 0, 1
    out.append(Fraction(p, q))
    for a in terms[1:]:
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
        out.append(Fraction(p, q))
    return out


def rational_approximations(target: float, q_max: int,
                            max_terms: int = 64) -> list[RationalApprox]:
    """Convergents of ``target`` with denominator at most ``q_max``."""
    out = []
    for c in convergents(continued_fraction(target, max_terms)):
        if c.denominator > q_max:
            break
        out.append(RationalApprox(c.numerator, c.denominator, float(c),
                                  abs(target - c.numerator / c.denominator)))
    return out


def rational_multiple_of_pi(phi: float, q_max: int = 1000,
                            tol: float = EXACT_TOL) -> Optional[RationalApprox]:
    """Smallest-denominator convergent ``p/q`` with ``|phi/pi - p/q| <= tol``."""
    if q_max < 1 or not tol > 0:
        raise ValueError("q_max must be >= 1 and tol > 0")
    target = phi / math.pi
    sign = -1 if target < 0 else 1
    for r in rational_approximations(abs(target), q_max):
        if r.error <= tol:
            return RationalApprox(sign * r.p, r.q, sign * r.value, r.error)
    return None


def exact_witness(n: int, xi: float, q_max: int = 1000,
                  tol: float = EXACT_TOL) -> Optional[RationalApprox]:
    return rational_multiple_of_pi(rotation_number(n, xi).phase, q_max, tol)


def exact_period(n: int, xi: float, q_max: int = 1000, tol: float = EXACT_TOL) -> Optional[int]:
    """``2q`` when ``arg z = (p/q) pi`` with ``q <= q_max``, else ``None``."""
    w = exact_witness(n, xi, q_max, tol)
    return None if w is None else 2 * w.q


def near_periods(n: int, xi: float, q_max: int = 1000) -> list[NearPeriod]:
    """Candidate periods ``2q`` from the convergents of ``|arg z| / pi``.

    ``deviation`` is the leftover phase ``|2q |arg z| - 2 p pi|``.
    """
    phi = abs(rotation_number(n, xi).phase)
    return [
        NearPeriod(2 * r.q, r.p, r.q, abs(2 * r.q * phi - 2 * r.p * math.pi))
        for r in rational_approximations(phi / math.pi, q_max)
    ]


def xi_for_phase(n: int, phase: float) -> float:
    """Division point whose rotation number has argument ``phase``.

    Inverts ``tan(arg z) = (2 xi - 1) tan(pi/n)``; only ``|phase| < pi/n`` is
    reachable from ``xi`` in (0, 1).
    """
    xi = 0.5 * (1.0 + math.tan(phase) / math.tan(math.pi / n))
    if not (abs(phase) < math.pi / n and 0.0 < xi < 1.0):
        raise DivisionPointOutOfRange(
            f"phase {phase!r} is outside the reachable range (-pi/{n}, pi/{n})"
        )
    return xi


def _offset_distances(a_x, a_y, b_x, b_y) -> np.ndarray:
    """``d[s] = max_i |b[i] - a[(i + s) % n]|`` for every cyclic offset s."""
    n = a_x.shape[0]
    idx = (np.arange(n)[None, :] + np.arange(n)[:, None]) % n
    return np.max(np.hypot(b_x[None, :] - a_x[idx], b_y[None, :] - a_y[idx]), axis=1)


def set_distance(trace: IterationTrace, k1: int, k2: int) -> tuple[float, int]:
    """Smallest max-vertex distance between snapshots over cyclic relabelings."""
    d = _offset_distances(trace.xs[k1], trace.ys[k1], trace.xs[k2], trace.ys[k2])
    s = int(np.argmin(d))
    return float(d[s]), s


def empirical_period(trace: IterationTrace, tol: float = EMPIRICAL_TOL,
                     tail: int = 3) -> Optional[EmpiricalPeriod]:
    """Smallest ``l >= 1`` with snapshot ``k + l`` a relabeling of snapshot ``k``.

    Checked on up to ``tail`` pairs ending at the last snapshot; the same
    cyclic offset must work for every pair.
    """
    K = trace.steps
    if K < 2:
        raise ValueError("need a trace with at least 3 snapshots")
    for ell in range(1, K + 1):
        worst, offset = 0.0, None
        for k in range(max(0, K - ell - tail + 1), K - ell + 1):
            d = _offset_distances(trace.xs[k], trace.ys[k], trace.xs[k + ell], trace.ys[k + ell])
            s = int(np.argmin(d)) if offset is None else offset
            if d[s] > tol:
                break
            offset = s
            worst = max(worst, float(d[s]))
        else:
            return EmpiricalPeriod(ell, worst, offset)
    return None


def period_report(n: int, xi: float, q_max: int = 1000,
                  trace: Optional[IterationTrace] = None,
                  tol: float = EMPIRICAL_TOL) -> PeriodReport:
    rn = rotation_number(n, xi)
    report = PeriodReport(n=n, xi=rn.xi, arg_z=rn.phase)
    w = exact_witness(n, xi, q_max)
    if w is not None:
        report.exact = {"period": 2 * w.q, "p": w.p, "q": w.q}
    report.near = [asdict(c) for c in near_periods(n, xi, q_max)]
    if trace is not None:
        emp = empirical_period(trace, tol)
        if emp is not None:
            report.empirical = asdict(emp)
    return report
