"""Polygons, division schemes, the averaging transform and its iteration.

A step replaces vertex ``i`` by the point dividing segment ``i`` (from vertex
``i`` to vertex ``i+1 mod n``) at fraction ``xi_i``::

    v_i <- (1 - xi_i) * v_i + xi_i * v_{i+1}

which is the row pattern of the cyclic matrix ``(1 - xi) I + xi S`` with ``S``
the upshift permutation.  Iteration runs through the stencil kernels in
``polygonflow._backend``; the dense matrix exists only for cross-checks.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from polygonflow._backend import kernels
from polygonflow.errors import (
    DegeneratePolygon,
    DivisionPointOutOfRange,
    LengthMismatch,
    NonFiniteCoordinate,
    SchemeLengthMismatch,
    SizeMismatch,
    TooFewVertices,
)
from polygonflow.rng import Xoshiro256StarStar

DEGENERATE_NORM = 1e-14
NORMALIZED = "normalized"
UNNORMALIZED = "unnormalized"


def _frozen(values) -> np.ndarray:
    arr = np.array(values, dtype=np.float64)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Polygon:
    """Vertex coordinates of a closed polygon, in vertex order."""

    xs: np.ndarray
    ys: np.ndarray

    @property
    def n(self) -> int:
        return self.xs.shape[0]

    def vertices(self) -> np.ndarray:
        return np.column_stack([self.xs, self.ys])

    def __eq__(self, other):
        if not isinstance(other, Polygon):
            return NotImplemented
        return np.array_equal(self.xs, other.xs) and np.array_equal(self.ys, other.ys)

    def __hash__(self):
        return hash((self.xs.tobytes(), self.ys.tobytes()))


def make_polygon(xs: Sequence[float], ys: Sequence[float]) -> Polygon:
    xs = np.asarray(xs, dtype=np.float64).ravel()
    ys = np.asarray(ys, dtype=np.float64).ravel()
    if xs.shape != ys.shape:
        raise LengthMismatch(f"{xs.shape[0]} x-coordinates but {ys.shape[0]} y-coordinates")
    if xs.shape[0] < 3:
        raise TooFewVertices(f"a polygon needs at least 3 vertices, got {xs.shape[0]}")
    if not (np.all(np.isfinite(xs)) and np.all(np.isfinite(ys))):
        raise NonFiniteCoordinate("coordinates must be finite")
    return Polygon(_frozen(xs), _frozen(ys))


def random_polygon(n: int, seed: int, half_width: float = 1.0) -> Polygon:
    """Polygon with coordinates uniform on ``[-half_width, half_width)``.

    Draws come from :class:`~polygonflow.rng.Xoshiro256StarStar` seeded with
    ``seed``: the ``n`` x-coordinates first, then the ``n`` y-coordinates.
    """
    if n < 3:
        raise TooFewVertices(f"a polygon needs at least 3 vertices, got {n}")
    if not half_width > 0:
        raise ValueError("half_width must be positive")
    gen = Xoshiro256StarStar(seed)
    xs = gen.uniform(-half_width, half_width, n)
    ys = gen.uniform(-half_width, half_width, n)
    return make_polygon(xs, ys)


def centroid(p: Polygon) -> tuple[float, float]:
    return float(np.mean(p.xs)), float(np.mean(p.ys))


def bounding_interval(p: Polygon) -> tuple[tuple[float, float], tuple[float, float]]:
    return (
        (float(p.xs.min()), float(p.xs.max())),
        (float(p.ys.min()), float(p.ys.max())),
    )


def _center_unit(v: np.ndarray, name: str) -> np.ndarray:
    c = v - v.mean()
    nrm = float(np.linalg.norm(c))
    if nrm < DEGENERATE_NORM:
        raise DegeneratePolygon(f"centered {name} has norm {nrm:.3g}")
    return c / nrm


def center_and_normalize(p: Polygon) -> Polygon:
    """Shift the centroid to the origin, then scale xs and ys separately to unit 2-norm."""
    return Polygon(_frozen(_center_unit(p.xs, "xs")), _frozen(_center_unit(p.ys, "ys")))


# --- division schemes -------------------------------------------------------


def _check_xi(value: float, where: str) -> float:
    value = float(value)
    if not (0.0 < value < 1.0):
        raise DivisionPointOutOfRange(f"{where} = {value!r} is not inside (0, 1)")
    return value


@dataclass(frozen=True)
class Uniform:
    """Same division point on every segment."""

    xi: float

    def __post_init__(self):
        object.__setattr__(self, "xi", _check_xi(self.xi, "xi"))

    def values(self, n: int) -> np.ndarray:
        return np.full(n, self.xi)

    @property
    def is_uniform(self) -> bool:
        return True


@dataclass(frozen=True)
class PerSegment:
    """One division point per segment; ``xis[i]`` divides segment ``i``."""

    xis: tuple

    def __post_init__(self):
        vals = tuple(_check_xi(v, f"xis[{i}]") for i, v in enumerate(self.xis))
        object.__setattr__(self, "xis", vals)

    def values(self, n: int) -> np.ndarray:
        if len(self.xis) != n:
            raise SchemeLengthMismatch(f"scheme has {len(self.xis)} points, polygon has {n}")
        return np.array(self.xis, dtype=np.float64)

    @property
    def is_uniform(self) -> bool:
        return len(set(self.xis)) <= 1


DivisionScheme = Union[Uniform, PerSegment]


def as_scheme(value) -> DivisionScheme:
    """Coerce a float, a sequence of floats, or a scheme into a scheme."""
    if isinstance(value, (Uniform, PerSegment)):
        return value
    if np.ndim(value) == 0:
        return Uniform(float(value))
    return PerSegment(tuple(float(v) for v in value))


@dataclass(frozen=True)
class TransformMatrix:
    """Compact form of the cyclic two-diagonal averaging matrix."""

    n: int
    scheme: DivisionScheme
    xis: np.ndarray = field(repr=False, compare=False)

    def dense(self) -> np.ndarray:
        m = np.zeros((self.n, self.n))
        idx = np.arange(self.n)
        m[idx, idx] = 1.0 - self.xis
        m[idx, (idx + 1) % self.n] = self.xis
        return m

    def apply(self, p: Polygon) -> Polygon:
        return apply_transform(self, p)


def build_transform(n: int, scheme) -> TransformMatrix:
    if n < 3:
        raise TooFewVertices(f"n must be at least 3, got {n}")
    scheme = as_scheme(scheme)
    return TransformMatrix(n, scheme, _frozen(scheme.values(n)))


def apply_transform(T: TransformMatrix, p: Polygon) -> Polygon:
    if T.n != p.n:
        raise SizeMismatch(f"transform is {T.n}x{T.n}, polygon has {p.n} vertices")
    return Polygon(_frozen(kernels.step(T.xis, p.xs)), _frozen(kernels.step(T.xis, p.ys)))


def power_apply(T: TransformMatrix, v, steps: int) -> np.ndarray:
    """``M^steps @ v`` for a single coordinate vector, by repeated stencil."""
    v = np.asarray(v, dtype=np.float64)
    if v.shape != (T.n,):
        raise SizeMismatch(f"vector of length {v.shape} for a {T.n}-vertex transform")
    return kernels.power(T.xis, v, int(steps))


# --- iteration --------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class IterationTrace:
    """Snapshots ``k = 0..K`` of an iterated polygon.

    ``xs[k]`` and ``ys[k]`` are the coordinates after k steps.  ``norms[k]``
    holds the 2-norms of the centered coordinate vectors produced at step k,
    taken before rescaling when ``mode`` is normalized; ``norms[0]`` belongs
    to the centered input.
    """

    xs: np.ndarray
    ys: np.ndarray
    norms: np.ndarray
    mode: str
    scheme: DivisionScheme

    @property
    def steps(self) -> int:
        return self.xs.shape[0] - 1

    @property
    def n(self) -> int:
        return self.xs.shape[1]

    def __len__(self):
        return self.xs.shape[0]

    def snapshot(self, k: int) -> Polygon:
        return Polygon(self.xs[k], self.ys[k])

    @property
    def polygons(self) -> list[Polygon]:
        return [self.snapshot(k) for k in range(len(self))]


def iterate(p: Polygon, scheme, steps: int, mode: str = NORMALIZED) -> IterationTrace:
    """Apply the transform ``steps`` times.

    In normalized mode the input and every image are re-centered and each
    coordinate vector is rescaled to unit length.
    """
    if steps < 0:
        raise ValueError("steps must be non-negative")
    if mode not in (NORMALIZED, UNNORMALIZED):
        raise ValueError(f"unknown mode {mode!r}")
    T = build_transform(p.n, scheme)
    x0 = np.array(p.xs, dtype=np.float64)
    y0 = np.array(p.ys, dtype=np.float64)
    n0 = (np.linalg.norm(x0 - x0.mean()), np.linalg.norm(y0 - y0.mean()))
    if mode == NORMALIZED:
        x0 = _center_unit(x0, "xs")
        y0 = _center_unit(y0, "ys")
    xs, ys, norms = kernels.trajectory(T.xis, x0, y0, int(steps), mode == NORMALIZED)
    norms[0] = n0
    for a in (xs, ys, norms):
        a.setflags(write=False)
    return IterationTrace(xs, ys, norms, mode, T.scheme)


def max_vertex_distance(p: Polygon, point: tuple[float, float]) -> float:
    return float(np.max(np.hypot(p.xs - point[0], p.ys - point[1])))


def is_nested(inner, outer) -> bool:
    """True when every interval of ``inner`` lies inside the matching one of ``outer``."""
    return all(o[0] <= i[0] and i[1] <= o[1] for i, o in zip(inner, outer))


__all__ = [
    "Polygon", "Uniform", "PerSegment", "DivisionScheme", "TransformMatrix",
    "IterationTrace", "make_polygon", "random_polygon", "centroid",
    "center_and_normalize", "bounding_interval", "build_transform",
    "apply_transform", "power_apply", "iterate", "as_scheme",
    "max_vertex_distance", "is_nested", "NORMALIZED", "UNNORMALIZED",
]
