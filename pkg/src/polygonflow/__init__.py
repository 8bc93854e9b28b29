"""Iterated division-point averaging of polygons.

Each step moves every vertex to the point dividing its outgoing edge at a
fixed fraction ``xi``.  The package provides the iteration (compiled kernel
with a numpy fallback), the closed-form spectrum and first-harmonic
dynamics, the limiting ellipse, periodicity analysis and the per-segment
generalization.
"""
from polygonflow._backend import BACKEND
from polygonflow.polygon import (
    IterationTrace,
    PerSegment,
    Polygon,
    TransformMatrix,
    Uniform,
    apply_transform,
    bounding_interval,
    build_transform,
    center_and_normalize,
    centroid,
    iterate,
    make_polygon,
    random_polygon,
)
from polygonflow.spectral import damping_factor, eigenvalues
from polygonflow.harmonic import predict_vertex_vectors, project_D2, rotation_number
from polygonflow.ellipse import fit_ellipse, svd_2x2
from polygonflow.periodicity import exact_period, near_periods, xi_for_phase
from polygonflow.hetero import left_fixed_vector, predict_limit_point

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "IterationTrace", "PerSegment", "Polygon", "TransformMatrix",
    "Uniform", "apply_transform", "bounding_interval", "build_transform",
    "center_and_normalize", "centroid", "iterate", "make_polygon",
    "random_polygon", "damping_factor", "eigenvalues", "predict_vertex_vectors",
    "project_D2", "rotation_number", "fit_ellipse", "svd_2x2", "exact_period",
    "near_periods", "xi_for_phase", "left_fixed_vector", "predict_limit_point",
]
