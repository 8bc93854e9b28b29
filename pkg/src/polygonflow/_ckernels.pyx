# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled stencil kernels; same contract as ``polygonflow._pykernels``."""
import numpy as np
from libc.math cimport sqrt

from polygonflow.errors import DegeneratePolygon

DEGENERATE_NORM = 1e-14


cdef inline double _mix(double k, double t, double a, double b) noexcept nogil:
    # clamp to [min(a, b), max(a, b)]: rounding must not leave the segment
    cdef double v = k * a + t * b
    cdef double lo = a if a < b else b
    cdef double hi = b if a < b else a
    if v < lo:
        return lo
    if v > hi:
        return hi
    return v


cdef void _apply(const double[::1] keep, const double[::1] xi,
                 const double[::1] src, double[::1] dst) noexcept nogil:
    cdef Py_ssize_t n = src.shape[0]
    cdef Py_ssize_t i
    for i in range(n - 1):
        dst[i] = _mix(keep[i], xi[i], src[i], src[i + 1])
    dst[n - 1] = _mix(keep[n - 1], xi[n - 1], src[n - 1], src[0])


cdef double _center(double[::1] v) noexcept nogil:
    """Subtract the mean in place and return the resulting 2-norm."""
    cdef Py_ssize_t n = v.shape[0]
    cdef Py_ssize_t i
    cdef double s = 0.0
    for i in range(n):
        s += v[i]
    s /= n
    cdef double q = 0.0
    for i in range(n):
        v[i] -= s
        q += v[i] * v[i]
    return sqrt(q)


def step(xi, x):
    cdef const double[::1] xiv = np.ascontiguousarray(xi, dtype=np.float64)
    cdef double[::1] keep = 1.0 - np.asarray(xiv)
    cdef const double[::1] src = np.ascontiguousarray(x, dtype=np.float64)
    out = np.empty(src.shape[0])
    cdef double[::1] dst = out
    _apply(keep, xiv, src, dst)
    return out


def power(xi, x, Py_ssize_t steps):
    cdef const double[::1] xiv = np.ascontiguousarray(xi, dtype=np.float64)
    cdef double[::1] keep = 1.0 - np.asarray(xiv)
    a = np.array(x, dtype=np.float64)
    b = np.empty_like(a)
    cdef double[::1] cur = a
    cdef double[::1] nxt = b
    cdef double[::1] tmp
    cdef Py_ssize_t k
    with nogil:
        for k in range(steps):
            _apply(keep, xiv, cur, nxt)
            tmp = cur
            cur = nxt
            nxt = tmp
    return np.asarray(cur)


def trajectory(xi, x, y, Py_ssize_t steps, bint normalize):
    cdef const double[::1] xiv = np.ascontiguousarray(xi, dtype=np.float64)
    cdef double[::1] keep = 1.0 - np.asarray(xiv)
    cdef Py_ssize_t n = xiv.shape[0]
    xs_arr = np.empty((steps + 1, n))
    ys_arr = np.empty((steps + 1, n))
    norms_arr = np.zeros((steps + 1, 2))
    xs_arr[0] = x
    ys_arr[0] = y
    cdef double[:, ::1] xs = xs_arr
    cdef double[:, ::1] ys = ys_arr
    cdef double[:, ::1] norms = norms_arr
    cdef double[::1] scratch = np.empty(n)
    cdef Py_ssize_t k, i, col
    cdef double nrm
    cdef double[:, ::1] out
    for k in range(1, steps + 1):
        for col in range(2):
            out = xs if col == 0 else ys
            _apply(keep, xiv, out[k - 1], out[k])
            scratch[:] = out[k]
            nrm = _center(scratch)
            norms[k, col] = nrm
            if normalize:
                if nrm < DEGENERATE_NORM:
                    raise DegeneratePolygon(
                        f"coordinate vector collapsed at step {k} (norm {nrm:.3g})"
                    )
                for i in range(n):
                    out[k, i] = scratch[i] / nrm
    return xs_arr, ys_arr, norms_arr
