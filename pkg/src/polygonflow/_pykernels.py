"""Numpy implementation of the stencil kernels.

Used when the compiled ``_ckernels`` extension is unavailable, and as the
reference the extension is tested against.  Both modules expose the same
three functions with the same argument conventions.
"""
import numpy as np

from polygonflow.errors import DegeneratePolygon

DEGENERATE_NORM = 1e-14


def _apply(keep, xi, x):
    nxt = np.roll(x, -1)
    # clamp so rounding never leaves the segment [x_i, x_{i+1}]
    return np.clip(keep * x + xi * nxt, np.minimum(x, nxt), np.maximum(x, nxt))


def step(xi, x):
    """One application of the cyclic two-point stencil.

    ``out[i] = (1 - xi[i]) * x[i] + xi[i] * x[(i + 1) % n]``
    """
    xi = np.asarray(xi, dtype=np.float64)
    x = np.asarray(x, dtype=np.float64)
    return _apply(1.0 - xi, xi, x)


def power(xi, x, steps):
    xi = np.asarray(xi, dtype=np.float64)
    keep = 1.0 - xi
    cur = np.array(x, dtype=np.float64)
    for _ in range(steps):
        cur = _apply(keep, xi, cur)
    return cur


def _centered_norm(v):
    c = v - v.sum() / v.shape[0]
    return c, float(np.sqrt(np.dot(c, c)))


def trajectory(xi, x, y, steps, normalize):
    """Iterate both coordinate vectors ``steps`` times.

    Returns ``(xs, ys, norms)`` with shapes ``(steps + 1, n)`` and
    ``(steps + 1, 2)``.  Row 0 holds the inputs unchanged; ``norms[0]`` is
    left at zero for the caller to fill.  ``norms[k]`` is the 2-norm of the
    centered image at step k (before rescaling in normalized mode).
    """
    xi = np.asarray(xi, dtype=np.float64)
    keep = 1.0 - xi
    n = xi.shape[0]
    xs = np.empty((steps + 1, n))
    ys = np.empty((steps + 1, n))
    norms = np.zeros((steps + 1, 2))
    xs[0] = x
    ys[0] = y
    for k in range(1, steps + 1):
        for out, prev, col in ((xs, xs[k - 1], 0), (ys, ys[k - 1], 1)):
            raw = _apply(keep, xi, prev)
            centered, nrm = _centered_norm(raw)
            norms[k, col] = nrm
            if normalize:
                if nrm < DEGENERATE_NORM:
                    raise DegeneratePolygon(
                        f"coordinate vector collapsed at step {k} (norm {nrm:.3g})"
                    )
                out[k] = centered / nrm
            else:
                out[k] = raw
    return xs, ys, norms
