"""Select the stencil kernel implementation at import time.

The compiled extension is preferred.  Setting ``POLYGONFLOW_BACKEND=python``
forces the numpy fallback, which is also used automatically when the
extension was not built.
"""
import os

from polygonflow import _pykernels

if os.environ.get("POLYGONFLOW_BACKEND", "").lower() == "python":
    kernels = _pykernels
    BACKEND = "python"
else:
    try:
        from polygonflow import _ckernels as kernels
        BACKEND = "cython"
    except ImportError:
        kernels = _pykernels
        BACKEND = "python"

__all__ = ["kernels", "BACKEND"]
