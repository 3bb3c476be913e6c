"""Backend selection for the quadrature kernels.

The compiled extension is used when importable; set ``AICONTRAST_PURE_PYTHON=1``
to force the pure-Python implementation.
"""
import os

from . import _kernels_py

adaptive_simpson = _kernels_py.adaptive_simpson

if os.environ.get("AICONTRAST_PURE_PYTHON", "") not in ("", "0"):
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

simpson_single = _impl.simpson_single
simpson_three = _impl.simpson_three
