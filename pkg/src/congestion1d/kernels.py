"""Backend selection for the hot loops.

The compiled Cython module is used when it was built; otherwise, or when
``CONGESTION1D_PURE_PYTHON=1`` is set, the pure-Python fallback is used.
``BACKEND`` names the active one.
"""
import os

from . import _fallback

if os.environ.get("CONGESTION1D_PURE_PYTHON", "") not in ("", "0"):
    _impl = _fallback
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl

        BACKEND = "cython"
    except ImportError:
        _impl = _fallback
        BACKEND = "python"

thomas_solve = _impl.thomas_solve
invert_singular = _impl.invert_singular

__all__ = ["BACKEND", "thomas_solve", "invert_singular"]
