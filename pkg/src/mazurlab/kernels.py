"""Kernel selection: compiled Jacobi core when importable, else pure Python.

Set ``MAZURLAB_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _jacobi_py

if os.environ.get("MAZURLAB_PURE_PYTHON", "") not in ("", "0"):
    _impl = _jacobi_py
    BACKEND = "python"
else:
    try:
        from . import _jacobi as _impl
        BACKEND = "cython"
    except ImportError:  # extension not built
        _impl = _jacobi_py
        BACKEND = "python"

heevj = _impl.heevj
svdj = _impl.svdj
svdvals = _impl.svdvals
haar_unitary = _impl.haar_unitary

__all__ = ["BACKEND", "heevj", "svdj", "svdvals", "haar_unitary"]
