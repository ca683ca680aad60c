"""Kernel selection: compiled extension when importable, pure Python otherwise.

Set ``HYPERCOARSEN_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _purepy

if os.environ.get("HYPERCOARSEN_PURE_PYTHON", "") not in ("", "0"):
    _impl = _purepy
else:
    try:
        from . import _kernels as _impl
    except ImportError:
        _impl = _purepy

BACKEND = "cython" if _impl is not _purepy else "python"
gauss_seidel = _impl.gauss_seidel
dinic = _impl.dinic
