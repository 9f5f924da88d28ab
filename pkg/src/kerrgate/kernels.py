"""Kernel dispatch: compiled extension when importable, numpy otherwise.

Set ``KERRGATE_PURE_PYTHON=1`` before import to force the numpy path.
"""
import os

from . import _kernels_py

BACKEND = "python"

if os.environ.get("KERRGATE_PURE_PYTHON") != "1":
    try:
        from . import _kernels as _impl

        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
else:
    _impl = _kernels_py

harmonic_sine_sum = _impl.harmonic_sine_sum
harmonic_sine_project = _impl.harmonic_sine_project

__all__ = ["BACKEND", "harmonic_sine_sum", "harmonic_sine_project"]
