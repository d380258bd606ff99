"""Kernel selection.

The compiled Cython kernels are used when importable; setting
``UINORM_PURE_PYTHON=1`` forces the pure-Python fallback.
"""
import os

from . import _fallback

if os.environ.get("UINORM_PURE_PYTHON", "") not in ("", "0"):
    _impl = _fallback
else:
    try:
        from . import _kernels as _impl
    except ImportError:
        _impl = _fallback

NAME = _impl.NAME
jacobi_eigh = _impl.jacobi_eigh
lu_solve = _impl.lu_solve


def available():
    """Return the kernel modules that can be imported, keyed by name."""
    mods = {_fallback.NAME: _fallback}
    try:
        from . import _kernels
    except ImportError:
        pass
    else:
        mods[_kernels.NAME] = _kernels
    return mods
