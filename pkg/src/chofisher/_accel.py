"""Numba switch for the hot kernels.

Set ``CHOFISHER_NO_NUMBA=1`` to force the pure-numpy paths (useful for
debugging or on platforms without numba wheels).
"""
from __future__ import annotations

import os

_DISABLED = os.environ.get("CHOFISHER_NO_NUMBA", "").strip().lower() not in ("", "0", "false", "no")

try:
    if _DISABLED:
        raise ImportError("numba disabled by CHOFISHER_NO_NUMBA")
    import numba as _numba
except ImportError:  # pragma: no cover - depends on environment
    _numba = None

HAVE_NUMBA = _numba is not None


def njit(func):
    """Compile ``func`` in nopython mode when numba is active, else return it."""
    if _numba is None:
        return func
    return _numba.njit(cache=True, nogil=True)(func)


def backend() -> str:
    return "numba" if HAVE_NUMBA else "numpy"
