"""Numba switch.

Set ``SASANO_MPD_DISABLE_NUMBA=1`` to run every float kernel through the plain
numpy/Python path. Numba is also skipped silently when it cannot be imported.
"""
import os

_DISABLE_VALUES = {"1", "true", "yes", "on"}

NUMBA_AVAILABLE = False
try:
    import numba  # noqa: F401
    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover
    numba = None

NUMBA_ENABLED = NUMBA_AVAILABLE and (
    os.environ.get("SASANO_MPD_DISABLE_NUMBA", "").strip().lower() not in _DISABLE_VALUES)


def njit(fn):
    """numba.njit (with the on-disk cache) when numba is usable, identity otherwise."""
    if numba is None:
        return fn
    return numba.njit(cache=True)(fn)
