"""Optional numba acceleration.

Set ``ONLINE_RAMSEY_DISABLE_NUMBA=1`` to run every kernel as plain Python.
The interpreted path executes the very same function bodies, so both paths
produce identical results.
"""

import os

DISABLE_ENV = "ONLINE_RAMSEY_DISABLE_NUMBA"


def _numba_requested():
    return os.environ.get(DISABLE_ENV, "").strip().lower() not in ("1", "true", "yes", "on")


try:
    if not _numba_requested():
        raise ImportError("numba disabled by environment")
    from numba import njit as _njit

    NUMBA_ENABLED = True
except ImportError:
    _njit = None
    NUMBA_ENABLED = False


def jit(func):
    """Compile ``func`` with numba when enabled, otherwise return it unchanged."""
    if NUMBA_ENABLED:
        return _njit(cache=False, nogil=True)(func)
    return func


def backend_name():
    return "numba" if NUMBA_ENABLED else "python"
