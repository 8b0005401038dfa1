"""numba switch. Set ``KTSCOLOUR_NO_NUMBA=1`` to run the kernels as plain
Python over numpy arrays (slow, but identical results)."""

import os

DISABLED = os.environ.get("KTSCOLOUR_NO_NUMBA", "").lower() in ("1", "true", "yes")

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None


def njit(func):
    if DISABLED or numba is None:
        return func
    return numba.njit(cache=True, nogil=True)(func)


def jit_available() -> bool:
    return numba is not None and not DISABLED
