"""Backend selection for the array kernels.

Set ``TOTALREP_NO_NUMBA=1`` to force the pure-numpy path. If numba is not
importable the numpy path is used regardless.
"""
import os

_DISABLED = os.environ.get("TOTALREP_NO_NUMBA", "").strip().lower() in ("1", "true", "yes", "on")

try:
    from numba import njit as _njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    _njit = None
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and not _DISABLED
BACKEND = "numba" if USE_NUMBA else "numpy"


def njit(fn):
    """``numba.njit(cache=True)`` when numba is importable, else identity.

    Compiled variants are still defined when the flag disables numba so the
    benchmark and the equivalence tests can call both paths side by side.
    """
    if not HAVE_NUMBA:
        return fn
    return _njit(cache=True)(fn)
