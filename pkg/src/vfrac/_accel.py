"""Backend selection for the compiled kernels.

Set ``VFRAC_DISABLE_NUMBA=1`` before import to force the pure-numpy
kernels. Numba is also skipped silently when it is not importable.
"""

from __future__ import annotations

import os

_FALSEY = {"", "0", "false", "no", "off"}


def _numba_requested() -> bool:
    return os.environ.get("VFRAC_DISABLE_NUMBA", "").strip().lower() in _FALSEY


def _load_numba():
    if not _numba_requested():
        return False, None
    try:
        import numba
    except ImportError:  # pragma: no cover - depends on the environment
        return False, None
    return True, numba.njit


HAVE_NUMBA, _njit = _load_numba()
BACKEND = "numba" if HAVE_NUMBA else "numpy"


def njit(func):
    """``numba.njit(cache=True)`` when available, else the identity."""
    if _njit is None:
        return func
    return _njit(cache=True)(func)
