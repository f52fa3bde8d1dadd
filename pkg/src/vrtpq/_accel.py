"""Optional numba acceleration.

Set ``VRT_DISABLE_NUMBA=1`` to force the pure-numpy kernels even when
numba is installed. The flag is read once at import time.
"""

from __future__ import annotations

import os

_FALSY = {"", "0", "false", "no", "off"}

DISABLED_BY_ENV = os.environ.get("VRT_DISABLE_NUMBA", "").strip().lower() not in _FALSY

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - depends on environment
    numba = None
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and not DISABLED_BY_ENV


def njit(*args, **kwargs):
    """``numba.njit`` when numba is importable, identity decorator otherwise.

    Kernels are always compiled when numba exists, regardless of the env
    flag, so tests and the benchmark can compare both paths in one process.
    """
    if HAVE_NUMBA:
        return numba.njit(*args, **kwargs)

    def decorator(func):
        return func

    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]
    return decorator


def backend() -> str:
    return "numba" if USE_NUMBA else "numpy"
