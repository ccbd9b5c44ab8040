"""Backend selection for the hot kernels.

Set ``WEAROUT_DISABLE_NUMBA=1`` before import to force the pure-numpy path.
If numba is missing the numpy path is used as well.
"""

import os

_DISABLED = os.environ.get("WEAROUT_DISABLE_NUMBA", "").strip().lower() in ("1", "true", "yes")

try:
    import numba as _numba
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    _numba = None
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and not _DISABLED


def njit(*args, **kwargs):
    """``numba.njit`` when numba is importable, otherwise the identity decorator.

    The returned function is always compiled if numba exists so that the
    benchmark can compare both paths inside one process.
    """
    kwargs.setdefault("cache", True)

    def wrap(fn):
        if not HAVE_NUMBA:
            return fn
        return _numba.njit(**kwargs)(fn)

    if len(args) == 1 and callable(args[0]):
        return wrap(args[0])
    return wrap


def backend_name():
    return "numba" if USE_NUMBA else "numpy"


def set_threads(n):
    if HAVE_NUMBA and n:
        _numba.set_num_threads(max(1, min(int(n), _numba.config.NUMBA_NUM_THREADS)))
