"""Hot numeric kernels with a numba path and a pure-numpy fallback.

The numba path is used when numba imports cleanly, unless the environment
variable ``LFIQA_DISABLE_NUMBA`` is set to a non-empty value other than
``0``. Both backends are importable directly for comparison and
benchmarking.
"""

import os

import numpy as np

from . import _numpy as numpy_backend

try:
    from . import _numba as numba_backend
except ImportError:  # pragma: no cover - numba is optional at runtime
    numba_backend = None


def _numba_disabled():
    flag = os.environ.get("LFIQA_DISABLE_NUMBA", "").strip()
    return flag not in ("", "0")


if numba_backend is not None and not _numba_disabled():
    _active = numba_backend
    BACKEND = "numba"
else:
    _active = numpy_backend
    BACKEND = "numpy"


def _plane(x):
    return np.ascontiguousarray(x, dtype=np.float64)


def filter_valid(x, g):
    return _active.filter_valid(_plane(x), _plane(g))


def ssim_maps(x, y, g, c1, c2):
    return _active.ssim_maps(_plane(x), _plane(y), _plane(g), float(c1), float(c2))


def block_mean(x, f):
    if f == 1:
        return _plane(x).copy()
    return _active.block_mean(_plane(x), int(f))


def gms_map(x, y, c):
    return _active.gms_map(_plane(x), _plane(y), float(c))


__all__ = ["BACKEND", "numpy_backend", "numba_backend", "filter_valid",
           "ssim_maps", "block_mean", "gms_map"]
