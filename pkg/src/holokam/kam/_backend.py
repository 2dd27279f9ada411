"""Select the compiled min-plus kernels when available.

The extension only handles float64 arrays; exact (object) arrays always go
through the numpy fallback.  Set ``HOLOKAM_PURE_PYTHON=1`` to disable the
extension.
"""

import os

import numpy as np

from . import _minplus_py as _py

try:
    if os.environ.get("HOLOKAM_PURE_PYTHON") == "1":
        raise ImportError("disabled by HOLOKAM_PURE_PYTHON")
    from . import _minplus_ext as _ext
except ImportError:
    _ext = None

HAVE_EXTENSION = _ext is not None


def _pick(*arrays):
    if _ext is not None and all(a.dtype == np.float64 for a in arrays):
        return _ext
    return _py


def _c(a):
    return np.ascontiguousarray(a) if a.dtype == np.float64 else a


def product(A, B):
    return _pick(A, B).product(_c(A), _c(B))


def vecmat(u, A):
    return _pick(u, A).vecmat(_c(u), _c(A))


def closure(A):
    return _pick(A).closure(_c(A))


def karp(A):
    return _pick(A).karp(_c(A))
