"""Kernel backend selection.

The compiled module is used when it imports; set ``STROBOTOMO_BACKEND=python``
to force the numpy fallback. Both expose the same four functions and the
wrappers below normalize dtypes and memory layout so callers never care.
"""
import os

import numpy as np

from . import _pykernels

_py = _pykernels
_c = None
if os.environ.get("STROBOTOMO_BACKEND", "").lower() != "python":
    try:
        from . import _ckernels as _c
    except ImportError:
        _c = None

BACKEND = "cython" if _c is not None else "python"


def available_backends():
    return ("cython", "python") if _c is not None else ("python",)


def _impl(backend):
    backend = backend or BACKEND
    if backend == "cython":
        if _c is None:
            raise RuntimeError("compiled kernels are not built")
        return _c
    if backend == "python":
        return _py
    raise ValueError(f"unknown backend {backend!r}")


def hermitian_split(a, backend=None):
    a = np.ascontiguousarray(a, dtype=np.complex128)
    return _impl(backend).hermitian_split(a)


def gkls_superop(h, ops, rates, backend=None):
    h = np.ascontiguousarray(h, dtype=np.complex128)
    n = h.shape[0]
    ops = np.ascontiguousarray(
        np.asarray(ops, dtype=np.complex128).reshape(-1, n, n))
    rates = np.ascontiguousarray(rates, dtype=np.float64).reshape(-1)
    return _impl(backend).gkls_superop(h, ops, rates)


def cgs2(basis, k, w, backend=None):
    """Orthogonalize ``w`` in place against ``basis[:k]`` (two passes)."""
    for name, arr in (("basis", basis), ("w", w)):
        if not (isinstance(arr, np.ndarray) and arr.dtype == np.complex128
                and arr.flags.c_contiguous):
            raise TypeError(f"cgs2 needs a C-contiguous complex128 {name}")
    return _impl(backend).cgs2(basis, int(k), w)


def simplex_project(v, backend=None):
    v = np.ascontiguousarray(v, dtype=np.float64)
    return _impl(backend).simplex_project(v)
