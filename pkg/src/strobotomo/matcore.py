"""Dense complex linear algebra shared by every other module.

Matrices are plain ``numpy`` complex128 arrays. Vectorization is column
stacking throughout, so ``vec(X Y Z) = (Z^T kron X) vec(Y)``.
"""
from __future__ import annotations

from typing import NamedTuple

import numpy as np
import scipy.linalg

from . import _backend

DEFAULT_TOL = 1e-10


class DimensionError(ValueError):
    """Operands have incompatible or non-square shapes."""


class ExpmRangeError(OverflowError):
    """The matrix exponential left the double-precision range."""


def as_matrix(m, *, square=True, name="matrix"):
    """Coerce to a finite complex128 2-D array."""
    arr = np.asarray(m, dtype=np.complex128)
    if arr.ndim != 2:
        raise DimensionError(f"{name} must be 2-D, got shape {arr.shape}")
    if square and arr.shape[0] != arr.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} has non-finite entries")
    return arr


def frozen(arr):
    """Read-only copy of ``arr``."""
    out = np.array(arr, dtype=np.complex128, copy=True)
    out.setflags(write=False)
    return out


def vectorize(m):
    m = as_matrix(m)
    return m.reshape(-1, order="F").copy()


def devectorize(v):
    v = np.asarray(v, dtype=np.complex128).reshape(-1)
    n = int(round(np.sqrt(v.size)))
    if n * n != v.size:
        raise DimensionError(f"length {v.size} is not a perfect square")
    return v.reshape(n, n, order="F").copy()


def hs_inner(a, b):
    """Hilbert-Schmidt inner product ``Tr(a^dagger b)``."""
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape != b.shape:
        raise DimensionError(f"shapes {a.shape} and {b.shape} differ")
    return complex(np.vdot(a, b))


def hs_norm(a):
    return float(np.linalg.norm(np.asarray(a)))


def expm(m):
    """Matrix exponential (Pade scaling and squaring).

    Raises :class:`ExpmRangeError` instead of returning ``inf``/``nan``.
    """
    m = as_matrix(m)
    with np.errstate(over="ignore", invalid="ignore"):
        out = scipy.linalg.expm(m)
    if not np.all(np.isfinite(out)):
        raise ExpmRangeError(
            f"expm overflowed for a matrix of 1-norm {np.linalg.norm(m, 1):.3g}")
    return out


def numerical_rank(m, tol=DEFAULT_TOL):
    """Count singular values above ``tol * s_max * max(rows, cols)``."""
    arr = np.asarray(m, dtype=np.complex128)
    if arr.ndim != 2:
        arr = np.atleast_2d(arr)
    if arr.size == 0:
        return 0
    if tol <= 0:
        raise ValueError("tol must be positive")
    s = np.linalg.svd(arr, compute_uv=False)
    if s[0] == 0.0:
        return 0
    return int(np.sum(s > tol * s[0] * max(arr.shape)))


class KrylovRun(NamedTuple):
    basis: np.ndarray        # orthonormal rows
    residuals: tuple         # norm of each new direction after orthogonalization
    threshold: float
    saturated: bool          # broke down before ``maxdim`` was reached


def arnoldi(matvec, start, maxdim, threshold):
    """Orthonormal basis of ``span{x, Ax, A^2 x, ...}``, at most ``maxdim`` long.

    A new direction is accepted while its residual after two Gram-Schmidt
    passes exceeds ``threshold``.
    """
    x = np.asarray(start, dtype=np.complex128).reshape(-1)
    basis = np.zeros((max(int(maxdim), 1), x.size), dtype=np.complex128)
    nrm = np.linalg.norm(x)
    if nrm == 0.0 or maxdim < 1:
        return KrylovRun(basis[:0], (), threshold, True)
    basis[0] = x / nrm
    k = 1
    residuals = []
    saturated = False
    while k < maxdim:
        w = np.array(matvec(basis[k - 1]), dtype=np.complex128).reshape(-1)
        r = _backend.cgs2(basis, k, w)
        residuals.append(r)
        if r <= threshold:
            saturated = True
            break
        basis[k] = w / r
        k += 1
    return KrylovRun(basis[:k].copy(), tuple(residuals), threshold, saturated)


def near_threshold(residuals, threshold, factor=10.0):
    """True when any residual sits within ``factor`` of ``threshold``."""
    if threshold <= 0:
        return False
    return any(threshold / factor <= r <= threshold * factor for r in residuals)


class MinimalPoly(NamedTuple):
    degree: int
    ambiguous: bool
    residuals: tuple


def minimal_poly_degree(m, tol=DEFAULT_TOL):
    """Degree of the minimal polynomial by Krylov rank saturation.

    Powers ``M^0, M^1, ...`` are generated as an Arnoldi sequence on the space
    of matrices (left multiplication by ``M``) with re-orthogonalization. The
    degree is the first power whose residual drops to
    ``tol * ||M||_2 * dim(M)``. ``ambiguous`` flags a residual within a factor
    of ten of that threshold.
    """
    m = as_matrix(m)
    d = m.shape[0]
    scale = np.linalg.norm(m, 2)
    if scale == 0.0:
        return MinimalPoly(1, False, ())
    threshold = tol * scale * d
    run = arnoldi(lambda v: (m @ v.reshape(d, d)).reshape(-1),
                  np.eye(d, dtype=np.complex128), d + 1, threshold)
    # Cayley-Hamilton caps the degree at d; a run that never saturated is
    # numerically suspect and reported as ambiguous.
    degree = min(run.basis.shape[0], d)
    ambiguous = (not run.saturated) or near_threshold(run.residuals, threshold)
    return MinimalPoly(degree, ambiguous, run.residuals)
