"""Hermitian decomposition of complex matrices and generalized mean values.

Every ``A`` in M_n(C) splits uniquely as ``A = Q + iR`` with ``Q`` and ``R``
Hermitian, so a complex matrix can be "measured" as the pair of observables
``(Q, R)``: ``<A> = <Q> + i<R>``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _backend
from .matcore import (DEFAULT_TOL, DimensionError, as_matrix, frozen,
                      numerical_rank, vectorize)

HERMITIAN_TOL = 1e-13


class HermiticityError(ValueError):
    """A matrix required to be Hermitian is not, within ``HERMITIAN_TOL``."""


def hermiticity_defect(m):
    m = np.asarray(m)
    return float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0


@dataclass(frozen=True, eq=False)
class HermitianObservable:
    """A certified Hermitian matrix. Construction never symmetrizes."""

    matrix: np.ndarray

    def __post_init__(self):
        m = as_matrix(self.matrix, name="observable")
        defect = hermiticity_defect(m)
        if defect > HERMITIAN_TOL:
            raise HermiticityError(
                f"matrix is not Hermitian (max |M - M^dagger| = {defect:.3g})")
        object.__setattr__(self, "matrix", frozen(m))

    @property
    def dim(self):
        return self.matrix.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.matrix, dtype=dtype)


def force_hermitize(m):
    """``(M + M^dagger)/2`` as an observable, for deliberate symmetrization."""
    m = as_matrix(m)
    return HermitianObservable(0.5 * (m + m.conj().T))


def _as_array(x):
    return x.matrix if isinstance(x, HermitianObservable) else np.asarray(x)


def decompose(a):
    """Split ``a`` into Hermitian ``(Q, R)`` with ``a = Q + iR``.

    Entrywise::

        q_ij = (Re a_ij + Re a_ji)/2 + i (Im a_ij - Im a_ji)/2
        r_ij = (Im a_ij + Im a_ji)/2 + i (Re a_ji - Re a_ij)/2
    """
    a = as_matrix(a)
    q, r = _backend.hermitian_split(a)
    return HermitianObservable(q), HermitianObservable(r)


def recompose(q, r):
    q, r = _as_array(q), _as_array(r)
    if q.shape != r.shape:
        raise DimensionError(f"shapes {q.shape} and {r.shape} differ")
    return np.asarray(q, dtype=np.complex128) + 1j * np.asarray(r, dtype=np.complex128)


@dataclass(frozen=True, eq=False)
class GeneralizedObservable:
    """A complex matrix together with its two Hermitian channels."""

    a: np.ndarray
    q1: HermitianObservable
    q2: HermitianObservable

    @classmethod
    def from_matrix(cls, a):
        a = as_matrix(a)
        q1, q2 = decompose(a)
        return cls(frozen(a), q1, q2)

    def __post_init__(self):
        gap = np.max(np.abs(self.a - recompose(self.q1, self.q2)), initial=0.0)
        if gap > HERMITIAN_TOL:
            raise ValueError(f"a != q1 + i q2 (gap {gap:.3g})")

    @property
    def dim(self):
        return self.a.shape[0]

    @property
    def is_hermitian(self):
        return not np.any(self.q2.matrix)


def complex_mean(a, rho):
    """``Tr(A rho)`` for a generalized observable (or plain matrix) ``a``."""
    if isinstance(a, GeneralizedObservable):
        a = a.a
    a = as_matrix(_as_array(a))
    rho = as_matrix(_as_array(getattr(rho, "matrix", rho)), name="rho")
    if a.shape != rho.shape:
        raise DimensionError(f"shapes {a.shape} and {rho.shape} differ")
    # Tr(A rho) = sum_ij A_ij rho_ji
    return complex(np.sum(a * rho.T))


def real_mean(q, rho):
    """``Tr(Q rho)`` for Hermitian ``Q`` and ``rho``: the real part only."""
    return complex_mean(_as_array(q), rho).real


@dataclass(frozen=True, eq=False)
class HermitianBasis:
    dim: int
    elements: tuple
    labels: tuple

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __getitem__(self, k):
        return self.elements[k]


def hermitian_basis(n):
    """Generalized Gell-Mann basis plus identity, ``n**2`` elements.

    Order: symmetric ``E_jk + E_kj`` (j < k, lexicographic), antisymmetric
    ``-i(E_jk - E_kj)``, the ``n - 1`` traceless diagonals, then ``I``.
    Elements are pairwise Hilbert-Schmidt orthogonal but not normalized.
    """
    n = int(n)
    if n < 1:
        raise ValueError("dimension must be at least 1")
    return _hermitian_basis(n)


@lru_cache(maxsize=None)
def _hermitian_basis(n):
    elements, labels = [], []
    pairs = [(j, k) for j in range(n) for k in range(j + 1, n)]
    for j, k in pairs:
        m = np.zeros((n, n), dtype=np.complex128)
        m[j, k] = m[k, j] = 1.0
        elements.append(m)
        labels.append(f"S{j}{k}")
    for j, k in pairs:
        m = np.zeros((n, n), dtype=np.complex128)
        m[j, k] = -1j
        m[k, j] = 1j
        elements.append(m)
        labels.append(f"A{j}{k}")
    for l in range(1, n):
        diag = np.zeros(n)
        diag[:l] = 1.0
        diag[l] = -l
        elements.append(np.sqrt(2.0 / (l * (l + 1))) * np.diag(diag).astype(np.complex128))
        labels.append(f"D{l}")
    elements.append(np.eye(n, dtype=np.complex128))
    labels.append("I")
    return HermitianBasis(n, tuple(HermitianObservable(m) for m in elements),
                          tuple(labels))


@lru_cache(maxsize=None)
def coordinate_frame(n):
    """Unitary ``U`` whose columns are the normalized vectorized basis.

    For Hermitian ``X``, ``U^dagger vec(X)`` is real and an isometry onto R^(n^2).
    """
    basis = hermitian_basis(n)
    cols = [vectorize(b.matrix) / np.linalg.norm(b.matrix) for b in basis]
    u = np.column_stack(cols)
    u.setflags(write=False)
    return u


def real_coordinates(x):
    """Orthonormal real coordinates of a Hermitian matrix."""
    x = as_matrix(_as_array(x))
    return (coordinate_frame(x.shape[0]).conj().T @ vectorize(x)).real


def from_real_coordinates(c, n):
    v = coordinate_frame(n) @ np.asarray(c, dtype=np.complex128)
    m = v.reshape(n, n, order="F")
    return 0.5 * (m + m.conj().T)


def _uniform_dim(items):
    dims = {np.asarray(x).shape for x in items}
    if len(dims) > 1:
        raise DimensionError(f"mixed shapes {sorted(dims)}")


def real_span_dim(items, tol=DEFAULT_TOL):
    """Dimension of the real span of Hermitian matrices inside B_*(H)."""
    mats = [_as_array(x) for x in items]
    if not mats:
        return 0
    _uniform_dim(mats)
    for m in mats:
        if hermiticity_defect(m) > HERMITIAN_TOL:
            raise HermiticityError("real_span_dim needs Hermitian inputs")
    return numerical_rank(np.array([real_coordinates(m) for m in mats]), tol)


def complex_span_dim(items, tol=DEFAULT_TOL):
    """Dimension of the complex span of matrices inside M_n(C)."""
    mats = [_as_array(x) for x in items]
    if not mats:
        return 0
    _uniform_dim(mats)
    return numerical_rank(np.array([vectorize(m) for m in mats]), tol)
