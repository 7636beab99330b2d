"""GKLS generators and evolution in the Schrodinger and Heisenberg pictures.

Convention::

    L rho  = -i[H, rho] + sum_k g_k (V_k rho V_k^+ - 1/2 {V_k^+ V_k, rho})
    L* Q   =  i[H, Q]   + sum_k g_k (V_k^+ Q V_k - 1/2 {V_k^+ V_k, Q})

so ``Tr(Q L(rho)) = Tr(L*(Q) rho)`` and ``L*(I) = 0``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import _backend
from .hermdecomp import HermitianObservable, hermiticity_defect
from .matcore import (DimensionError, as_matrix, devectorize, expm, frozen,
                      vectorize)

TRACE_TOL = 1e-12
POSITIVITY_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, unit-trace matrix; ``physical`` records positivity.

    Construction rejects negative eigenvalues below ``-POSITIVITY_TOL`` unless
    ``allow_unphysical`` is passed, in which case ``physical`` is False.
    """

    matrix: np.ndarray
    physical: bool = True

    def __init__(self, matrix, *, allow_unphysical=False, trace_tol=TRACE_TOL):
        m = as_matrix(getattr(matrix, "matrix", matrix), name="density matrix")
        defect = hermiticity_defect(m)
        if defect > 1e-13:
            raise ValueError(f"density matrix not Hermitian (defect {defect:.3g})")
        tr = np.trace(m).real
        if abs(tr - 1.0) > trace_tol:
            raise ValueError(f"density matrix trace is {tr!r}, expected 1")
        lowest = float(np.linalg.eigvalsh(m)[0])
        physical = lowest >= -POSITIVITY_TOL
        if not physical and not allow_unphysical:
            raise ValueError(f"density matrix has eigenvalue {lowest:.3g} < 0")
        object.__setattr__(self, "matrix", frozen(m))
        object.__setattr__(self, "physical", physical)

    @property
    def dim(self):
        return self.matrix.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.matrix, dtype=dtype)


@dataclass(frozen=True, eq=False)
class Superoperator:
    dim: int
    matrix: np.ndarray
    picture: str

    def __call__(self, x):
        x = np.asarray(getattr(x, "matrix", x))
        return devectorize(self.matrix @ vectorize(x))


@dataclass(frozen=True, eq=False)
class GklsGenerator:
    """Hamiltonian plus weighted Lindblad operators.

    Superoperator matrices are memoized per instance; concurrent first access
    may compute twice but always yields the same value.
    """

    hamiltonian: HermitianObservable
    dissipators: tuple = ()

    @property
    def dim(self):
        return self.hamiltonian.dim

    @cached_property
    def schrodinger(self):
        n = self.dim
        if self.dissipators:
            ops = np.array([v for v, _ in self.dissipators])
            rates = np.array([g for _, g in self.dissipators], dtype=float)
        else:
            ops = np.zeros((0, n, n), dtype=np.complex128)
            rates = np.zeros(0)
        mat = _backend.gkls_superop(self.hamiltonian.matrix, ops, rates)
        return Superoperator(n, frozen(mat), "schrodinger")

    @cached_property
    def heisenberg(self):
        return Superoperator(self.dim, frozen(self.schrodinger.matrix.conj().T),
                             "heisenberg")

    def scaled(self, c):
        """Generator of ``c * L`` (``c >= 0``)."""
        if c < 0:
            raise ValueError("scale must be nonnegative")
        return build_gkls(c * self.hamiltonian.matrix,
                          [(v, c * g) for v, g in self.dissipators])


def build_gkls(hamiltonian, dissipators=()):
    """Validate and assemble a generator.

    ``dissipators`` is an iterable of ``(V, rate)`` pairs with ``rate >= 0``.
    """
    h = hamiltonian if isinstance(hamiltonian, HermitianObservable) \
        else HermitianObservable(hamiltonian)
    n = h.dim
    diss = []
    for k, (v, rate) in enumerate(dissipators):
        v = as_matrix(v, name=f"dissipator {k}")
        if v.shape != (n, n):
            raise DimensionError(
                f"dissipator {k} has shape {v.shape}, Hamiltonian is {n}x{n}")
        rate = float(rate)
        if not np.isfinite(rate) or rate < 0:
            raise ValueError(f"dissipator {k} has invalid rate {rate}")
        diss.append((frozen(v), rate))
    return GklsGenerator(h, tuple(diss))


def _arr(x):
    return np.asarray(getattr(x, "matrix", x), dtype=np.complex128)


def _check_dim(gen, x):
    if x.shape != (gen.dim, gen.dim):
        raise DimensionError(f"operand shape {x.shape} does not match generator dim {gen.dim}")


def apply(gen, rho):
    """The defining action ``L(rho)`` computed directly from the operators."""
    rho = _arr(rho)
    _check_dim(gen, rho)
    h = gen.hamiltonian.matrix
    out = -1j * (h @ rho - rho @ h)
    for v, g in gen.dissipators:
        vdv = v.conj().T @ v
        out = out + g * (v @ rho @ v.conj().T - 0.5 * (vdv @ rho + rho @ vdv))
    return out


def apply_adjoint(gen, q):
    """``L*(Q)`` computed directly from the operators."""
    q = _arr(q)
    _check_dim(gen, q)
    h = gen.hamiltonian.matrix
    out = 1j * (h @ q - q @ h)
    for v, g in gen.dissipators:
        vdv = v.conj().T @ v
        out = out + g * (v.conj().T @ q @ v - 0.5 * (vdv @ q + q @ vdv))
    return out


def schrodinger_superop(gen):
    return gen.schrodinger


def heisenberg_superop(gen):
    return gen.heisenberg


def _hermitian_part(m):
    return 0.5 * (m + m.conj().T)


def propagate_state(gen, rho0, t):
    """``exp(L t) rho0``. Negative ``t`` may give an unphysical result."""
    rho0 = rho0 if isinstance(rho0, DensityMatrix) else DensityMatrix(rho0)
    _check_dim(gen, rho0.matrix)
    t = float(t)
    if not np.isfinite(t):
        raise ValueError("time must be finite")
    if t == 0.0:
        return rho0
    out = devectorize(expm(gen.schrodinger.matrix * t) @ vectorize(rho0.matrix))
    return DensityMatrix(_hermitian_part(out), allow_unphysical=True, trace_tol=1e-11)


def propagate_observable(gen, q, t):
    """``exp(L* t) Q``, the Heisenberg-picture observable."""
    q = q if isinstance(q, HermitianObservable) else HermitianObservable(q)
    _check_dim(gen, q.matrix)
    t = float(t)
    if not np.isfinite(t):
        raise ValueError("time must be finite")
    if t == 0.0:
        return q
    out = devectorize(expm(gen.heisenberg.matrix * t) @ vectorize(q.matrix))
    return HermitianObservable(_hermitian_part(out))
