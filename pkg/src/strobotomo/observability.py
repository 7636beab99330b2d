"""Reconstructibility of the initial state from repeated mean-value data.

A system with generator ``L`` is reconstructible from ``Q_1..Q_r`` iff the
Krylov subspaces ``K_mu(L, Q_i) = span{Q_i, L*Q_i, ..., (L*)^(mu-1) Q_i}``
together span all Hermitian operators, ``mu`` being the degree of the
minimal polynomial of ``L``. The sum of subspaces is tested as the rank of
their pooled bases.

Krylov bases are built by Arnoldi iteration in orthonormal real coordinates
of B_*(H) (see :func:`strobotomo.hermdecomp.coordinate_frame`). The literal
power sequence is kept for reporting; it is not used for rank decisions
because it becomes ill-conditioned quickly.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .hermdecomp import (HermitianObservable, coordinate_frame,
                         from_real_coordinates, hermitian_basis,
                         real_coordinates)
from .matcore import (DEFAULT_TOL, DimensionError, arnoldi, minimal_poly_degree,
                      near_threshold, numerical_rank, vectorize, devectorize)

RECONSTRUCTIBLE = "reconstructible"
NOT_RECONSTRUCTIBLE = "not_reconstructible"


@dataclass(frozen=True, eq=False)
class ObservableSet:
    observables: tuple
    labels: tuple = ()

    def __post_init__(self):
        obs = tuple(q if isinstance(q, HermitianObservable) else HermitianObservable(q)
                    for q in self.observables)
        if not obs:
            raise ValueError("an observable set needs at least one observable")
        dims = {q.dim for q in obs}
        if len(dims) != 1:
            raise DimensionError(f"observables have mixed dimensions {sorted(dims)}")
        labels = tuple(self.labels) or tuple(f"Q{i + 1}" for i in range(len(obs)))
        if len(labels) != len(obs):
            raise ValueError("one label per observable")
        object.__setattr__(self, "observables", obs)
        object.__setattr__(self, "labels", labels)

    @property
    def dim(self):
        return self.observables[0].dim

    def __len__(self):
        return len(self.observables)

    def __iter__(self):
        return iter(self.observables)

    def __getitem__(self, i):
        return self.observables[i]

    def extended(self, extra, labels=None):
        extra = list(extra)
        labels = list(labels) if labels else [f"Q{len(self) + k + 1}" for k in range(len(extra))]
        return ObservableSet(self.observables + tuple(extra), self.labels + tuple(labels))


@dataclass(frozen=True, eq=False)
class KrylovSubspace:
    source: int
    generators: tuple           # Q, L*Q, ..., (L*)^(mu-1) Q as matrices
    orthonormal_basis: tuple    # Hermitian, unit HS norm
    dim: int
    coordinates: np.ndarray = field(repr=False)   # basis rows in real coordinates
    residuals: tuple = ()
    threshold: float = 0.0


@dataclass(frozen=True, eq=False)
class ObservabilityReport:
    verdict: str
    mu: int
    per_observable_dims: tuple
    total_span_dim: int
    target_dim: int
    identity_augmented: bool
    missing_direction: np.ndarray | None
    tolerance_used: float
    labels: tuple = ()
    warnings: tuple = ()

    @property
    def reconstructible(self):
        return self.verdict == RECONSTRUCTIBLE


def _heisenberg_real(gen):
    """L* as a real matrix on orthonormal coordinates of B_*(H)."""
    u = coordinate_frame(gen.dim)
    return (u.conj().T @ gen.heisenberg.matrix @ u).real


def _threshold(op, tol):
    return tol * float(np.linalg.norm(op, 2)) * op.shape[0]


def _as_obs(q):
    return q if isinstance(q, HermitianObservable) else HermitianObservable(q)


def krylov_subspace(gen, q, mu, tol=DEFAULT_TOL, source=0):
    """``K_mu(L, Q)`` with literal generators and an orthonormal basis."""
    q = _as_obs(q)
    if q.dim != gen.dim:
        raise DimensionError(f"observable is {q.dim}x{q.dim}, generator dim is {gen.dim}")
    mu = int(mu)
    if mu < 1:
        raise ValueError("mu must be at least 1")
    lh = gen.heisenberg.matrix
    gens = [q.matrix]
    v = vectorize(q.matrix)
    for _ in range(mu - 1):
        v = lh @ v
        gens.append(devectorize(v))
    op = _heisenberg_real(gen)
    thr = _threshold(op, tol)
    run = arnoldi(lambda x: op @ x.real, real_coordinates(q.matrix), mu, thr)
    coords = run.basis.real.copy()
    n = gen.dim
    basis = tuple(HermitianObservable(from_real_coordinates(c, n)) for c in coords)
    return KrylovSubspace(source, tuple(gens), basis, coords.shape[0], coords,
                          run.residuals, thr)


def _pool(subspaces, n, identity_augmented):
    rows = [ks.coordinates for ks in subspaces if ks.dim]
    if identity_augmented:
        rows.append(real_coordinates(np.eye(n))[None, :])
    if not rows:
        return np.zeros((0, n * n))
    return np.vstack(rows)


def _witness(pooled, n, tol):
    """Unit-norm Hermitian direction orthogonal to the pooled span."""
    if pooled.shape[0] == 0:
        c = np.eye(n * n)[-1]
    else:
        _, _, vt = np.linalg.svd(pooled, full_matrices=True)
        c = vt[numerical_rank(pooled, tol)]
    m = from_real_coordinates(c, n)
    return m / np.linalg.norm(m)


def reconstructibility_check(gen, observables, identity_augmented=False,
                             tol=DEFAULT_TOL, mu_tol=None):
    """Test whether the pooled Krylov spaces cover all Hermitian operators.

    ``mu_tol`` overrides the tolerance for the minimal-polynomial degree only;
    by default the same ``tol`` drives both decisions.
    """
    obs = observables if isinstance(observables, ObservableSet) else ObservableSet(observables)
    if obs.dim != gen.dim:
        raise DimensionError(f"observables are {obs.dim}-dimensional, generator is {gen.dim}")
    n = gen.dim
    warnings = []
    mp = minimal_poly_degree(gen.schrodinger.matrix, tol if mu_tol is None else mu_tol)
    if mp.ambiguous:
        warnings.append(f"minimal polynomial degree {mp.degree} is tolerance-ambiguous")
    subspaces = [krylov_subspace(gen, q, mp.degree, tol, source=i)
                 for i, q in enumerate(obs)]
    for ks, label in zip(subspaces, obs.labels):
        if near_threshold(ks.residuals, ks.threshold):
            warnings.append(f"Krylov dimension of {label} is tolerance-ambiguous")
    pooled = _pool(subspaces, n, identity_augmented)
    total = numerical_rank(pooled, tol) if pooled.size else 0
    target = n * n
    ok = total == target
    return ObservabilityReport(
        verdict=RECONSTRUCTIBLE if ok else NOT_RECONSTRUCTIBLE,
        mu=mp.degree,
        per_observable_dims=tuple(ks.dim for ks in subspaces),
        total_span_dim=total,
        target_dim=target,
        identity_augmented=bool(identity_augmented),
        missing_direction=None if ok else _witness(pooled, n, tol),
        tolerance_used=tol,
        labels=obs.labels,
        warnings=tuple(warnings),
    )


def complex_span_verdict(gen, observables, identity_augmented=False,
                         tol=DEFAULT_TOL):
    """The same test over M_n(C): complex Arnoldi on the n^2 x n^2 adjoint."""
    obs = observables if isinstance(observables, ObservableSet) else ObservableSet(observables)
    n = gen.dim
    lh = gen.heisenberg.matrix
    mu = minimal_poly_degree(gen.schrodinger.matrix, tol).degree
    thr = _threshold(lh, tol)
    rows = [arnoldi(lambda x: lh @ x, vectorize(q.matrix), mu, thr).basis for q in obs]
    if identity_augmented:
        rows.append(vectorize(np.eye(n))[None, :] / np.sqrt(n))
    stack = np.vstack([r for r in rows if r.size] or [np.zeros((0, n * n))])
    rank = numerical_rank(stack, tol) if stack.size else 0
    return rank == n * n, rank


def complex_side_check(gen, observables, identity_augmented=False, tol=DEFAULT_TOL):
    """Whether the real and complex spanning verdicts agree."""
    real = reconstructibility_check(gen, observables, identity_augmented, tol)
    cplx, _ = complex_span_verdict(gen, observables, identity_augmented, tol)
    return real.reconstructible == cplx


def greedy_complete(gen, observables, identity_augmented=False, tol=DEFAULT_TOL):
    """Basis elements to add, greedily by span gain, until reconstructible.

    Candidates come from :func:`hermitian_basis` in its fixed order; ties go to
    the earlier candidate, so the result is deterministic.
    """
    obs = observables if isinstance(observables, ObservableSet) else ObservableSet(observables)
    report = reconstructibility_check(gen, obs, identity_augmented, tol)
    if report.reconstructible:
        return []
    n = gen.dim
    mu = report.mu
    pooled = _pool([krylov_subspace(gen, q, mu, tol) for q in obs], n, identity_augmented)
    current = numerical_rank(pooled, tol) if pooled.size else 0
    candidates = [(b, krylov_subspace(gen, b, mu, tol).coordinates)
                  for b in hermitian_basis(n)]
    added = []
    while current < n * n:
        best, best_rank = None, current
        for k, (b, coords) in enumerate(candidates):
            rank = numerical_rank(np.vstack([pooled, coords]), tol)
            if rank > best_rank:
                best, best_rank = k, rank
        if best is None:
            break
        b, coords = candidates.pop(best)
        added.append(b)
        pooled = np.vstack([pooled, coords])
        current = best_rank
    return added
