"""Simulate stroboscopic mean-value data and reconstruct the initial state.

Each datum ``<Q_i>_{t_j} = Tr(Q_i exp(L t_j) rho0)`` equals
``<exp(L* t_j) Q_i, rho0>``, so the data are linear in ``vec(rho0)`` with
rows ``conj(vec(Q_i(t_j)))``. Reconstruction is a minimum-norm least-squares
solve followed by projection onto density matrices.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _backend
from .dynamics import DensityMatrix, propagate_observable, propagate_state
from .hermdecomp import GeneralizedObservable, real_mean
from .matcore import DEFAULT_TOL, DimensionError, as_matrix, devectorize, vectorize
from .observability import ObservableSet


@dataclass(frozen=True)
class TimeGrid:
    times: tuple
    mode: str
    horizon: float

    def __post_init__(self):
        times = tuple(float(t) for t in self.times)
        if not times:
            raise ValueError("a time grid needs at least one instant")
        if any(not np.isfinite(t) or t < 0 for t in times):
            raise ValueError("times must be finite and nonnegative")
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ValueError("times must be strictly increasing")
        object.__setattr__(self, "times", times)

    def __len__(self):
        return len(self.times)

    def __iter__(self):
        return iter(self.times)


def make_time_grid(mode="uniform", T=1.0, g=None, explicit_times=None,
                   include_zero=False):
    """Uniform grid ``t_j = j T / g`` (j = 1..g) or a validated explicit list.

    With ``include_zero`` the uniform grid is ``g`` points from 0 to ``T``.
    """
    if mode == "uniform":
        if g is None or int(g) < 1:
            raise ValueError("uniform grid needs g >= 1")
        g = int(g)
        T = float(T)
        if not T > 0:
            raise ValueError("uniform grid needs T > 0")
        if include_zero:
            times = np.linspace(0.0, T, g) if g > 1 else np.zeros(1)
        else:
            times = T * np.arange(1, g + 1) / g
        return TimeGrid(tuple(times), "uniform", T)
    if mode == "explicit":
        if explicit_times is None or len(explicit_times) == 0:
            raise ValueError("explicit grid needs at least one time")
        ts = [float(t) for t in explicit_times]
        if len(set(ts)) != len(ts):
            raise ValueError("explicit grid has duplicate times")
        if any(t < 0 for t in ts):
            raise ValueError("explicit grid has negative times")
        ts.sort()
        return TimeGrid(tuple(ts), "explicit", ts[-1])
    raise ValueError(f"unknown grid mode {mode!r}")


@dataclass(frozen=True)
class MeasurementRecord:
    i: int
    j: int
    t: float
    value: complex
    noise_std: float = 0.0
    seed_tag: int = 0

    def __post_init__(self):
        if not np.isfinite(complex(self.value)):
            raise ValueError("record value must be finite")
        if self.i < 0 or self.j < 0:
            raise ValueError("record indices must be nonnegative")
        if self.noise_std < 0:
            raise ValueError("noise_std must be nonnegative")
        object.__setattr__(self, "value", complex(self.value))


def _noise(seed, i, j, channel, std):
    if std == 0.0:
        return 0.0
    rng = np.random.default_rng(np.random.SeedSequence([int(seed), i, j, channel]))
    return float(rng.normal(0.0, std))


def _state(rho0):
    return rho0 if isinstance(rho0, DensityMatrix) else DensityMatrix(rho0)


def _observable_set(obs):
    return obs if isinstance(obs, ObservableSet) else ObservableSet(obs)


def simulate_measurements(gen, rho0, observables, grid, std=0.0, seed=0):
    """Records ``<Q_i>_{t_j}`` plus Gaussian noise seeded by ``(seed, i, j)``."""
    obs = _observable_set(observables)
    rho0 = _state(rho0)
    if obs.dim != gen.dim or rho0.dim != gen.dim:
        raise DimensionError("generator, state and observables must share a dimension")
    if std < 0:
        raise ValueError("noise std must be nonnegative")
    records = []
    for j, t in enumerate(grid.times):
        rho_t = propagate_state(gen, rho0, t)
        for i, q in enumerate(obs):
            value = real_mean(q, rho_t) + _noise(seed, i, j, 0, std)
            records.append(MeasurementRecord(i, j, t, value, float(std), int(seed)))
    records.sort(key=lambda r: (r.i, r.j))
    return records


def simulate_complex_measurements(gen, rho0, a, grid, std=0.0, seed=0, index=0):
    """Complex records ``<A>_{t_j} = <Q1> + i<Q2>``, each channel noised apart."""
    if not isinstance(a, GeneralizedObservable):
        a = GeneralizedObservable.from_matrix(a)
    rho0 = _state(rho0)
    if a.dim != gen.dim or rho0.dim != gen.dim:
        raise DimensionError("generator, state and observable must share a dimension")
    records = []
    for j, t in enumerate(grid.times):
        rho_t = propagate_state(gen, rho0, t)
        re = real_mean(a.q1, rho_t) + _noise(seed, index, j, 0, std)
        im = real_mean(a.q2, rho_t) + _noise(seed, index, j, 1, std)
        records.append(MeasurementRecord(index, j, t, complex(re, im), float(std), int(seed)))
    return records


def split_complex_records(records, re_index, im_index):
    """Turn complex records into two real channels with the given indices."""
    out = []
    for r in records:
        out.append(MeasurementRecord(re_index, r.j, r.t, r.value.real, r.noise_std, r.seed_tag))
        out.append(MeasurementRecord(im_index, r.j, r.t, r.value.imag, r.noise_std, r.seed_tag))
    return out


@dataclass(frozen=True, eq=False)
class Frame:
    matrix: np.ndarray
    row_map: dict          # (i, j) -> row
    trace_row: int | None
    times: tuple

    @property
    def shape(self):
        return self.matrix.shape


def assemble_frame(gen, observables, grid, trace_row=False):
    """Rows ``conj(vec(exp(L* t_j) Q_i))``, optionally a final unit-trace row."""
    obs = _observable_set(observables)
    if obs.dim != gen.dim:
        raise DimensionError("observables and generator dimensions differ")
    n = gen.dim
    rows, row_map = [], {}
    for i, q in enumerate(obs):
        for j, t in enumerate(grid.times):
            row_map[(i, j)] = len(rows)
            rows.append(vectorize(propagate_observable(gen, q, t).matrix).conj())
    trace_idx = None
    if trace_row:
        trace_idx = len(rows)
        rows.append(vectorize(np.eye(n)).conj())
    return Frame(np.array(rows), row_map, trace_idx, tuple(grid.times))


def frame_condition(frame):
    s = np.linalg.svd(frame.matrix, compute_uv=False)
    nn = frame.matrix.shape[1]
    if len(s) < nn or s[-1] == 0.0:
        return float("inf")
    return float(s[0] / s[-1])


def design_time_grid(gen, observables, g, T, attempts=20, seed=0, trace_row=False):
    """Best-conditioned of ``attempts`` random grids with times in (0, T].

    Returns ``(grid, frame, condition_number)``.
    """
    rng = np.random.default_rng(seed)
    best = None
    for _ in range(int(attempts)):
        ts = np.unique(T - rng.uniform(0.0, T, size=int(g)))  # (0, T]
        grid = make_time_grid("explicit", explicit_times=ts)
        frame = assemble_frame(gen, observables, grid, trace_row)
        cond = frame_condition(frame)
        if best is None or cond < best[2]:
            best = (grid, frame, cond)
    return best


@dataclass(frozen=True, eq=False)
class ReconstructionResult:
    rho_hat: DensityMatrix
    raw_solution: np.ndarray
    residual_norm: float
    frame_condition_number: float
    frame_rank: int
    projected: bool
    singular_values: np.ndarray

    @property
    def full_rank(self):
        return self.frame_rank == self.raw_solution.shape[0] ** 2


def reconstruct(records, frame, rank_tol=DEFAULT_TOL):
    """Minimum-norm least squares for ``vec(rho0)`` then density projection.

    Singular values at or below ``rank_tol * s_max * max(rows, cols)`` are
    treated as zero, matching :func:`strobotomo.matcore.numerical_rank`.
    """
    f = frame.matrix
    m, nn = f.shape
    if m == 0:
        raise ValueError("empty frame")
    n = int(round(np.sqrt(nn)))
    expected = len(frame.row_map)
    if len(records) != expected:
        raise ValueError(f"{len(records)} records for {expected} frame rows")
    b = np.zeros(m)
    seen = set()
    for r in records:
        key = (r.i, r.j)
        if key not in frame.row_map:
            raise ValueError(f"record {key} has no frame row")
        if key in seen:
            raise ValueError(f"duplicate record {key}")
        if abs(r.value.imag) > 0.0:
            raise ValueError(f"record {key} is complex; split it into real channels first")
        seen.add(key)
        b[frame.row_map[key]] = r.value.real
    if frame.trace_row is not None:
        b[frame.trace_row] = 1.0

    u, s, vh = np.linalg.svd(f, full_matrices=False)
    cutoff = rank_tol * s[0] * max(m, nn) if s.size and s[0] > 0 else 0.0
    keep = s > cutoff
    rank = int(np.sum(keep))
    coef = (u[:, keep].conj().T @ b) / s[keep]
    x = vh[keep].conj().T @ coef
    raw = devectorize(x)
    residual = float(np.linalg.norm(f @ x - b))
    cond = float("inf") if len(s) < nn or s[-1] == 0.0 else float(s[0] / s[-1])
    rho_hat = project_to_density(raw)
    projected = bool(np.max(np.abs(rho_hat.matrix - raw)) > 1e-12)
    return ReconstructionResult(rho_hat, raw, residual, cond, rank, projected, s)


def project_to_density(m):
    """Nearest density matrix (HS norm) to the Hermitian part of ``m``."""
    m = as_matrix(m)
    h = 0.5 * (m + m.conj().T)
    w, v = np.linalg.eigh(h)
    p = _backend.simplex_project(w)
    out = (v * p) @ v.conj().T
    out = 0.5 * (out + out.conj().T)
    # renormalize away rounding in the trace
    out = out / np.trace(out).real
    return DensityMatrix(out)


def _psd_sqrt(m):
    w, v = np.linalg.eigh(0.5 * (m + m.conj().T))
    return (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T


def _pair(rho, sigma):
    a = np.asarray(getattr(rho, "matrix", rho), dtype=np.complex128)
    b = np.asarray(getattr(sigma, "matrix", sigma), dtype=np.complex128)
    if a.shape != b.shape:
        raise DimensionError(f"shapes {a.shape} and {b.shape} differ")
    return a, b


def fidelity(rho, sigma):
    """Uhlmann fidelity ``(Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2``."""
    a, b = _pair(rho, sigma)
    ra = _psd_sqrt(a)
    inner = ra @ b @ ra
    w = np.linalg.eigvalsh(0.5 * (inner + inner.conj().T))
    f = float(np.sum(np.sqrt(np.clip(w, 0.0, None))) ** 2)
    return min(max(f, 0.0), 1.0)


def trace_distance(rho, sigma):
    a, b = _pair(rho, sigma)
    d = a - b
    w = np.linalg.eigvalsh(0.5 * (d + d.conj().T))
    return min(max(0.5 * float(np.sum(np.abs(w))), 0.0), 1.0)


def hs_distance(rho, sigma):
    a, b = _pair(rho, sigma)
    return float(np.linalg.norm(a - b))
