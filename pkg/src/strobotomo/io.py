"""JSON formats: matrices, generators, records, reports and problem configs.

Matrix: ``{"rows": n, "cols": n, "data": [[[re, im], ...], ...]}``.
Floats are written with Python's shortest round-trip repr, so reading a
file back reproduces every entry bit for bit.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .dynamics import DensityMatrix, build_gkls
from .hermdecomp import GeneralizedObservable, HERMITIAN_TOL, hermiticity_defect
from .matcore import DEFAULT_TOL
from .observability import ObservableSet
from .tomography import MeasurementRecord, make_time_grid


class ConfigError(ValueError):
    """Malformed input; ``path`` names the offending field."""

    def __init__(self, path, message):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path


def _float(x):
    x = float(x)
    # JSON has no inf/nan
    return x if math.isfinite(x) else None


def matrix_to_json(m):
    m = np.asarray(getattr(m, "matrix", m), dtype=np.complex128)
    return {
        "rows": int(m.shape[0]),
        "cols": int(m.shape[1]),
        "data": [[[float(z.real), float(z.imag)] for z in row] for row in m],
    }


def matrix_from_json(obj, path="matrix"):
    if not isinstance(obj, dict):
        raise ConfigError(path, "expected an object with rows, cols, data")
    for key in ("rows", "cols", "data"):
        if key not in obj:
            raise ConfigError(f"{path}.{key}", "missing")
    rows, cols, data = obj["rows"], obj["cols"], obj["data"]
    if not isinstance(rows, int) or not isinstance(cols, int) or rows < 0 or cols < 0:
        raise ConfigError(path, "rows and cols must be nonnegative integers")
    if not isinstance(data, list) or len(data) != rows:
        raise ConfigError(f"{path}.data", f"expected {rows} rows")
    out = np.zeros((rows, cols), dtype=np.complex128)
    for i, row in enumerate(data):
        if not isinstance(row, list) or len(row) != cols:
            raise ConfigError(f"{path}.data[{i}]", f"expected {cols} entries")
        for j, z in enumerate(row):
            if (not isinstance(z, list) or len(z) != 2
                    or not all(isinstance(c, (int, float)) and not isinstance(c, bool) for c in z)):
                raise ConfigError(f"{path}.data[{i}][{j}]", "expected [re, im]")
            out[i, j] = complex(z[0], z[1])
    if not np.all(np.isfinite(out)):
        raise ConfigError(path, "non-finite entry")
    return out


def square_matrix_from_json(obj, path):
    m = matrix_from_json(obj, path)
    if m.shape[0] != m.shape[1]:
        raise ConfigError(path, f"matrix must be square, got {m.shape[0]}x{m.shape[1]}")
    return m


def generator_to_json(gen):
    return {
        "dim": gen.dim,
        "hamiltonian": matrix_to_json(gen.hamiltonian.matrix),
        "dissipators": [{"op": matrix_to_json(v), "rate": g} for v, g in gen.dissipators],
    }


def generator_from_json(obj, path="generator"):
    if not isinstance(obj, dict):
        raise ConfigError(path, "expected an object")
    if "hamiltonian" not in obj:
        raise ConfigError(f"{path}.hamiltonian", "missing")
    h = square_matrix_from_json(obj["hamiltonian"], f"{path}.hamiltonian")
    n = obj.get("dim", h.shape[0])
    if n != h.shape[0]:
        raise ConfigError(f"{path}.dim", f"dim {n} but Hamiltonian is {h.shape[0]}x{h.shape[0]}")
    if hermiticity_defect(h) > HERMITIAN_TOL:
        raise ConfigError(f"{path}.hamiltonian", "not Hermitian")
    diss = []
    raw = obj.get("dissipators", [])
    if not isinstance(raw, list):
        raise ConfigError(f"{path}.dissipators", "expected a list")
    for k, d in enumerate(raw):
        p = f"{path}.dissipators[{k}]"
        if not isinstance(d, dict) or "op" not in d or "rate" not in d:
            raise ConfigError(p, "expected {op, rate}")
        v = square_matrix_from_json(d["op"], f"{p}.op")
        if v.shape != h.shape:
            raise ConfigError(f"{p}.op", f"shape {v.shape} does not match dim {n}")
        rate = d["rate"]
        if not isinstance(rate, (int, float)) or isinstance(rate, bool) or rate < 0:
            raise ConfigError(f"{p}.rate", "must be a nonnegative number")
        diss.append((v, float(rate)))
    return build_gkls(h, diss)


def record_to_json(r):
    return {"i": r.i, "j": r.j, "t": r.t, "value": [r.value.real, r.value.imag],
            "noise_std": r.noise_std}


def records_to_json(records):
    return [record_to_json(r) for r in records]


def records_from_json(arr, path="records"):
    if not isinstance(arr, list):
        raise ConfigError(path, "expected a list")
    out = []
    for k, obj in enumerate(arr):
        p = f"{path}[{k}]"
        try:
            re, im = obj["value"]
            out.append(MeasurementRecord(int(obj["i"]), int(obj["j"]), float(obj["t"]),
                                         complex(re, im), float(obj.get("noise_std", 0.0))))
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(p, f"bad record ({exc})") from None
    return out


def report_to_json(report):
    return {
        "verdict": report.verdict,
        "mu": report.mu,
        "per_observable_dims": list(report.per_observable_dims),
        "labels": list(report.labels),
        "total_span_dim": report.total_span_dim,
        "target_dim": report.target_dim,
        "identity_augmented": report.identity_augmented,
        "missing_direction": (None if report.missing_direction is None
                              else matrix_to_json(report.missing_direction)),
        "tolerance_used": report.tolerance_used,
        "warnings": list(report.warnings),
    }


def result_to_json(result):
    return {
        "rho_hat": matrix_to_json(result.rho_hat.matrix),
        "raw_solution": matrix_to_json(result.raw_solution),
        "residual_norm": _float(result.residual_norm),
        "frame_condition_number": _float(result.frame_condition_number),
        "frame_rank": result.frame_rank,
        "projected": result.projected,
    }


def dumps(obj):
    """Canonical JSON text: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, allow_nan=False) + "\n"


@dataclass(frozen=True, eq=False)
class ProblemConfig:
    generator: object
    observables: ObservableSet
    rho0: DensityMatrix | None = None
    time_grid: dict | None = None
    noise_std: float = 0.0
    seed: int = 0
    identity_augmented: bool = False
    rank_tol: float = DEFAULT_TOL
    notices: tuple = field(default=())


def _bool(x, path):
    if not isinstance(x, bool):
        raise ConfigError(path, "expected true or false")
    return x


def _observables_from_json(arr, n, path="observables"):
    """Each entry is a matrix or ``{"label", "matrix"}``; complex ones split."""
    if not isinstance(arr, list) or not arr:
        raise ConfigError(path, "expected a non-empty list")
    mats, labels, notices = [], [], []
    for k, entry in enumerate(arr):
        p = f"{path}[{k}]"
        if isinstance(entry, dict) and "matrix" in entry:
            label = str(entry.get("label", f"Q{k + 1}"))
            m = square_matrix_from_json(entry["matrix"], f"{p}.matrix")
        else:
            label = f"Q{k + 1}"
            m = square_matrix_from_json(entry, p)
        if m.shape[0] != n:
            raise ConfigError(p, f"dimension {m.shape[0]} does not match generator dim {n}")
        if hermiticity_defect(m) <= HERMITIAN_TOL:
            mats.append(m)
            labels.append(label)
        else:
            ga = GeneralizedObservable.from_matrix(m)
            mats += [ga.q1.matrix, ga.q2.matrix]
            labels += [f"{label}.re", f"{label}.im"]
            notices.append(f"{label} is not Hermitian; measured as channels "
                           f"{label}.re and {label}.im (A = Q1 + iQ2)")
    return ObservableSet(tuple(mats), tuple(labels)), tuple(notices)


def _grid_spec(obj, path="time_grid"):
    """Validate a grid spec; a uniform grid without ``g`` defaults to mu later."""
    if obj is None:
        return None
    if not isinstance(obj, dict):
        raise ConfigError(path, "expected an object")
    mode = obj.get("mode", "uniform")
    if mode not in ("uniform", "explicit"):
        raise ConfigError(f"{path}.mode", f"unknown mode {mode!r}")
    try:
        if mode == "explicit":
            make_time_grid("explicit", explicit_times=obj.get("times"))
        elif obj.get("g") is not None:
            make_time_grid("uniform", obj.get("T", 1.0), obj["g"],
                           include_zero=obj.get("include_zero", False))
    except (TypeError, ValueError) as exc:
        raise ConfigError(path, str(exc)) from None
    return dict(obj)


def resolve_grid(spec, mu):
    """Time grid from a spec; ``None`` or a missing ``g`` means g = mu, T = 1."""
    spec = spec or {}
    if spec.get("mode", "uniform") == "explicit":
        return make_time_grid("explicit", explicit_times=spec["times"])
    g = spec.get("g") or mu
    return make_time_grid("uniform", spec.get("T", 1.0), g,
                          include_zero=spec.get("include_zero", False))


def config_from_json(obj):
    if not isinstance(obj, dict):
        raise ConfigError("", "config must be a JSON object")
    if "generator" not in obj:
        raise ConfigError("generator", "missing")
    if "observables" not in obj:
        raise ConfigError("observables", "missing")
    gen = generator_from_json(obj["generator"])
    observables, notices = _observables_from_json(obj["observables"], gen.dim)
    rho0 = None
    if obj.get("rho0") is not None:
        m = square_matrix_from_json(obj["rho0"], "rho0")
        if m.shape[0] != gen.dim:
            raise ConfigError("rho0", f"dimension {m.shape[0]} does not match {gen.dim}")
        try:
            rho0 = DensityMatrix(m)
        except ValueError as exc:
            raise ConfigError("rho0", str(exc)) from None
    noise = obj.get("noise", {}) or {}
    if not isinstance(noise, dict):
        raise ConfigError("noise", "expected an object")
    std = noise.get("std", 0.0)
    if not isinstance(std, (int, float)) or isinstance(std, bool) or std < 0:
        raise ConfigError("noise.std", "must be a nonnegative number")
    seed = noise.get("seed", 0)
    if not isinstance(seed, int) or isinstance(seed, bool) or seed < 0:
        raise ConfigError("noise.seed", "must be a nonnegative integer")
    opts = obj.get("options", {}) or {}
    if not isinstance(opts, dict):
        raise ConfigError("options", "expected an object")
    aug = _bool(opts.get("identity_augmented", False), "options.identity_augmented")
    tol = opts.get("rank_tol", DEFAULT_TOL)
    if not isinstance(tol, (int, float)) or isinstance(tol, bool) or not tol > 0:
        raise ConfigError("options.rank_tol", "must be a positive number")
    return ProblemConfig(gen, observables, rho0, _grid_spec(obj.get("time_grid")),
                         float(std), seed, aug, float(tol), notices)


def load_config(path):
    with open(path) as fh:
        text = fh.read()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"line {exc.lineno}, column {exc.colno}", exc.msg) from None
    return config_from_json(obj)


def config_to_json(cfg):
    """Serialize a config; complex observables appear as their channels."""
    out = {
        "generator": generator_to_json(cfg.generator),
        "observables": [{"label": lab, "matrix": matrix_to_json(q.matrix)}
                        for lab, q in zip(cfg.observables.labels, cfg.observables)],
        "noise": {"std": cfg.noise_std, "seed": cfg.seed},
        "options": {"identity_augmented": cfg.identity_augmented, "rank_tol": cfg.rank_tol},
    }
    if cfg.rho0 is not None:
        out["rho0"] = matrix_to_json(cfg.rho0.matrix)
    if cfg.time_grid is not None:
        out["time_grid"] = dict(cfg.time_grid)
    return out
