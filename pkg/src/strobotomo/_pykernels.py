"""Pure-numpy fallback for the compiled kernels in ``_ckernels.pyx``."""
import numpy as np


def hermitian_split(a):
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("hermitian_split needs a square matrix")
    re, im = a.real, a.imag
    q = 0.5 * (re + re.T) + 0.5j * (im - im.T)
    r = 0.5 * (im + im.T) + 0.5j * (re.T - re)
    return q, r


def gkls_superop(h, ops, rates):
    h = np.asarray(h)
    n = h.shape[0]
    eye = np.eye(n)
    out = -1j * (np.kron(eye, h) - np.kron(h.T, eye))
    for v, g in zip(ops, rates):
        if g == 0.0:
            continue
        vdv = v.conj().T @ v
        out = out + g * (np.kron(v.conj(), v)
                         - 0.5 * np.kron(eye, vdv)
                         - 0.5 * np.kron(vdv.T, eye))
    return np.ascontiguousarray(out, dtype=np.complex128)


def cgs2(basis, k, w):
    if basis.shape[1] != w.shape[0]:
        raise ValueError("basis rows and vector length differ")
    if k > basis.shape[0]:
        raise ValueError("k exceeds the number of stored basis rows")
    if k:
        active = basis[:k]
        for _ in range(2):
            w -= (active.conj() @ w) @ active
    return float(np.linalg.norm(w))


def simplex_project(v):
    v = np.asarray(v, dtype=float)
    if v.size == 0:
        return np.empty(0)
    u = np.sort(v)[::-1]
    steps = (np.cumsum(u) - 1.0) / np.arange(1, v.size + 1)
    theta = steps[u - steps > 0][-1]
    return np.maximum(v - theta, 0.0)
