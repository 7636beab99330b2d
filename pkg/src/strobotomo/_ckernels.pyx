# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels. Signatures mirror :mod:`strobotomo._pykernels` exactly."""
import numpy as np

from libc.math cimport sqrt


def hermitian_split(const double complex[:, :] a):
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t i, j
    cdef double re_ij, im_ij, re_ji, im_ji
    if a.shape[1] != n:
        raise ValueError("hermitian_split needs a square matrix")
    q = np.empty((n, n), dtype=np.complex128)
    r = np.empty((n, n), dtype=np.complex128)
    cdef double complex[:, :] qv = q
    cdef double complex[:, :] rv = r
    for i in range(n):
        for j in range(n):
            re_ij = a[i, j].real
            im_ij = a[i, j].imag
            re_ji = a[j, i].real
            im_ji = a[j, i].imag
            qv[i, j] = 0.5 * (re_ij + re_ji) + 0.5j * (im_ij - im_ji)
            rv[i, j] = 0.5 * (im_ij + im_ji) + 0.5j * (re_ji - re_ij)
    return q, r


def gkls_superop(const double complex[:, :] h,
                 const double complex[:, :, :] ops,
                 const double[:] rates):
    cdef Py_ssize_t n = h.shape[0]
    cdef Py_ssize_t m = ops.shape[0]
    cdef Py_ssize_t nn = n * n
    cdef Py_ssize_t a, b, c, d, k, l
    cdef double g
    cdef double complex acc
    out = np.zeros((nn, nn), dtype=np.complex128)
    eff = np.empty((n, n), dtype=np.complex128)
    cdef double complex[:, :] s = out
    cdef double complex[:, :] geff = eff

    # geff = -iH - 1/2 sum_k rate_k V_k^dag V_k
    for a in range(n):
        for c in range(n):
            acc = -1j * h[a, c]
            for k in range(m):
                g = rates[k]
                if g == 0.0:
                    continue
                for l in range(n):
                    acc = acc - 0.5 * g * ops[k, l, a].conjugate() * ops[k, l, c]
            geff[a, c] = acc

    # column-stacked index of entry (a, b) is a + n*b
    for b in range(n):
        for a in range(n):
            for c in range(n):
                s[a + n * b, c + n * b] += geff[a, c]
            for d in range(n):
                s[a + n * b, a + n * d] += geff[b, d].conjugate()

    for k in range(m):
        g = rates[k]
        if g == 0.0:
            continue
        for b in range(n):
            for a in range(n):
                for d in range(n):
                    for c in range(n):
                        s[a + n * b, c + n * d] += (
                            g * ops[k, a, c] * ops[k, b, d].conjugate())
    return out


def cgs2(double complex[:, :] basis, Py_ssize_t k, double complex[:] w):
    cdef Py_ssize_t length = w.shape[0]
    cdef Py_ssize_t p, j, l
    cdef double complex coef
    cdef double nrm = 0.0
    if basis.shape[1] != length:
        raise ValueError("basis rows and vector length differ")
    if k > basis.shape[0]:
        raise ValueError("k exceeds the number of stored basis rows")
    for p in range(2):
        for j in range(k):
            coef = 0.0
            for l in range(length):
                coef = coef + basis[j, l].conjugate() * w[l]
            for l in range(length):
                w[l] = w[l] - coef * basis[j, l]
    for l in range(length):
        nrm += w[l].real * w[l].real + w[l].imag * w[l].imag
    return sqrt(nrm)


def simplex_project(const double[:] v):
    cdef Py_ssize_t n = v.shape[0]
    cdef Py_ssize_t i
    cdef double csum = 0.0, theta = 0.0, t
    if n == 0:
        return np.empty(0)
    srt = np.sort(np.asarray(v))[::-1].copy()
    cdef double[:] u = srt
    for i in range(n):
        csum += u[i]
        t = (csum - 1.0) / (i + 1)
        if u[i] - t > 0.0:
            theta = t
    out = np.empty(n)
    cdef double[:] o = out
    for i in range(n):
        t = v[i] - theta
        o[i] = t if t > 0.0 else 0.0
    return out
