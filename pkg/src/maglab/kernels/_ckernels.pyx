# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled versions of the kernels in ``_pykernels`` (same signatures)."""

import numpy as np
cimport numpy as cnp

cnp.import_array()


def christoffel(const double[:, ::1] ginv, const double[:, :, ::1] dg):
    cdef Py_ssize_t n = ginv.shape[0]
    cdef Py_ssize_t a, b, c, d
    cdef double acc
    out = np.empty((n, n, n))
    cdef double[:, :, ::1] o = out
    low = np.empty((n, n, n))
    cdef double[:, :, ::1] l = low
    for d in range(n):
        for b in range(n):
            for c in range(n):
                l[d, b, c] = dg[d, c, b] + dg[d, b, c] - dg[b, c, d]
    for a in range(n):
        for b in range(n):
            for c in range(n):
                acc = 0.0
                for d in range(n):
                    acc += ginv[a, d] * l[d, b, c]
                o[a, b, c] = 0.5 * acc
    return out


def riemann(const double[:, :, ::1] gamma, const double[:, :, :, ::1] dgamma):
    cdef Py_ssize_t n = gamma.shape[0]
    cdef Py_ssize_t a, b, i, j, c
    cdef double acc
    out = np.empty((n, n, n, n))
    cdef double[:, :, :, ::1] o = out
    for a in range(n):
        for b in range(n):
            for i in range(n):
                for j in range(n):
                    acc = dgamma[a, b, j, i] - dgamma[a, b, i, j]
                    for c in range(n):
                        acc += gamma[a, c, i] * gamma[c, b, j] - gamma[a, c, j] * gamma[c, b, i]
                    o[a, b, i, j] = acc
    return out


def quadratic(const double[:, :, ::1] gamma, const double[::1] u, const double[::1] w):
    cdef Py_ssize_t n = gamma.shape[0]
    cdef Py_ssize_t k, i, j
    cdef double acc, ui
    out = np.empty(n)
    cdef double[::1] o = out
    for k in range(n):
        acc = 0.0
        for i in range(n):
            ui = u[i]
            for j in range(n):
                acc += gamma[k, i, j] * ui * w[j]
        o[k] = acc
    return out


def poly_value(const double[::1] c0, const double[:, ::1] c1, const double[:, :, ::1] c2,
               const double[:, :, :, ::1] c3, const double[::1] x):
    cdef Py_ssize_t m = c1.shape[0], n = c1.shape[1]
    cdef Py_ssize_t q, i, j, k
    cdef double acc, s2, s3, t
    out = np.empty(m)
    cdef double[::1] o = out
    for q in range(m):
        acc = c0[q]
        s2 = 0.0
        s3 = 0.0
        for i in range(n):
            acc += c1[q, i] * x[i]
            for j in range(n):
                s2 += c2[q, i, j] * x[i] * x[j]
                t = 0.0
                for k in range(n):
                    t += c3[q, i, j, k] * x[k]
                s3 += t * x[i] * x[j]
        o[q] = acc + 0.5 * s2 + s3 / 6.0
    return out


def poly_grad(const double[::1] c0, const double[:, ::1] c1, const double[:, :, ::1] c2,
              const double[:, :, :, ::1] c3, const double[::1] x):
    cdef Py_ssize_t m = c1.shape[0], n = c1.shape[1]
    cdef Py_ssize_t q, i, j, k
    cdef double acc, t
    out = np.empty((m, n))
    cdef double[:, ::1] o = out
    for q in range(m):
        for i in range(n):
            acc = c1[q, i]
            for j in range(n):
                acc += c2[q, i, j] * x[j]
                t = 0.0
                for k in range(n):
                    t += c3[q, i, j, k] * x[k]
                acc += 0.5 * t * x[j]
            o[q, i] = acc
    return out


def poly_hess(const double[::1] c0, const double[:, ::1] c1, const double[:, :, ::1] c2,
              const double[:, :, :, ::1] c3, const double[::1] x):
    cdef Py_ssize_t m = c1.shape[0], n = c1.shape[1]
    cdef Py_ssize_t q, i, j, k
    cdef double acc
    out = np.empty((m, n, n))
    cdef double[:, :, ::1] o = out
    for q in range(m):
        for i in range(n):
            for j in range(n):
                acc = c2[q, i, j]
                for k in range(n):
                    acc += c3[q, i, j, k] * x[k]
                o[q, i, j] = acc
    return out
