# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels: truncated power-series recurrences and the marching-squares
cell pass. Same signatures and results as ``_pykernels``."""

import numpy as np
cimport numpy as cnp
from libc.math cimport exp, log, sin, cos, sqrt

cnp.import_array()


def series_mul(const double[::1] a, const double[::1] b):
    cdef Py_ssize_t n = a.shape[0], k, j
    cdef double acc
    out = np.empty(n)
    cdef double[::1] c = out
    for k in range(n):
        acc = 0.0
        for j in range(k + 1):
            acc += a[j] * b[k - j]
        c[k] = acc
    return out


def series_div(const double[::1] a, const double[::1] b):
    cdef Py_ssize_t n = a.shape[0], k, j
    cdef double acc, b0 = b[0]
    out = np.empty(n)
    cdef double[::1] c = out
    for k in range(n):
        acc = a[k]
        for j in range(1, k + 1):
            acc -= b[j] * c[k - j]
        c[k] = acc / b0
    return out


def series_exp(const double[::1] a):
    cdef Py_ssize_t n = a.shape[0], k, j
    cdef double acc
    out = np.empty(n)
    cdef double[::1] e = out
    e[0] = exp(a[0])
    for k in range(1, n):
        acc = 0.0
        for j in range(1, k + 1):
            acc += j * a[j] * e[k - j]
        e[k] = acc / k
    return out


def series_log(const double[::1] a):
    cdef Py_ssize_t n = a.shape[0], k, j
    cdef double acc, a0 = a[0]
    out = np.empty(n)
    cdef double[::1] r = out
    r[0] = log(a0)
    for k in range(1, n):
        acc = 0.0
        for j in range(1, k):
            acc += j * r[j] * a[k - j]
        r[k] = (a[k] - acc / k) / a0
    return out


def series_sincos(const double[::1] a):
    cdef Py_ssize_t n = a.shape[0], k, j
    cdef double accs, accc, ja
    s_out = np.empty(n)
    c_out = np.empty(n)
    cdef double[::1] s = s_out
    cdef double[::1] c = c_out
    s[0] = sin(a[0])
    c[0] = cos(a[0])
    for k in range(1, n):
        accs = 0.0
        accc = 0.0
        for j in range(1, k + 1):
            ja = j * a[j]
            accs += ja * c[k - j]
            accc += ja * s[k - j]
        s[k] = accs / k
        c[k] = -accc / k
    return s_out, c_out


def series_sqrt(const double[::1] a):
    cdef Py_ssize_t n = a.shape[0], k, j
    cdef double acc, r0
    out = np.empty(n)
    cdef double[::1] r = out
    r0 = sqrt(a[0])
    r[0] = r0
    for k in range(1, n):
        acc = 0.0
        for j in range(1, k):
            acc += r[j] * r[k - j]
        r[k] = (a[k] - acc) / (2.0 * r0)
    return out


def ms_segments(values):
    cdef double[:, ::1] v = np.ascontiguousarray(values, dtype=np.float64)
    cdef Py_ssize_t ny = v.shape[0] - 1, nx = v.shape[1] - 1
    cdef Py_ssize_t j, i, m = 0, hoff = (ny + 1) * nx
    cdef long long eb, er, et, el
    cdef bint p00, p10, p11, p01, cb, cr, ct, cl
    cdef int cnt
    cdef long long e[4]
    cdef double center
    out = np.empty((max(2 * ny * nx, 1), 2), dtype=np.int64)
    cdef long long[:, ::1] seg = out
    for j in range(ny):
        for i in range(nx):
            p00 = v[j, i] > 0
            p10 = v[j, i + 1] > 0
            p11 = v[j + 1, i + 1] > 0
            p01 = v[j + 1, i] > 0
            cb = p00 != p10
            cr = p10 != p11
            ct = p11 != p01
            cl = p01 != p00
            cnt = cb + cr + ct + cl
            if cnt == 0:
                continue
            eb = j * nx + i
            et = (j + 1) * nx + i
            el = hoff + j * (nx + 1) + i
            er = el + 1
            if cnt == 2:
                cnt = 0
                if cb:
                    e[cnt] = eb
                    cnt += 1
                if cr:
                    e[cnt] = er
                    cnt += 1
                if ct:
                    e[cnt] = et
                    cnt += 1
                if cl:
                    e[cnt] = el
                    cnt += 1
                seg[m, 0] = e[0]
                seg[m, 1] = e[1]
                m += 1
            else:
                center = 0.25 * (v[j, i] + v[j, i + 1] + v[j + 1, i + 1] + v[j + 1, i])
                if (center > 0) == p00:
                    seg[m, 0] = eb
                    seg[m, 1] = er
                    seg[m + 1, 0] = et
                    seg[m + 1, 1] = el
                else:
                    seg[m, 0] = el
                    seg[m, 1] = eb
                    seg[m + 1, 0] = er
                    seg[m + 1, 1] = et
                m += 2
    return out[:m].copy()
