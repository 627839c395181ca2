"""Pure-Python/numpy implementations of the hot kernels.

Mirrors ``_kernels.pyx`` function for function. Series arguments are float64
arrays of truncated Taylor coefficients; every function returns a new array
of the same length. Domain checks are the caller's job.
"""

import numpy as np


def series_mul(a, b):
    n = a.shape[0]
    return np.convolve(a, b)[:n].copy()


def series_div(a, b):
    n = a.shape[0]
    c = np.empty(n)
    b0 = b[0]
    for k in range(n):
        acc = a[k]
        if k:
            acc -= np.dot(b[1:k + 1], c[k - 1::-1])
        c[k] = acc / b0
    return c


def series_exp(a):
    n = a.shape[0]
    e = np.empty(n)
    e[0] = np.exp(a[0])
    ja = np.arange(n) * a
    for k in range(1, n):
        e[k] = np.dot(ja[1:k + 1], e[k - 1::-1]) / k
    return e


def series_log(a):
    n = a.shape[0]
    out = np.empty(n)
    out[0] = np.log(a[0])
    a0 = a[0]
    for k in range(1, n):
        acc = 0.0
        if k > 1:
            j = np.arange(1, k)
            acc = np.dot(j * out[1:k], a[k - 1:0:-1]) / k
        out[k] = (a[k] - acc) / a0
    return out


def series_sincos(a):
    n = a.shape[0]
    s = np.empty(n)
    c = np.empty(n)
    s[0] = np.sin(a[0])
    c[0] = np.cos(a[0])
    ja = np.arange(n) * a
    for k in range(1, n):
        s[k] = np.dot(ja[1:k + 1], c[k - 1::-1]) / k
        c[k] = -np.dot(ja[1:k + 1], s[k - 1::-1]) / k
    return s, c


def series_sqrt(a):
    n = a.shape[0]
    r = np.empty(n)
    r[0] = np.sqrt(a[0])
    for k in range(1, n):
        acc = np.dot(r[1:k], r[k - 1:0:-1]) if k > 1 else 0.0
        r[k] = (a[k] - acc) / (2.0 * r[0])
    return r


def ms_segments(values):
    """Marching-squares cell pass over a (ny+1, nx+1) grid of samples.

    Returns an (m, 2) int64 array of edge-id pairs, one row per contour
    segment. Horizontal edge (j, i)-(j, i+1) has id ``j*nx + i``; vertical
    edge (j, i)-(j+1, i) has id ``(ny+1)*nx + j*(nx+1) + i``. Saddles are
    resolved with the mean of the four corners.
    """
    v = np.asarray(values, dtype=float)
    ny, nx = v.shape[0] - 1, v.shape[1] - 1
    pos = v > 0
    p00, p10 = pos[:-1, :-1], pos[:-1, 1:]
    p11, p01 = pos[1:, 1:], pos[1:, :-1]
    jj, ii = np.mgrid[0:ny, 0:nx]
    hoff = (ny + 1) * nx
    bottom = jj * nx + ii
    top = (jj + 1) * nx + ii
    left = hoff + jj * (nx + 1) + ii
    right = left + 1
    # edge order: bottom, right, top, left
    flags = np.stack([p00 != p10, p10 != p11, p11 != p01, p01 != p00], axis=-1)
    ids = np.stack([bottom, right, top, left], axis=-1)
    count = flags.sum(axis=-1)

    two = count == 2
    f2 = flags[two]
    order = np.argsort(~f2, axis=-1, kind="stable")[:, :2]
    seg2 = np.take_along_axis(ids[two], order, axis=-1)

    four = count == 4
    if np.any(four):
        center = 0.25 * (v[:-1, :-1] + v[:-1, 1:] + v[1:, 1:] + v[1:, :-1])
        same = (center > 0)[four] == p00[four]
        i4 = ids[four]
        b, r, t, l = i4[:, 0], i4[:, 1], i4[:, 2], i4[:, 3]
        s1 = np.where(same[:, None], np.stack([b, r], -1), np.stack([l, b], -1))
        s2 = np.where(same[:, None], np.stack([t, l], -1), np.stack([r, t], -1))
        seg = np.concatenate([seg2, s1, s2])
    else:
        seg = seg2
    return np.ascontiguousarray(seg, dtype=np.int64)
