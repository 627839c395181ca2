"""Dense Gaussian elimination with partial pivoting for the small (N <= 25)
systems used by the Chebyshev-system osculants."""

import numpy as np

from .errors import SingularSystem

PIVOT_TOL = 1e-12


def lu_factor(A, pivot_tol=PIVOT_TOL):
    """Return ``(LU, perm, sign)``; raises :class:`SingularSystem` on a tiny pivot.

    The pivot test is relative to the largest entry of ``A``.
    """
    LU = np.array(A, dtype=float)
    n = LU.shape[0]
    if LU.shape != (n, n):
        raise ValueError("square matrix required")
    scale = np.max(np.abs(LU)) if LU.size else 1.0
    perm = np.arange(n)
    sign = 1.0
    for k in range(n):
        p = k + int(np.argmax(np.abs(LU[k:, k])))
        if abs(LU[p, k]) <= pivot_tol * scale:
            raise SingularSystem(f"pivot {LU[p, k]:.3e} below {pivot_tol:g} (relative) in column {k}")
        if p != k:
            LU[[k, p]] = LU[[p, k]]
            perm[[k, p]] = perm[[p, k]]
            sign = -sign
        LU[k + 1:, k] /= LU[k, k]
        LU[k + 1:, k + 1:] -= np.outer(LU[k + 1:, k], LU[k, k + 1:])
    return LU, perm, sign


def lu_solve(A, b, pivot_tol=PIVOT_TOL):
    LU, perm, _ = lu_factor(A, pivot_tol)
    n = LU.shape[0]
    y = np.array(b, dtype=float)[perm]
    for i in range(n):
        y[i] -= LU[i, :i] @ y[:i]
    for i in range(n - 1, -1, -1):
        y[i] = (y[i] - LU[i, i + 1:] @ y[i + 1:]) / LU[i, i]
    return y


def det(A):
    try:
        LU, _, sign = lu_factor(A, pivot_tol=0.0)
    except SingularSystem:
        return 0.0
    return float(sign * np.prod(np.diag(LU)))
