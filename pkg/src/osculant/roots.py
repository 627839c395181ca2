"""One-dimensional root isolation: sign changes on a uniform grid, refined by
bisection, plus near-zero plateaus for even-multiplicity roots."""

import math

import numpy as np

GRID = 512
XTOL = 1e-10
PLATEAU_TOL = 1e-9


class RootList(list):
    """Sorted roots with scan metadata.

    ``flagged`` holds roots found only as near-zero plateaus (no sign change);
    ``degenerate`` is set when the function is below the plateau tolerance on
    the whole grid, in which case the list itself is empty.
    """

    def __init__(self, roots=(), flagged=(), degenerate=False, grid=GRID, xtol=XTOL,
                 plateau_tol=PLATEAU_TOL):
        super().__init__(roots)
        self.flagged = list(flagged)
        self.degenerate = degenerate
        self.grid = grid
        self.xtol = xtol
        self.plateau_tol = plateau_tol

    def params(self):
        return {"grid": self.grid, "xtol": self.xtol, "plateau_tol": self.plateau_tol}


def bisect(func, a, b, fa=None, xtol=XTOL, maxiter=200):
    """Root of ``func`` in the sign-change bracket ``[a, b]``."""
    if fa is None:
        fa = func(a)
    for _ in range(maxiter):
        if b - a <= xtol:
            break
        m = 0.5 * (a + b)
        fm = func(m)
        if fm == 0.0:
            return m
        if (fm < 0) == (fa < 0):
            a, fa = m, fm
        else:
            b = m
    return 0.5 * (a + b)


def _golden_min(func, a, b, xtol):
    invphi = (math.sqrt(5) - 1) / 2
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = abs(func(c)), abs(func(d))
    while b - a > xtol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = abs(func(c))
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = abs(func(d))
    return 0.5 * (a + b)


def find_roots(func, lo, hi, grid=GRID, xtol=XTOL, plateau_tol=PLATEAU_TOL):
    """All roots of the scalar function ``func`` on ``[lo, hi]``."""
    if not lo < hi:
        raise ValueError(f"empty interval [{lo}, {hi}]")
    xs = np.linspace(lo, hi, grid)
    vs = np.array([func(x) for x in xs], dtype=float)
    near = np.abs(vs) < plateau_tol
    if near.all():
        return RootList(degenerate=True, grid=grid, xtol=xtol, plateau_tol=plateau_tol)

    roots = []
    claimed = np.zeros(grid, dtype=bool)
    for i in range(grid):
        if vs[i] == 0.0:
            roots.append(float(xs[i]))
            claimed[i] = True
        elif i + 1 < grid and vs[i] * vs[i + 1] < 0:
            roots.append(bisect(func, xs[i], xs[i + 1], vs[i], xtol))
            claimed[i] = claimed[i + 1] = True

    flagged = []
    i = 0
    while i < grid:
        if not near[i]:
            i += 1
            continue
        j = i
        while j + 1 < grid and near[j + 1]:
            j += 1
        if not claimed[i:j + 1].any():
            m = i + int(np.argmin(np.abs(vs[i:j + 1])))
            r = _golden_min(func, xs[max(m - 1, 0)], xs[min(m + 1, grid - 1)], xtol)
            flagged.append(r)
        i = j + 1

    merged = []
    for r in sorted(roots + flagged):
        if merged and r - merged[-1] <= 10 * xtol:
            continue
        merged.append(r)
    return RootList([float(r) for r in merged], [float(r) for r in flagged], False, grid, xtol, plateau_tol)
