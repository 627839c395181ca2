"""Pairwise comparison of sampled graph families (shared by the polynomial,
Chebyshev and fractional-linear checks)."""

import numpy as np


def pair_verdict(diff, floor):
    """Classify samples of ``g_a - g_b`` on one continuous stretch."""
    pos, neg = diff > floor, diff < -floor
    if pos.any() and neg.any():
        return "intersecting"
    if pos.all() or neg.all():
        return "disjoint"
    return "inconclusive"


def bisect_x(func, a, b, tol=1e-12):
    fa = func(a)
    for _ in range(200):
        if b - a <= tol:
            break
        m = 0.5 * (a + b)
        fm = func(m)
        if (fm < 0) == (fa < 0):
            a, fa = m, fm
        else:
            b = m
    return 0.5 * (a + b)


def crossing_witness(ga, gb, xs, diff):
    """Refine the first sign change of ``diff`` to a point on both graphs."""
    k = int(np.nonzero(np.sign(diff[:-1]) * np.sign(diff[1:]) < 0)[0][0])
    x = bisect_x(lambda u: ga(u) - gb(u), xs[k], xs[k + 1])
    return [x, float(ga(x))]


def compare_all_pairs(rep, ts, funcs, xs, gap_floor):
    """Fill ``rep.pairs`` comparing every ``funcs[i]`` with ``funcs[j]``, i < j,
    on the common grid ``xs``."""
    G = np.array([g(xs) for g in funcs])
    floor = gap_floor * (1.0 + np.max(np.abs(G)))
    for i in range(len(ts)):
        for j in range(i + 1, len(ts)):
            diff = G[i] - G[j]
            verdict = pair_verdict(diff, floor)
            w = crossing_witness(funcs[i], funcs[j], xs, diff) if verdict == "intersecting" else None
            rep.add_pair(ts[i], ts[j], np.min(np.abs(diff)), verdict, w)
    return G
