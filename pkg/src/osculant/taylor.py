"""Osculating Taylor polynomials of a function and the disjointness of their graphs."""

import math
from dataclasses import dataclass

import numpy as np

from ._pairs import compare_all_pairs, crossing_witness, pair_verdict
from .errors import PreconditionError
from .expr import as_expr, jet_at, to_text
from .report import VerificationReport
from .roots import find_roots

HYPER_MARGIN = 1e-8
GAP_FLOOR = 1e-12


@dataclass(frozen=True)
class TaylorOsculant:
    """``g_t(x) = sum_i c_i (x - t)^i`` with ``c_i = f^(i)(t) / i!``."""

    t: float
    n: int
    local_coeffs: np.ndarray

    def __call__(self, x):
        h = np.asarray(x, dtype=float) - self.t
        out = np.zeros_like(h)
        for c in self.local_coeffs[::-1]:
            out = out * h + c
        return out if out.ndim else float(out)

    def derivative_at(self, x, k):
        """k-th derivative of the osculant at ``x``."""
        c = self.local_coeffs
        if k > self.n:
            return 0.0
        d = np.array([c[i] * math.factorial(i) / math.factorial(i - k) for i in range(k, self.n + 1)])
        return float(np.polynomial.polynomial.polyval(x - self.t, d))

    def power_coeffs(self):
        """Coefficients in the monomial basis ``1, x, x^2, ...``."""
        out = np.zeros(self.n + 1)
        for i, c in enumerate(self.local_coeffs):
            for k in range(i + 1):
                out[k] += c * math.comb(i, k) * (-self.t) ** (i - k)
        return out


def osculating_polynomial(f, t, n):
    if n < 1:
        raise ValueError("degree must be >= 1")
    jet = jet_at(f, t, n)
    return TaylorOsculant(float(t), int(n), jet.coeffs.copy())


def family_derivative(f, t, n, x):
    """Rate of change in ``t`` of the osculant's value at ``x``.

    Only the top derivative survives when the sum is differentiated in ``t``:
    ``f^(n+1)(t) (x - t)^n / n!``.
    """
    top = jet_at(f, t, n + 1).derivative(n + 1)
    return top * (x - t) ** n / math.factorial(n)


def hyper_derivative(f, n):
    """``t -> f^(n+1)(t)``, whose zeros are the hyper-osculation points."""
    f = as_expr(f)
    return lambda t: jet_at(f, t, n + 1).derivative(n + 1)


def find_polynomial_vertices(f, interval, n):
    lo, hi = interval
    return find_roots(hyper_derivative(f, n), lo, hi)


def _fmt(v):
    return f"{round(v, 9) + 0.0:.9g}"


def _check_vertex_free(f, interval, n, ts, margin):
    roots = find_polynomial_vertices(f, interval, n)
    if roots.degenerate:
        raise PreconditionError(f"f^({n + 1}) vanishes identically on the interval")
    if roots:
        where = ", ".join(f"t={_fmt(r)}" for r in roots)
        raise PreconditionError(f"vertex at {where} inside interval")
    top = np.array([hyper_derivative(f, n)(t) for t in ts])
    if np.min(np.abs(top)) < margin:
        t_bad = ts[int(np.argmin(np.abs(top)))]
        raise PreconditionError(
            f"|f^({n + 1})| falls below margin {margin:g} at t={_fmt(t_bad)}")
    return roots, top


def verify_disjoint_graphs(f, interval, n, t_samples=64, window=None, x_samples=401,
                           x_max=None, margin=HYPER_MARGIN, gap_floor=GAP_FLOOR):
    """Check pairwise disjointness of sampled osculating polynomials of ``f``.

    Even ``n``: graphs compared over ``window`` (default: the interval widened
    by its length plus one on each side). Odd ``n``: each pair ``a < b`` is
    compared on ``[b, x_max]`` only, ``x_max`` defaulting to
    ``b + 2*len(interval) + 1``.
    """
    f = as_expr(f)
    lo, hi = map(float, interval)
    if not lo < hi:
        raise ValueError("interval must satisfy lo < hi")
    length = hi - lo
    ts = np.linspace(lo, hi, t_samples)
    roots, top = _check_vertex_free(f, (lo, hi), n, ts, margin)
    sign = float(np.sign(top[0]))
    osc = [osculating_polynomial(f, t, n) for t in ts]
    even = n % 2 == 0

    rep = VerificationReport(theorem="taylor" if even else "taylor-odd", family="graph_family")
    rep.params = {"f": to_text(f), "interval": [lo, hi], "n": n, "t_samples": t_samples,
                  "x_samples": x_samples}
    rep.grid = {"t": ts.tolist(), "root_scan": roots.params()}
    rep.tolerances = {"hyper_margin": margin, "gap_floor": gap_floor}
    rep.checks["min_abs_hyper_derivative"] = float(np.min(np.abs(top)))

    if even:
        if window is None:
            window = (lo - length - 1.0, hi + length + 1.0)
        xs = np.linspace(window[0], window[1], x_samples)
        rep.params["window"] = [float(window[0]), float(window[1])]
        compare_all_pairs(rep, ts, osc, xs, gap_floor)
        mono_xs = xs
    else:
        rep.params["x_max"] = None if x_max is None else float(x_max)
        rep.params["x_max_rule"] = "b + 2*len(interval) + 1" if x_max is None else "fixed"
        for j in range(1, t_samples):
            b = ts[j]
            right = x_max if x_max is not None else b + 2 * length + 1.0
            xs = np.linspace(b, right, x_samples)
            Gb = osc[j](xs)
            for i in range(j):
                Ga = osc[i](xs)
                diff = Ga - Gb
                floor = gap_floor * (1.0 + max(np.max(np.abs(Ga)), np.max(np.abs(Gb))))
                verdict = pair_verdict(diff, floor)
                w = crossing_witness(osc[i], osc[j], xs, diff) if verdict == "intersecting" else None
                rep.add_pair(ts[i], b, np.min(np.abs(diff)), verdict, w, window=[float(b), float(right)])
        right = x_max if x_max is not None else hi + 2 * length + 1.0
        mono_xs = np.linspace(lo, right, x_samples)

    rep.checks.update(_monotonicity(osc, ts, mono_xs, n, sign, gap_floor))
    rep.finalize()
    if rep.verdict == "disjoint" and not rep.checks["monotone_in_t"]:
        rep.verdict = "inconclusive"
        rep.notes.append("pairwise gaps positive but monotonicity cross-check failed")
    return rep


def _monotonicity(osc, ts, xs, n, sign, gap_floor):
    """For x outside [t_k, t_k+1], g_t(x) must move in the direction of
    sign(f^(n+1)) * sign((x - t)^n)."""
    G = np.array([g(xs) for g in osc])
    step = G[1:] - G[:-1]
    floor = gap_floor * (1.0 + np.max(np.abs(G)))
    right = xs[None, :] > ts[1:, None]
    left = xs[None, :] < ts[:-1, None]
    expected = np.where(right, sign, sign * (1.0 if n % 2 == 0 else -1.0))
    mask = right | left
    resolved = mask & (np.abs(step) > floor)
    wrong = resolved & (np.sign(step) != expected)
    return {
        "monotone_in_t": bool(not wrong.any()),
        "monotone_checked": int(resolved.sum()),
        "monotone_unresolved": int((mask & ~resolved).sum()),
        "monotone_violations": int(wrong.sum()),
    }
