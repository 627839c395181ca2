"""Osculating elements of Chebyshev systems, with trigonometric polynomials as
the main case.

An osculant of ``f`` at ``t`` is the combination ``sum c_i f_i`` whose first
``N - 1`` derivatives at ``t`` agree with those of ``f``; it exists wherever
the Wronskian of the basis is nonzero.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from ._pairs import compare_all_pairs
from .errors import PreconditionError, SingularSystem
from .expr import as_expr, jet_at, parse, to_text, univariate_array, value_at
from .report import VerificationReport
from .roots import find_roots

WRONSKIAN_TOL = 1e-10
WRONSKIAN_GRID = 256
RESIDUAL_TOL = 1e-9
HYPER_MARGIN = 1e-8
GAP_FLOOR = 1e-12


@dataclass(frozen=True)
class ChebSystem:
    basis: tuple
    domain: tuple
    trig_degree: int | None = None
    min_abs_wronskian: float = field(default=float("nan"), compare=False)

    @property
    def N(self):
        return len(self.basis)

    def labels(self):
        return [to_text(b) for b in self.basis]

    def taylor_matrix(self, t, order=None):
        """``C[j, i] = f_i^(j)(t) / j!`` for ``j = 0..order`` (default ``N - 1``)."""
        K = self.N - 1 if order is None else order
        return np.array([jet_at(b, t, K).coeffs for b in self.basis]).T

    def evaluate(self, coeffs, xs):
        xs = np.asarray(xs, dtype=float)
        return sum(c * univariate_array(b, xs) for c, b in zip(coeffs, self.basis))


def cheb_system(basis, domain, trig_degree=None, check=True):
    """Build a system from expressions (or strings), checking its Wronskian on
    a uniform grid of the domain."""
    basis = tuple(as_expr(b) for b in basis)
    lo, hi = map(float, domain)
    sys = ChebSystem(basis, (lo, hi), trig_degree)
    if check:
        ws = np.array([abs(wronskian(sys, t)) for t in np.linspace(lo, hi, WRONSKIAN_GRID)])
        if ws.min() < WRONSKIAN_TOL:
            raise SingularSystem(f"Wronskian {ws.min():.3e} below {WRONSKIAN_TOL:g} on the domain")
        sys = ChebSystem(basis, (lo, hi), trig_degree, float(ws.min()))
    return sys


def trig_basis(n):
    """``1, cos x, sin x, ..., cos nx, sin nx`` on ``[0, 2 pi]``."""
    if n < 1:
        raise ValueError("trigonometric degree must be >= 1")
    texts = ["1"]
    for k in range(1, n + 1):
        texts += ["cos(x)", "sin(x)"] if k == 1 else [f"cos({k}*x)", f"sin({k}*x)"]
    return cheb_system([parse(t) for t in texts], (0.0, 2 * math.pi), trig_degree=n)


def wronskian(sys, t):
    C = sys.taylor_matrix(t)
    scale = math.prod(math.factorial(j) for j in range(sys.N))
    return linalg.det(C) * scale


@dataclass(frozen=True)
class ChebOsculant:
    t: float
    coeffs: np.ndarray
    system: ChebSystem

    def __call__(self, x):
        out = self.system.evaluate(self.coeffs, x)
        return out if np.ndim(out) else float(out)

    def jet(self, t, K):
        return sum(c * jet_at(b, t, K) for c, b in zip(self.coeffs, self.system.basis))

    def trig_form(self):
        """``(c, [a_1..a_n], [b_1..b_n])`` for trigonometric systems."""
        if self.system.trig_degree is None:
            raise ValueError("not a trigonometric system")
        return float(self.coeffs[0]), self.coeffs[1::2].copy(), self.coeffs[2::2].copy()


def osculating_element(sys, f, t):
    f = as_expr(f)
    C = sys.taylor_matrix(t)
    rhs = jet_at(f, t, sys.N - 1).coeffs
    coeffs = linalg.lu_solve(C, rhs)
    resid = np.linalg.norm(C @ coeffs - rhs)
    if resid > RESIDUAL_TOL * max(np.linalg.norm(rhs), 1e-300):
        if np.linalg.norm(rhs) > 0:
            raise SingularSystem(f"residual {resid:.3e} too large at t={t}")
    return ChebOsculant(float(t), coeffs, sys)


def annihilator_coefficients(n):
    """Integers ``alpha_k`` with ``d (d^2+1)(d^2+4)...(d^2+n^2) = sum alpha_k d^(2k+1)``."""
    poly = [1]
    for i in range(1, n + 1):
        # multiply by (u + i^2), u = d^2
        nxt = [0] * (len(poly) + 1)
        for k, a in enumerate(poly):
            nxt[k] += a * i * i
            nxt[k + 1] += a
        poly = nxt
    return poly


def apply_D(f, n, t):
    """The trigonometric annihilator of degree ``n`` applied to ``f`` at ``t``."""
    alpha = annihilator_coefficients(n)
    jet = jet_at(f, t, 2 * n + 1)
    return float(sum(a * jet.derivative(2 * k + 1) for k, a in enumerate(alpha)))


def find_flexes(f, n, interval):
    f = as_expr(f)
    lo, hi = interval
    return find_roots(lambda t: apply_D(f, n, t), lo, hi)


def osculation_mismatch(sys, f, t):
    """``f^(N)(t) - g_t^(N)(t)``: zero exactly where the osculant hyper-osculates."""
    g = osculating_element(sys, f, t)
    N = sys.N
    return jet_at(f, t, N).derivative(N) - g.jet(t, N).derivative(N)


def _fmt(v):
    return f"{round(v, 9) + 0.0:.9g}"


def _coeff_rate(sys, f, t, h):
    """d/dt of the osculant coefficients by central differences with one
    Richardson step."""
    def central(step):
        return (osculating_element(sys, f, t + step).coeffs
                - osculating_element(sys, f, t - step).coeffs) / (2 * step)
    return (4 * central(h / 2) - central(h)) / 3


def verify_disjoint_cheb(sys, f, interval, window, t_samples=64, x_samples=401,
                         margin=HYPER_MARGIN, gap_floor=GAP_FLOOR, h=1e-3, order_tol=1e-6):
    """Pairwise disjointness of the osculants of ``f`` for parameters in ``interval``.

    Also checks the mechanism behind it: the ``t``-derivative of the osculant
    vanishes to order ``N - 1`` at ``t`` and nowhere else on the window.
    """
    f = as_expr(f)
    lo, hi = map(float, interval)
    ts = np.linspace(lo, hi, t_samples)
    N = sys.N
    trig = sys.trig_degree is not None
    rep = VerificationReport(theorem="trig" if trig else "chebyshev", family="cheb_family")
    rep.params = {"f": to_text(f), "basis": sys.labels(), "interval": [lo, hi],
                  "window": [float(window[0]), float(window[1])], "t_samples": t_samples,
                  "x_samples": x_samples}
    rep.tolerances = {"hyper_margin": margin, "gap_floor": gap_floor, "fd_step": h,
                      "order_tol": order_tol, "residual_tol": RESIDUAL_TOL,
                      "pivot_tol": linalg.PIVOT_TOL}

    if trig:
        n = sys.trig_degree
        hyper = lambda t: apply_D(f, n, t)  # noqa: E731
        kind = "flex"
    else:
        hyper = lambda t: osculation_mismatch(sys, f, t)  # noqa: E731
        kind = "hyper-osculation point"
    roots = find_roots(hyper, lo, hi)
    if roots.degenerate:
        raise PreconditionError("osculants hyper-osculate everywhere on the interval")
    if roots:
        where = ", ".join(f"t={_fmt(r)}" for r in roots)
        raise PreconditionError(f"{kind} at {where} inside interval")
    hv = np.array([hyper(t) for t in ts])
    if np.min(np.abs(hv)) < margin:
        raise PreconditionError(f"hyper-osculation margin {np.min(np.abs(hv)):.3e} below {margin:g}")
    rep.grid = {"t": ts.tolist(), "root_scan": roots.params()}
    rep.checks["min_abs_hyper"] = float(np.min(np.abs(hv)))

    if trig:
        probe = np.linspace(lo, hi, 5)
        drift = max(abs(value_at(f, x + 2 * math.pi) - value_at(f, x)) for x in probe)
        scale = 1.0 + max(abs(value_at(f, x)) for x in probe)
        periodic = drift <= 1e-9 * scale
        rep.checks["periodic"] = bool(periodic)
        if not periodic:
            rep.notes.append("f is not 2*pi-periodic; osculants compared on the stated window only")

    osc = [osculating_element(sys, f, t) for t in ts]
    xs = np.linspace(window[0], window[1], x_samples)
    compare_all_pairs(rep, ts, osc, xs, gap_floor)

    # the derivative of the family in t
    min_order = None
    stray = 0
    spacing = xs[1] - xs[0]
    for t, hval in zip(ts, hv):
        rate = _coeff_rate(sys, f, t, h)
        jet = sum(c * jet_at(b, t, N - 1) for c, b in zip(rate, sys.basis))
        mags = np.abs(jet.coeffs)
        order = int(np.argmax(mags > order_tol * mags.max())) if mags.max() > 0 else N
        min_order = order if min_order is None else min(min_order, order)
        vals = sys.evaluate(rate, xs)
        away = np.abs(xs - t) > 2 * spacing
        expected = np.sign(hval) * np.sign(xs - t) ** (N - 1)
        stray += int(np.sum(away & (np.sign(vals) != expected)))
    rep.checks["family_rate_zero_order"] = min_order
    rep.checks["family_rate_zero_order_expected"] = N - 1
    rep.checks["family_rate_stray_zeros"] = stray
    rep.finalize()
    if rep.verdict == "disjoint" and (min_order < N - 1 or stray):
        rep.verdict = "inconclusive"
        rep.notes.append("pairwise gaps positive but the family-rate cross-check failed")
    return rep
