"""Osculating algebraic curves (lines, conics, cubics, quartics), osculating
circles and fractional-linear maps, and the points where they hyper-osculate.

Algebraic curves of degree ``d`` are coefficient vectors over the monomials
``x^a y^b`` (``a + b <= d``) in graded-lexicographic order
``1, x, y, x^2, xy, y^2, x^3, ...``.
"""

import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import jet as J
from .errors import (CriticalPoint, DegenerateCurve, PreconditionError, RankDeficient,
                     ZeroCurvature)
from .expr import Binary, Const, Unary, Var, as_expr, jet_at
from .roots import find_roots

RANK_TOL = 1e-8
EXTACTIC_TOL = 1e-8
GRADIENT_TOL = 1e-8
SIGN_TOL = 1e-10
CURVATURE_TOL = 1e-10
CONIC_TOL = 1e-10


def n_conditions(d):
    """Dimension of the space of degree-``d`` curves: ``d(d+3)/2``."""
    return d * (d + 3) // 2


def monomials(d):
    return [(a, deg - a) for deg in range(d + 1) for a in range(deg, -1, -1)]


def normalize(coeffs, sign_tol=SIGN_TOL):
    """Unit Euclidean norm, first coefficient above ``sign_tol`` positive."""
    c = np.asarray(coeffs, dtype=float)
    nrm = np.linalg.norm(c)
    if nrm == 0:
        raise DegenerateCurve("zero polynomial")
    c = c / nrm
    big = np.nonzero(np.abs(c) > sign_tol)[0]
    if big.size and c[big[0]] < 0:
        c = -c
    return c


@dataclass(frozen=True)
class AlgebraicCurve:
    degree: int
    coeffs: np.ndarray
    tangency: tuple | None = None
    residual: float | None = field(default=None, compare=False)

    def __post_init__(self):
        if not 1 <= self.degree <= 4:
            raise ValueError("degree must be between 1 and 4")
        if len(self.coeffs) != len(monomials(self.degree)):
            raise ValueError(f"degree {self.degree} needs {len(monomials(self.degree))} coefficients")
        c = normalize(self.coeffs)
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)
        if self.tangency is not None:
            g = self.gradient(*self.tangency)
            if np.hypot(*g) < GRADIENT_TOL:
                raise DegenerateCurve(f"singular at the tangency point {self.tangency}")

    @classmethod
    def from_expr(cls, text, degree=None):
        """Expand a polynomial expression in ``x`` and ``y``."""
        poly = _expand(as_expr(text))
        d = max((a + b for (a, b), c in poly.items() if c != 0), default=0)
        degree = degree or d
        if d > degree or degree < 1:
            raise ValueError(f"expression has degree {d}, need 1 <= degree <= 4")
        return cls(degree, [poly.get(m, 0.0) for m in monomials(degree)])

    @property
    def terms(self):
        return monomials(self.degree)

    def __call__(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        out = np.zeros(np.broadcast(x, y).shape)
        for c, (a, b) in zip(self.coeffs, self.terms):
            if c:
                out = out + c * x ** a * y ** b
        return out if out.ndim else float(out)

    def magnitude(self, x, y):
        """``sum |c| |x|^a |y|^b``, the natural scale for judging a value as zero."""
        x = np.abs(np.asarray(x, dtype=float))
        y = np.abs(np.asarray(y, dtype=float))
        out = np.zeros(np.broadcast(x, y).shape)
        for c, (a, b) in zip(self.coeffs, self.terms):
            out = out + abs(c) * x ** a * y ** b
        return out if out.ndim else float(out)

    def gradient(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        gx = np.zeros(np.broadcast(x, y).shape)
        gy = np.zeros_like(gx)
        for c, (a, b) in zip(self.coeffs, self.terms):
            if a:
                gx = gx + c * a * x ** (a - 1) * y ** b
            if b:
                gy = gy + c * b * x ** a * y ** (b - 1)
        return gx, gy

    def hessian(self, x, y):
        hxx = hxy = hyy = 0.0
        for c, (a, b) in zip(self.coeffs, self.terms):
            if a >= 2:
                hxx += c * a * (a - 1) * x ** (a - 2) * y ** b
            if a and b:
                hxy += c * a * b * x ** (a - 1) * y ** (b - 1)
            if b >= 2:
                hyy += c * b * (b - 1) * x ** a * y ** (b - 2)
        return hxx, hxy, hyy

    def along(self, X, Y):
        """Jet of the defining polynomial composed with coordinate jets."""
        total = J.jet_constant(0.0, X.base, X.order)
        xp = [J.jet_constant(1.0, X.base, X.order)]
        yp = [J.jet_constant(1.0, X.base, X.order)]
        for _ in range(self.degree):
            xp.append(xp[-1] * X)
            yp.append(yp[-1] * Y)
        for c, (a, b) in zip(self.coeffs, self.terms):
            total = total + c * (xp[a] * yp[b])
        return total

    def pullback(self, A, shift):
        """Curve ``{p : self(A p + shift) = 0}``."""
        A = np.asarray(A, dtype=float)
        P = _grid_coeffs(self)
        lin_x = {(0, 0): shift[0], (1, 0): A[0, 0], (0, 1): A[0, 1]}
        lin_y = {(0, 0): shift[1], (1, 0): A[1, 0], (0, 1): A[1, 1]}
        out = {}
        for (a, b), c in P.items():
            term = {(0, 0): c}
            for _ in range(a):
                term = _pmul(term, lin_x)
            for _ in range(b):
                term = _pmul(term, lin_y)
            for m, v in term.items():
                out[m] = out.get(m, 0.0) + v
        return AlgebraicCurve(self.degree, [out.get(m, 0.0) for m in self.terms])

    def conic_matrix(self):
        if self.degree != 2:
            raise ValueError("not a conic")
        F, D, E, A, B, C = self.coeffs
        return np.array([[A, B / 2, D / 2], [B / 2, C, E / 2], [D / 2, E / 2, F]])

    def to_dict(self):
        d = {"degree": self.degree, "coeffs": self.coeffs.tolist(),
             "monomials": [f"x^{a}*y^{b}" for a, b in self.terms]}
        if self.tangency is not None:
            d["tangency"] = [float(v) for v in self.tangency]
        if self.residual is not None:
            d["residual"] = float(self.residual)
        return d

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)

    def to_csv_row(self):
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerow([self.degree] + [repr(float(c)) for c in self.coeffs])
        return buf.getvalue()

    @classmethod
    def from_csv_row(cls, line):
        row = next(csv.reader([line]))
        return cls(int(row[0]), [float(v) for v in row[1:]])


def _grid_coeffs(curve):
    return {m: c for m, c in zip(curve.terms, curve.coeffs)}


def _pmul(p, q):
    out = {}
    for (a1, b1), c1 in p.items():
        for (a2, b2), c2 in q.items():
            k = (a1 + a2, b1 + b2)
            out[k] = out.get(k, 0.0) + c1 * c2
    return out


def _expand(e):
    """Expand a polynomial expression tree into ``{(a, b): coeff}``."""
    if isinstance(e, Const):
        return {(0, 0): e.value}
    if isinstance(e, Var):
        if e.name == "x":
            return {(1, 0): 1.0}
        if e.name == "y":
            return {(0, 1): 1.0}
        raise ValueError(f"polynomial may only use x and y, found {e.name!r}")
    if isinstance(e, Unary):
        if e.fn != "neg":
            raise ValueError(f"{e.fn} is not polynomial")
        return {k: -v for k, v in _expand(e.child).items()}
    left = _expand(e.left)
    if e.op == "^":
        right = _expand(e.right)
        if set(right) - {(0, 0)}:
            raise ValueError("exponent must be constant")
        p = right.get((0, 0), 0.0)
        if p < 0 or not float(p).is_integer():
            raise ValueError("exponent must be a nonnegative integer")
        out = {(0, 0): 1.0}
        for _ in range(int(p)):
            out = _pmul(out, left)
        return out
    right = _expand(e.right)
    if e.op == "*":
        return _pmul(left, right)
    if e.op == "/":
        if set(right) - {(0, 0)} or right.get((0, 0), 0.0) == 0:
            raise ValueError("can only divide by a nonzero constant")
        return {k: v / right[(0, 0)] for k, v in left.items()}
    sign = 1.0 if e.op == "+" else -1.0
    out = dict(left)
    for k, v in right.items():
        out[k] = out.get(k, 0.0) + sign * v
    return out


# -- osculating algebraic curves -------------------------------------------------

@dataclass(frozen=True)
class Frame:
    """Local coordinates ``X = scale (x - x0)``, ``Y = scale (y - y0)``."""

    origin: np.ndarray
    scale: float
    normal: np.ndarray  # curve normal in local coordinates


def _local_jets(curve, s, K):
    X, Y = curve.jets(s, max(K, 1))
    x0, y0 = X.value, Y.value
    speed = max(abs(X.coeffs[1]), abs(Y.coeffs[1]))
    if speed == 0:
        raise PreconditionError(f"curve is singular at s={s}")
    sigma = 1.0 / speed
    Xl = (X - x0) * sigma
    Yl = (Y - y0) * sigma
    normal = np.array([-Yl.coeffs[1], Xl.coeffs[1]])
    if K < 1:
        Xl, Yl = Xl.truncate(K), Yl.truncate(K)
    return Xl, Yl, Frame(np.array([x0, y0]), sigma, normal)


def _monomial_columns(X, Y, d):
    one = J.jet_constant(1.0, X.base, X.order)
    xp, yp = [one], [one]
    for _ in range(d):
        xp.append(xp[-1] * X)
        yp.append(yp[-1] * Y)
    return np.array([(xp[a] * yp[b]).coeffs for a, b in monomials(d)]).T


def _system(curve, s, d, rows):
    K = max(rows - 1, 0)
    X, Y, frame = _local_jets(curve, s, K)
    M = _monomial_columns(X, Y, d)[:rows]
    return M, frame


def condition_matrix(curve, s, d, rows):
    """``rows x (n(d)+1)`` matrix of Taylor coefficients (in ``s' - s``) of each
    monomial along the curve, in local coordinates centred at the curve point."""
    if rows < 0:
        raise ValueError("rows must be >= 0")
    if rows == 0:
        return np.zeros((0, len(monomials(d))))
    if rows > n_conditions(d) + 1:
        raise ValueError(f"at most n(d)+1 = {n_conditions(d) + 1} rows")
    M, _ = _system(curve, s, d, rows)
    return M


def _oriented_null_vector(M, frame, d):
    _, S, Vt = np.linalg.svd(M)
    if S[-1] < RANK_TOL * S[0]:
        raise RankDeficient(
            f"condition matrix rank-deficient (sigma_min/sigma_max = {S[-1] / S[0]:.2e}); "
            f"curve may be locally algebraic of degree < {d}")
    v = Vt[-1]
    # gradient of the local polynomial at the origin points along the normal
    grad = np.array([v[1], v[2]])
    if grad @ frame.normal < 0:
        v = -v
    return v, S


def _to_ambient(v, frame, d):
    x0, y0 = frame.origin
    sg = frame.scale
    px = [{(0, 0): 1.0}]
    py = [{(0, 0): 1.0}]
    lx = {(1, 0): sg, (0, 0): -sg * x0}
    ly = {(0, 1): sg, (0, 0): -sg * y0}
    for _ in range(d):
        px.append(_pmul(px[-1], lx))
        py.append(_pmul(py[-1], ly))
    out = {}
    for c, (a, b) in zip(v, monomials(d)):
        for m, val in _pmul(px[a], py[b]).items():
            out[m] = out.get(m, 0.0) + c * val
    return np.array([out.get(m, 0.0) for m in monomials(d)])


@dataclass(frozen=True)
class LocalOsculant:
    """Null vector of the condition matrix in the local frame, oriented so its
    gradient at the curve point follows the curve normal."""

    s: float
    degree: int
    vector: np.ndarray
    frame: Frame
    singular_values: np.ndarray


def local_osculant(curve, s, d):
    n = n_conditions(d)
    M, frame = _system(curve, s, d, n)
    v, S = _oriented_null_vector(M, frame, d)
    return LocalOsculant(float(s), d, v, frame, S)


def osculating_algebraic_curve(curve, s, d):
    """Degree-``d`` curve meeting ``curve`` to order ``n(d)`` at ``curve(s)``."""
    loc = local_osculant(curve, s, d)
    coeffs = _to_ambient(loc.vector, loc.frame, d)
    base = AlgebraicCurve(d, coeffs)
    X, Y = curve.jets(s, n_conditions(d))
    resid_jet = base.along(X, Y).coeffs[: n_conditions(d)]
    return AlgebraicCurve(d, base.coeffs, tangency=tuple(loc.frame.origin.tolist()),
                          residual=float(np.max(np.abs(resid_jet))))


def extactic_indicator(curve, s, d):
    """Order-``n(d)`` coefficient of the osculant along the curve.

    Zero exactly at the points where the osculant hyper-osculates; the sign is
    continuous in ``s`` because the osculant is oriented by the curve normal.
    """
    return extactic_detail(curve, s, d)[0]


def extactic_detail(curve, s, d):
    """``(indicator, threshold)`` where ``threshold`` is the zero band."""
    n = n_conditions(d)
    M, frame = _system(curve, s, d, n + 1)
    v, S = _oriented_null_vector(M[:n], frame, d)
    return float(M[n] @ v), EXTACTIC_TOL * float(S[0])


def is_locally_algebraic(curve, s, d, extra=2):
    """True when a single degree-``d`` curve matches ``n(d) + extra`` conditions."""
    n = n_conditions(d)
    X, Y, frame = _local_jets(curve, s, n + extra - 1)
    M = _monomial_columns(X, Y, d)
    S = np.linalg.svd(M, compute_uv=False)
    if M.shape[0] < M.shape[1]:
        return False
    return bool(S[-1] < RANK_TOL * S[0])


def find_extactic_points(curve, interval, d):
    lo, hi = interval
    return find_roots(lambda s: extactic_indicator(curve, s, d), lo, hi)


def classify_conic(c, tol=CONIC_TOL):
    if c.degree != 2:
        raise ValueError("classify_conic needs a degree-2 curve")
    M = c.conic_matrix()
    A, B, C = c.coeffs[3], c.coeffs[4], c.coeffs[5]
    if abs(np.linalg.det(M)) < tol:
        return "degenerate"
    disc = B * B - 4 * A * C
    if disc < -tol:
        # an ellipse with no real points is reported as degenerate
        if A * np.linalg.det(M) > 0:
            return "degenerate"
        return "ellipse"
    if disc > tol:
        return "hyperbola"
    return "parabola"


# -- circles ---------------------------------------------------------------------

@dataclass(frozen=True)
class OsculatingCircle:
    center: tuple
    radius: float
    curvature: float
    tangency: tuple
    s: float | None = None

    def to_dict(self):
        return {"center": list(self.center), "radius": self.radius, "curvature": self.curvature,
                "tangency": list(self.tangency), "s": self.s}


def osculating_circle(curve, s):
    X, Y = curve.jets(s, 2)
    x1, y1 = X.coeffs[1], Y.coeffs[1]
    x2, y2 = 2 * X.coeffs[2], 2 * Y.coeffs[2]
    speed = math.hypot(x1, y1)
    kappa = (x1 * y2 - y1 * x2) / speed ** 3
    if abs(kappa) < CURVATURE_TOL:
        raise ZeroCurvature(f"curvature {kappa:.3e} at s={s}: osculating circle is a line")
    nx, ny = -y1 / speed, x1 / speed
    cx, cy = X.value + nx / kappa, Y.value + ny / kappa
    return OsculatingCircle((float(cx), float(cy)), float(1 / abs(kappa)), float(kappa),
                            (X.value, Y.value), float(s))


def curvature(curve, s):
    return float(curve.curvature_jet(s, 0).value)


def find_vertices(curve, interval, grid=512):
    lo, hi = interval
    ks = np.array([curvature(curve, s) for s in np.linspace(lo, hi, grid)])
    if np.min(np.abs(ks)) < CURVATURE_TOL:
        s_bad = np.linspace(lo, hi, grid)[int(np.argmin(np.abs(ks)))]
        raise ZeroCurvature(f"curvature vanishes near s={s_bad:.6g}")
    return find_roots(lambda s: curve.curvature_jet(s, 1).derivative(1), lo, hi, grid=grid)


# -- fractional-linear maps ---------------------------------------------------------

def schwarzian(f, t):
    jet = jet_at(f, t, 3)
    f1, f2, f3 = jet.derivative(1), jet.derivative(2), jet.derivative(3)
    if abs(f1) < 1e-12:
        raise CriticalPoint(f"f'({t}) = {f1:.3e}: no fractional-linear osculant")
    r = f2 / f1
    return f3 / f1 - 1.5 * r * r


def find_schwarzian_zeros(f, interval):
    f = as_expr(f)
    lo, hi = interval
    return find_roots(lambda t: schwarzian(f, t), lo, hi)


@dataclass(frozen=True)
class MobiusOsculant:
    """``y = q + c / (x - p)``, or the line ``y = slope x + intercept``."""

    p: float | None
    q: float | None
    c: float | None
    is_line: bool = False
    slope: float | None = None
    intercept: float | None = None
    t: float | None = None

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if self.is_line:
            out = self.slope * x + self.intercept
        else:
            with np.errstate(divide="ignore", invalid="ignore"):
                out = self.q + self.c / (x - self.p)
        return out if out.ndim else float(out)

    def derivative(self, x, k):
        if self.is_line:
            return [self(x), self.slope][k] if k < 2 else 0.0
        return self.c * (-1) ** k * math.factorial(k) / (x - self.p) ** (k + 1) + (self.q if k == 0 else 0.0)

    def to_dict(self):
        return {"p": self.p, "q": self.q, "c": self.c, "is_line": self.is_line,
                "slope": self.slope, "intercept": self.intercept, "t": self.t}


def osculating_mobius(f, t, line_tol=1e-10):
    jet = jet_at(f, t, 2)
    f0, f1, f2 = jet.value, jet.derivative(1), jet.derivative(2)
    if abs(f1) < 1e-12:
        raise CriticalPoint(f"f'({t}) = {f1:.3e}: no fractional-linear osculant")
    if abs(f2) <= line_tol:
        return MobiusOsculant(None, None, 0.0, True, f1, f0 - f1 * t, float(t))
    p = t + 2 * f1 / f2
    c = -4 * f1 ** 3 / f2 ** 2
    q = f0 - c / (t - p)
    return MobiusOsculant(float(p), float(q), float(c), t=float(t))
