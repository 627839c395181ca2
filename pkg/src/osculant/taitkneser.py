"""Pairwise disjointness checks for osculating families (circles, conics, cubic
ovals, fractional-linear graphs), the intersecting quartic ovals, and
infinitesimal intersection multiplicities of one-parameter families."""

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import jet as J
from ._pairs import bisect_x
from .algebraic import (AlgebraicCurve, classify_conic, find_extactic_points, find_schwarzian_zeros,
                        find_vertices, is_locally_algebraic, monomials, n_conditions,
                        osculating_algebraic_curve, osculating_circle, osculating_mobius, schwarzian)
from .contour import trace_oval
from .errors import (Inconclusive, NoisyJet, NonpositiveRadius, NotAnEllipse, OpenComponent,
                     OsculantError, PoleOverlap, PreconditionError)
from .expr import as_expr, jet_at, to_text
from .report import VerificationReport

CIRCLE_TOL = 1e-12
OVAL_TOL = 1e-7
POLE_ZONE = 1e-3
POLE_TOL = 1e-9
FD_STEP = 1e-4
ORDER_TOL = 1e-6
NOISE_BAND = 10.0
CONIC_SAMPLES = 2048
# points sampled from a conic in closed form lie on it to rounding, so the
# band only has to cover coefficient error (about 1e-15)
CONIC_BAND = 1e-12
COMMON_ZERO_TOL = 1e-10
TRANSVERSAL_TOL = 1e-6


def _threads():
    try:
        return max(1, int(os.environ.get("OSCULANT_THREADS", "1")))
    except ValueError:
        return 1


def pmap(fn, items):
    """Order-preserving map, threaded when ``OSCULANT_THREADS`` > 1."""
    items = list(items)
    n = _threads()
    if n == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as ex:
        return list(ex.map(fn, items))


def _fmt(v):
    return f"{round(v, 9) + 0.0:.9g}"


# -- circles -----------------------------------------------------------------------

def _circle(c):
    if isinstance(c, tuple) and len(c) == 2:
        (cx, cy), r = c
    else:
        (cx, cy), r = c.center, c.radius
    if not r > 0:
        raise NonpositiveRadius(f"radius must be positive, got {r}")
    return float(cx), float(cy), float(r)


def circle_gaps(c1, c2):
    """``(inner, outer)`` gaps: positive inner gap means nested, positive outer
    gap means the circles lie outside each other."""
    x1, y1, r1 = _circle(c1)
    x2, y2, r2 = _circle(c2)
    dist = math.hypot(x2 - x1, y2 - y1)
    return abs(r1 - r2) - dist, dist - (r1 + r2)


def circles_nested(c1, c2, tol=CIRCLE_TOL):
    """``nested``, ``disjoint_outside``, ``intersecting`` or ``equal``.

    Circles are ``OsculatingCircle`` objects or ``((cx, cy), r)`` tuples.
    """
    x1, y1, r1 = _circle(c1)
    x2, y2, r2 = _circle(c2)
    dist = math.hypot(x2 - x1, y2 - y1)
    if dist <= tol and abs(r1 - r2) <= tol:
        return "equal"
    inner, outer = abs(r1 - r2) - dist, dist - (r1 + r2)
    if inner > tol:
        return "nested"
    if outer > tol:
        return "disjoint_outside"
    return "intersecting"


def circle_intersection(c1, c2):
    """One common point of two intersecting circles."""
    x1, y1, r1 = _circle(c1)
    x2, y2, r2 = _circle(c2)
    dx, dy = x2 - x1, y2 - y1
    dist = math.hypot(dx, dy)
    a = (r1 * r1 - r2 * r2 + dist * dist) / (2 * dist)
    h = math.sqrt(max(r1 * r1 - a * a, 0.0))
    mx, my = x1 + a * dx / dist, y1 + a * dy / dist
    return [mx - h * dy / dist, my + h * dx / dist]


def _vertex_precondition(curve, interval):
    roots = find_vertices(curve, interval)
    if roots:
        where = ", ".join(f"s={_fmt(r)}" for r in roots)
        raise PreconditionError(f"vertex at {where} inside interval")
    return roots


def verify_circle_family(curve, interval, samples=48):
    """Classify every pair of sampled osculating circles along a vertex-free arc."""
    lo, hi = map(float, interval)
    roots = _vertex_precondition(curve, (lo, hi))
    ss = np.linspace(lo, hi, samples)
    circles = pmap(lambda s: osculating_circle(curve, s), ss)
    rep = VerificationReport(theorem="tait-kneser", family="circle_family")
    rep.params = {"curve": curve.describe(), "interval": [lo, hi], "samples": samples}
    rep.grid = {"s": ss.tolist(), "root_scan": roots.params()}
    rep.tolerances = {"circle_tol": CIRCLE_TOL}
    rep.checks["degenerate_curvature"] = bool(roots.degenerate)
    rel = {}
    for j in range(samples):
        for i in range(j):
            a, b = circles[i], circles[j]
            kind = circles_nested(a, b)
            inner, outer = circle_gaps(a, b)
            rel[i, j] = kind
            if kind in ("nested", "disjoint_outside"):
                rep.add_pair(ss[i], ss[j], max(inner, outer), "disjoint", relation=kind)
            elif kind == "equal":
                rep.add_pair(ss[i], ss[j], 0.0, "inconclusive", relation=kind)
            else:
                rep.add_pair(ss[i], ss[j], max(inner, outer), "intersecting",
                             circle_intersection(a, b), relation=kind)
    rep.checks.update(_circle_transitivity(circles, rel))
    rep.finalize()
    if rep.verdict == "disjoint" and all(v == "nested" for v in rel.values()):
        rep.verdict = "nested"
    if rep.checks["transitivity_violations"] and rep.verdict in ("nested", "disjoint"):
        rep.verdict = "inconclusive"
        rep.notes.append("nesting relation failed the transitivity spot-check")
    return rep


def _circle_transitivity(circles, rel):
    """For a < b < c with a, b and b, c nested the same way round, a and c
    must be nested too."""
    n = len(circles)
    r = np.array([c.radius for c in circles])
    triples = violations = 0
    for i in range(n):
        for j in range(i + 1, n):
            if rel[i, j] != "nested":
                continue
            for k in range(j + 1, n):
                if rel[j, k] != "nested":
                    continue
                if np.sign(r[j] - r[i]) != np.sign(r[k] - r[j]):
                    continue
                triples += 1
                violations += rel[i, k] != "nested"
    return {"transitivity_triples": triples, "transitivity_violations": violations}


# -- fractional-linear graphs ---------------------------------------------------------

def _pieces(xs, poles, zone):
    keep = np.ones_like(xs, dtype=bool)
    for p in poles:
        keep &= np.abs(xs - p) > zone
    # split wherever a pole separates neighbouring kept samples
    cuts = sorted(p for p in poles if xs[0] < p < xs[-1])
    label = np.searchsorted(cuts, xs)
    return [xs[keep & (label == k)] for k in range(len(cuts) + 1)]


def verify_mobius_family(f, interval, window, samples=16, x_samples=801, pole_zone=POLE_ZONE,
                         gap_floor=1e-12):
    """Compare the osculating hyperbolas ``y = q + c/(x - p)`` of ``f`` pairwise
    as graphs over ``window``, skipping a neighbourhood of each pole."""
    f = as_expr(f)
    lo, hi = map(float, interval)
    w0, w1 = map(float, window)
    rep = VerificationReport(theorem="mobius", family="mobius_family")
    rep.params = {"f": to_text(f), "interval": [lo, hi], "window": [w0, w1], "samples": samples,
                  "x_samples": x_samples}
    rep.tolerances = {"pole_zone": pole_zone, "pole_tol": POLE_TOL, "gap_floor": gap_floor}
    zeros = find_schwarzian_zeros(f, (lo, hi))
    rep.grid = {"root_scan": zeros.params()}
    ts = np.linspace(lo, hi, samples)
    rep.grid["t"] = ts.tolist()
    if zeros.degenerate:
        rep.verdict = "equal-family"
        rep.checks["max_abs_schwarzian"] = float(max(abs(schwarzian(f, t)) for t in ts))
        rep.notes.append("Schwarzian vanishes identically: every osculant is f itself")
        return rep
    if zeros:
        where = ", ".join(f"t={_fmt(r)}" for r in zeros)
        raise PreconditionError(f"Schwarzian zero at {where} inside interval")
    osc = pmap(lambda t: osculating_mobius(f, t), ts)
    xs = np.linspace(w0, w1, x_samples)
    for j in range(samples):
        for i in range(j):
            a, b = osc[i], osc[j]
            poles = [m.p for m in (a, b) if not m.is_line]
            if len(poles) == 2 and abs(poles[0] - poles[1]) < POLE_TOL:
                raise PoleOverlap(f"poles of the osculants at t={_fmt(ts[i])} and t={_fmt(ts[j])} coincide")
            worst, verdict, witness = np.inf, "disjoint", None
            for piece in _pieces(xs, poles, pole_zone):
                if piece.size == 0:
                    continue
                ga, gb = a(piece), b(piece)
                diff = ga - gb
                floor = gap_floor * (1.0 + max(np.max(np.abs(ga)), np.max(np.abs(gb))))
                worst = min(worst, float(np.min(np.abs(diff))))
                s = np.sign(diff)
                if np.any(s[1:] * s[:-1] < 0) and verdict != "intersecting":
                    k = int(np.nonzero(s[1:] * s[:-1] < 0)[0][0])
                    x = bisect_x(lambda x: a(x) - b(x), piece[k], piece[k + 1])
                    verdict, witness = "intersecting", [x, a(x)]
                elif np.min(np.abs(diff)) <= floor and verdict == "disjoint":
                    verdict = "inconclusive"
            rep.add_pair(ts[i], ts[j], worst, verdict, witness)
    rep.finalize()
    rep.notes.append(f"graphs compared on the window minus |x - p| <= {pole_zone:g} around each pole")
    return rep


# -- algebraic ovals ----------------------------------------------------------------------

@dataclass
class OvalComparison:
    verdict: str
    min_value: float
    sign: int
    crossings: list = field(default_factory=list)


def _newton2(fa, fb, p, iters=20):
    """Common zero of two algebraic curves near ``p``."""
    p = np.asarray(p, dtype=float).copy()
    for _ in range(iters):
        F = np.array([fa(*p), fb(*p)])
        Jm = np.array([fa.gradient(*p), fb.gradient(*p)])
        try:
            step = np.linalg.solve(Jm, F)
        except np.linalg.LinAlgError:
            break
        p = p - step
        if np.hypot(*step) < 1e-15 * (1 + np.hypot(*p)):
            break
    return p


def _refine_crossing(p, q, other, curve):
    fa = lambda u: other(*(p + u * (q - p)))  # noqa: E731
    u = bisect_x(fa, 0.0, 1.0)
    w = p + u * (q - p)
    if curve is not None:
        w2 = _newton2(curve, other, w)
        if np.hypot(*(w2 - w)) <= 2 * np.hypot(*(q - p)):
            w = w2
    return w


def oval_vs_curve(polyline, other, curve=None, tol=OVAL_TOL):
    """Sign of ``other`` along a closed polyline.

    ``disjoint`` when the sign is constant and bounded away from zero,
    ``intersecting`` on a sign change (crossings refined by bisection along
    the segment, then by Newton on both curves when ``curve`` is given).
    Values inside the tolerance band without a clean sign change raise
    ``Inconclusive``.
    """
    if not polyline.closed:
        raise PreconditionError("oval_vs_curve needs a closed polyline")
    pts = polyline.points
    vals = other(pts[:, 0], pts[:, 1])
    rel = np.abs(vals) / np.maximum(1.0, other.magnitude(pts[:, 0], pts[:, 1]))
    sign = np.sign(vals)
    nxt = np.roll(np.arange(len(pts)), -1)
    change = np.nonzero(sign * sign[nxt] < 0)[0]
    if change.size:
        crossings = [_refine_crossing(pts[k], pts[nxt[k]], other, curve) for k in change]
        return OvalComparison("intersecting", float(rel.min()), 0, crossings)
    if rel.min() < tol:
        raise Inconclusive(f"|value| {rel.min():.3e} inside the tolerance band {tol:g} without a sign change")
    return OvalComparison("disjoint", float(rel.min()), int(sign[0]))


def conic_points(c, m=CONIC_SAMPLES):
    """Unit homogeneous points ``(X, Y, W)`` covering the whole projective conic,
    including points at infinity, from the pencil of lines through its tangency
    point."""
    p0 = np.asarray(c.tangency, dtype=float)
    th = np.linspace(0.0, np.pi, m, endpoint=False)
    return _pencil_points(c, p0, th)


def _pencil_points(c, p0, th):
    F, D, E, A, B, C = c.coeffs
    u = np.stack([np.cos(th), np.sin(th)], axis=1)
    w = A * u[:, 0] ** 2 + B * u[:, 0] * u[:, 1] + C * u[:, 1] ** 2
    gx, gy = c.gradient(*p0)
    lin = gx * u[:, 0] + gy * u[:, 1]
    P = np.column_stack([p0[0] * w - lin * u[:, 0], p0[1] * w - lin * u[:, 1], w])
    return P / np.linalg.norm(P, axis=1)[:, None]


def _quad_form(c, P):
    return np.einsum("ij,jk,ik->i", P, c.conic_matrix(), P)


def conic_vs_conic(a, b, m=CONIC_SAMPLES, tol=CONIC_BAND):
    """Sign of ``b``'s quadratic form around the whole projective conic ``a``."""
    p0 = np.asarray(a.tangency, dtype=float)
    th = np.linspace(0.0, np.pi, m + 1)
    vals = _quad_form(b, _pencil_points(a, p0, th))
    sign = np.sign(vals)
    change = np.nonzero(sign[:-1] * sign[1:] < 0)[0]
    if change.size:
        out = []
        for k in change:
            g = lambda t: _quad_form(b, _pencil_points(a, p0, np.array([t])))[0]  # noqa: E731
            t = bisect_x(g, th[k], th[k + 1])
            X = _pencil_points(a, p0, np.array([t]))[0]
            out.append(X[:2] / X[2] if abs(X[2]) > 1e-14 else X)
        return OvalComparison("intersecting", float(np.min(np.abs(vals))), 0, out)
    if np.min(np.abs(vals)) < tol:
        raise Inconclusive(f"|value| {np.min(np.abs(vals)):.3e} inside the tolerance band {tol:g}")
    return OvalComparison("disjoint", float(np.min(np.abs(vals))), int(sign[0]))


def _on_polyline(p, line):
    pts = line.points
    seg = np.hypot(*np.diff(line.closed_points(), axis=0).T).max()
    return float(np.min(np.hypot(*(pts - p).T))) <= 2 * seg


def _side(curve, s, line):
    """Which side of the curve the oval's centroid lies on: ``center`` is the
    side of the centre of curvature."""
    X, Y = curve.jets(s, 2)
    normal = np.array([-Y.coeffs[1], X.coeffs[1]])
    kappa_sign = np.sign(X.coeffs[1] * Y.coeffs[2] - Y.coeffs[1] * X.coeffs[2])
    centroid = line.points.mean(axis=0)
    toward = (centroid - np.array([X.value, Y.value])) @ normal * kappa_sign
    return "center" if toward > 0 else "outer"


def verify_algebraic_family(curve, s_values, d, grid=512, check_extactic=True):
    """Pairwise disjointness of osculating degree-``d`` curves at ``s_values``.

    Conics are compared projectively through their quadratic forms. For
    ``d >= 3`` the oval through each tangency point is traced and a crossing
    counts only if it lies on the other oval; crossings with an infinite
    branch are noted and ignored.
    """
    ss = np.asarray(sorted(map(float, s_values)))
    theorem = {2: "algebraic-conic", 3: "algebraic-cubic", 4: "algebraic-quartic"}.get(d)
    if theorem is None:
        raise ValueError("degree must be 2, 3 or 4")
    rep = VerificationReport(theorem=theorem, family="conic_family" if d == 2 else "oval_family")
    rep.params = {"curve": curve.describe(), "s": ss.tolist(), "degree": d, "grid": grid}
    rep.tolerances = {"oval_tol": OVAL_TOL, "rank_tol": 1e-8, "vertex_tol": 1e-6,
                      "common_zero_tol": COMMON_ZERO_TOL, "transversal_tol": TRANSVERSAL_TOL}
    if check_extactic and len(ss) > 1:
        roots = find_extactic_points(curve, (ss[0], ss[-1]), d)
        rep.grid["root_scan"] = roots.params()
        if roots:
            where = ", ".join(f"s={_fmt(r)}" for r in roots)
            raise PreconditionError(f"{d}-extactic point at {where} inside interval")
    osc = pmap(lambda s: osculating_algebraic_curve(curve, s, d), ss)
    rep.checks["max_osculation_residual"] = max(o.residual for o in osc)

    if d == 2:
        kinds = [classify_conic(o) for o in osc]
        rep.checks["conic_types"] = sorted(set(kinds))
        if "degenerate" in kinds:
            rep.notes.append("degenerate osculating conic encountered")
        if set(kinds) - {"ellipse"}:
            rep.notes.append("osculating conics are not all ellipses; compared projectively")
        rep.tolerances["conic_samples"] = CONIC_SAMPLES
        rep.tolerances["conic_band"] = CONIC_BAND
        for j in range(len(ss)):
            for i in range(j):
                try:
                    cmp = conic_vs_conic(osc[i], osc[j])
                except Inconclusive as exc:
                    rep.add_pair(ss[i], ss[j], 0.0, "inconclusive", note=str(exc))
                    continue
                w = _pick_witness(cmp.crossings, osc[i], osc[j])
                rep.add_pair(ss[i], ss[j], cmp.min_value, cmp.verdict, w)
        rep.finalize()
        return rep

    ovals, sides = [], []
    for s, o in zip(ss, osc):
        try:
            line = trace_oval(o, o.tangency, grid=grid)
            ovals.append(line)
            sides.append(_side(curve, s, line))
        except OpenComponent:
            ovals.append(None)
            sides.append(None)
            rep.notes.append(f"at s={_fmt(s)} the infinite branch, not an oval, osculates the curve")
    rep.checks["oval_sides"] = sides
    for j in range(len(ss)):
        for i in range(j):
            rep.pairs.append(_oval_pair(ss[i], ss[j], osc[i], osc[j], ovals[i], ovals[j]))
    rep.finalize()
    return rep


def _pick_witness(crossings, a, b):
    """The best-conditioned crossing (largest ``|det [grad f_a; grad f_b]|``).

    Crossings close to near-singular points of either curve may appear or
    vanish as the grid changes; the best-conditioned one does not.
    """
    finite = [np.asarray(w, dtype=float) for w in crossings if len(w) == 2]
    if not finite:
        return None

    def cond(w):
        ga, gb = a.gradient(*w), b.gradient(*w)
        return abs(ga[0] * gb[1] - ga[1] * gb[0])
    return max(finite, key=lambda w: (cond(w), -w[0], -w[1])).tolist()


def _common_zero(ca, cb, w):
    """Newton-refined transversal common zero near ``w``, or None."""
    p = _newton2(ca, cb, w)
    if not np.all(np.isfinite(p)):
        return None
    if max(abs(ca(*p)), abs(cb(*p))) > COMMON_ZERO_TOL:
        return None
    ga, gb = np.array(ca.gradient(*p)), np.array(cb.gradient(*p))
    cross = abs(ga[0] * gb[1] - ga[1] * gb[0]) / (np.hypot(*ga) * np.hypot(*gb))
    return p if cross >= TRANSVERSAL_TOL else None


def _oval_pair(sa, sb, ca, cb, la, lb):
    """Oval against oval. Sign changes of one polynomial along the other oval
    are refined to common zeros; only transversal common zeros lying on both
    ovals count. Sign changes that refine to nothing (two curves running
    within noise of each other) leave the pair inconclusive."""
    entry = {"a": float(sa), "b": float(sb)}
    if la is None or lb is None:
        entry.update(min_gap=0.0, verdict="inconclusive", note="no oval through a tangency point")
        return entry
    try:
        ab = oval_vs_curve(la, cb, curve=ca)
        ba = oval_vs_curve(lb, ca, curve=cb)
    except Inconclusive as exc:
        entry.update(min_gap=0.0, verdict="inconclusive", note=str(exc))
        return entry
    found, branch, unresolved = [], 0, 0
    for w in ab.crossings + ba.crossings:
        p = _common_zero(ca, cb, w)
        if p is None:
            unresolved += 1
        elif not (_on_polyline(p, la) and _on_polyline(p, lb)):
            branch += 1
        elif not any(np.hypot(*(p - q)) < 1e-9 for q in found):
            found.append(p)
    if found:
        entry.update(min_gap=0.0, verdict="intersecting", witness=_pick_witness(found, ca, cb),
                     crossings=len(found))
    elif unresolved:
        entry.update(min_gap=0.0, verdict="inconclusive",
                     note=f"{unresolved} sign changes without a transversal common zero")
    else:
        gaps = [v.min_value for v in (ab, ba) if v.verdict == "disjoint"]
        entry.update(min_gap=min(gaps) if gaps else 0.0, verdict="disjoint")
    if branch:
        entry["branch_crossings"] = branch
    if unresolved:
        entry["unresolved_sign_changes"] = unresolved
    return entry


# -- family maps and multiplicities -------------------------------------------------------

@dataclass(frozen=True)
class FamilyMap:
    """``F(s, t)``: for each ``s`` a curve ``t -> F(s, t)``.

    ``jets(s, t, K)`` returns the t-jets of both coordinates, ``tangency(s)``
    the parameter of the point of contact, ``t_range`` the parameter interval
    covering the curve once (or a window for graphs), ``degree`` the degree of
    the family's curves.
    """

    kind: str
    jets: object
    tangency: object
    t_range: tuple
    degree: int
    coeff_path: object = None
    info: dict = field(default_factory=dict)

    def point(self, s, t):
        X, Y = self.jets(s, t, 0)
        return np.array([X.value, Y.value])


def graph_family(f, n, window):
    """Osculating Taylor polynomials: ``F(s, x) = (x, g_s(x))``."""
    f = as_expr(f)

    @lru_cache(maxsize=64)
    def local(s):
        return jet_at(f, s, n).coeffs

    def jets(s, t, K):
        c = local(float(s))
        h = J.jet_variable(t, K) - s
        y = J.jet_constant(c[-1], t, K)
        for ci in c[-2::-1]:
            y = y * h + ci
        return J.jet_variable(t, K), y

    return FamilyMap("graph_family", jets, lambda s: float(s), tuple(map(float, window)), n,
                     info={"f": to_text(f), "n": n})


def circle_family(curve):
    """Osculating circles, ``t = 0`` at the point of contact."""
    @lru_cache(maxsize=64)
    def osc(s):
        return osculating_circle(curve, s)

    def jets(s, t, K):
        c = osc(float(s))
        phi = math.atan2(c.tangency[1] - c.center[1], c.tangency[0] - c.center[0])
        th = J.jet_variable(t, K) + phi
        return c.center[0] + c.radius * J.cos(th), c.center[1] + c.radius * J.sin(th)

    return FamilyMap("circle_family", jets, lambda s: 0.0, (-math.pi, math.pi), 2,
                     info={"curve": curve.describe()})


def conic_family(curve, d=2):
    """Osculating conics (``d = 2``) or tangent lines (``d = 1``).

    Conics are parameterized by the pencil of lines through the point of
    contact: ``t`` is the angle from the tangent direction and the point is the
    second intersection of the line with the conic. This is a projective image
    of the circle, jet-exact in ``t``, and covers ellipses and hyperbolas alike.
    """
    if d not in (1, 2):
        raise ValueError("conic_family handles d = 1 or 2")

    @lru_cache(maxsize=64)
    def osc(s):
        return osculating_algebraic_curve(curve, s, d)

    def coeffs(s):
        return osc(s).coeffs

    @lru_cache(maxsize=64)
    def tangent_angle(s):
        vx, vy = curve.velocity(s)
        return math.atan2(vy, vx)

    def jets(s, t, K):
        c = osc(float(s))
        px, py = c.tangency
        th = J.jet_variable(t, K) + tangent_angle(s)
        ux, uy = J.cos(th), J.sin(th)
        if d == 1:
            # t is arc length along the tangent line
            return px + J.jet_variable(t, K) * math.cos(tangent_angle(s)), \
                py + J.jet_variable(t, K) * math.sin(tangent_angle(s))
        F, D, E, A, B, C = c.coeffs
        gx, gy = c.gradient(px, py)
        w = A * ux * ux + B * ux * uy + C * uy * uy
        r = -(gx * ux + gy * uy) / w
        return px + r * ux, py + r * uy

    t_range = (-math.pi / 2, math.pi / 2) if d == 2 else (-1.0, 1.0)
    return FamilyMap("conic_family" if d == 2 else "line_family", jets, lambda s: 0.0, t_range, d,
                     coeff_path=coeffs, info={"curve": curve.describe()})


def mobius_family(f, window):
    """Osculating fractional-linear graphs ``F(s, x) = (x, q + c/(x - p))``."""
    f = as_expr(f)

    @lru_cache(maxsize=64)
    def osc(s):
        return osculating_mobius(f, s)

    def jets(s, t, K):
        m = osc(float(s))
        x = J.jet_variable(t, K)
        if m.is_line:
            return x, m.slope * x + m.intercept
        return x, m.q + m.c / (x - m.p)

    return FamilyMap("mobius_family", jets, lambda s: float(s), tuple(map(float, window)), 2,
                     info={"f": to_text(f)})


def _ds_jets(fam, s, t, K, h):
    def central(step):
        Xp, Yp = fam.jets(s + step, t, K)
        Xm, Ym = fam.jets(s - step, t, K)
        return (Xp.coeffs - Xm.coeffs) / (2 * step), (Yp.coeffs - Ym.coeffs) / (2 * step)
    (x1, y1), (x2, y2) = central(h), central(h / 2)
    return (4 * x2 - x1) / 3, (4 * y2 - y1) / 3


def _t_unit(Xt, Yt):
    """Natural parameter unit: the radius over which ``dF/dt`` stays comparable
    to its value, capped at 1."""
    v = np.hypot(Xt.coeffs, Yt.coeffs)
    if v[0] == 0 or len(v) < 2:
        return 1.0
    growth = max((v[k] / v[0]) ** (1.0 / k) for k in range(1, len(v)))
    return 1.0 if growth <= 1 else float(1.0 / growth)


def jacobian_jet(fam, s, t, K, h=FD_STEP):
    """t-jet of ``det [dF/ds, dF/dt]`` at ``(s, t)`` with the scale and the
    parameter unit used to judge its coefficients.

    Coefficients are compared in the variable ``(t' - t) / unit`` so that a
    fast-growing parameterization does not inflate the threshold.
    """
    X, Y = fam.jets(s, t, K + 1)
    Xt, Yt = X.deriv(), Y.deriv()
    xs, ys = _ds_jets(fam, s, t, K, h)
    Xs, Ys = J.Jet(t, xs), J.Jet(t, ys)
    jac = Xs * Yt - Ys * Xt
    unit = _t_unit(Xt, Yt)
    w = unit ** np.arange(K + 1)
    scale = np.max(np.hypot(xs, ys) * w) * np.max(np.hypot(Xt.coeffs, Yt.coeffs) * w)
    return jac, float(scale), unit


def _vanishing_order(coeffs, scale, tol, what="Jacobian"):
    mags = np.abs(np.asarray(coeffs))
    thresh = tol * scale
    above = np.nonzero(mags > thresh)[0]
    order = int(above[0]) if above.size else len(mags)
    ambiguous = np.nonzero((mags[:order] > thresh / NOISE_BAND))[0]
    if ambiguous.size:
        k = int(ambiguous[0])
        raise NoisyJet(f"{what} coefficient {k} = {mags[k]:.3e} is within a factor "
                       f"{NOISE_BAND:g} of the threshold {thresh:.3e}")
    return order, not above.size


def multiplicity_detail(fam, s, t, max_order=8, h=FD_STEP, tol=ORDER_TOL):
    jac, scale, unit = jacobian_jet(fam, s, t, max_order, h)
    scaled = jac.coeffs * unit ** np.arange(max_order + 1)
    order, saturated = _vanishing_order(scaled, scale, tol)
    return {"s": float(s), "t": float(t), "order": min(order, max_order), "saturated": saturated,
            "scale": scale, "unit": unit, "coeffs": jac.coeffs.tolist()}


def infinitesimal_multiplicity(fam, s, t, max_order=8, h=FD_STEP, tol=ORDER_TOL):
    """Order of vanishing in ``t`` of the Jacobian of ``F`` at ``(s, t)``;
    ``max_order`` when no coefficient clears the threshold."""
    return multiplicity_detail(fam, s, t, max_order, h, tol)["order"]


def _jac_value(fam, s, t, h):
    jac, scale, _ = jacobian_jet(fam, s, t, 1, h)
    return jac.coeffs[0], jac.coeffs[1], scale


def _scan(fam, s, ts, h, center, radius):
    rows = []
    for t in ts:
        try:
            if np.hypot(*(fam.point(s, t) - center)) > radius:
                raise ValueError
            rows.append(_jac_value(fam, s, t, h))
        except (ValueError, ArithmeticError, OsculantError):
            rows.append((np.nan, np.nan, np.nan))
    return np.array(rows)


def _within(fam, s, t, center, radius):
    try:
        return bool(np.hypot(*(fam.point(s, t) - center)) <= radius)
    except (ValueError, ArithmeticError, OsculantError):
        return False


def _dips(fam, s, ts, h, center, radius):
    """Candidate zeros of the Jacobian along ``Gamma_s``: sign changes and
    local minima of ``|J| / scale``, each refined by bisection (of ``J`` or of
    ``dJ/dt``), plus the point of contact."""
    rows = _scan(fam, s, ts, h, center, radius)
    val, der, sc = rows.T
    ratio = np.abs(val) / sc
    jf = lambda t: _jac_value(fam, s, t, h)[0]  # noqa: E731
    df = lambda t: _jac_value(fam, s, t, h)[1]  # noqa: E731
    found = []
    for k in range(len(ts) - 1):
        if np.isnan(val[k]) or np.isnan(val[k + 1]):
            continue
        if val[k] == 0:
            found.append(ts[k])
        elif val[k] * val[k + 1] < 0:
            found.append(bisect_x(jf, ts[k], ts[k + 1]))
    for k in range(1, len(ts) - 1):
        r = ratio[k - 1:k + 2]
        if np.isnan(r).any() or not (r[1] <= r[0] and r[1] <= r[2]):
            continue
        if val[k - 1] * val[k + 1] < 0:
            continue
        lo, hi = ts[k - 1], ts[k + 1]
        found.append(bisect_x(df, lo, hi) if der[k - 1] * der[k + 1] < 0 else ts[k])
    # a sign change through a point at infinity refines onto the pole itself
    found = [t for t in found if _within(fam, s, t, center, radius)]
    t0 = fam.tangency(s)
    if ts[0] <= t0 <= ts[-1]:
        found.append(t0)
    found.sort()
    merged = []
    spacing = ts[1] - ts[0]
    for t in found:
        if merged and t - merged[-1] <= 2 * spacing:
            # keep the candidate nearer the point of contact or the smaller |J|
            if abs(t - t0) < abs(merged[-1] - t0):
                merged[-1] = t
            continue
        merged.append(t)
    return merged, int(np.isnan(val).sum())


def infinitesimal_index(fam, s, t_samples=512, max_order=8, h=FD_STEP, tol=ORDER_TOL, t_range=None,
                        radius=None):
    """Sum of the multiplicities over the real points of ``Gamma_s`` within
    ``radius`` of the point of contact (default ``100 (1 + |contact|)``), with
    the bound ``d^2`` asserted in the report."""
    lo, hi = t_range if t_range is not None else fam.t_range
    ts = np.linspace(lo, hi, t_samples)
    center = fam.point(s, fam.tangency(s))
    radius = 100.0 * (1.0 + np.hypot(*center)) if radius is None else float(radius)
    dips, skipped = _dips(fam, s, ts, h, center, radius)
    rep = VerificationReport(theorem="infinitesimal-index", family=fam.kind)
    rep.params = {"s": float(s), "t_range": [float(lo), float(hi)], "t_samples": t_samples,
                  "max_order": max_order, "radius": radius, **fam.info}
    rep.tolerances = {"fd_step": h, "order_tol": tol, "noise_band": NOISE_BAND}
    rep.grid = {"t": [float(lo), float(hi), t_samples], "skipped_points": skipped,
                "candidates": [float(t) for t in dips]}
    for t in dips:
        m = multiplicity_detail(fam, s, t, max_order, h, tol)
        m.pop("coeffs")
        if m["order"] > 0:
            rep.multiplicities.append(m)
    rep.index = sum(m["order"] for m in rep.multiplicities)
    rep.bound = fam.degree ** 2
    rep.checks["bezout_margin"] = rep.bound - rep.index
    rep.verdict = "verified" if rep.index <= rep.bound else "violated"
    rep.notes.append("index summed over the real points of the sampled parameter range only")
    return rep


def jacobian_lemma_order(fam, s, t, max_order=8, h=FD_STEP, tol=ORDER_TOL):
    """t-order of ``(d f_s / ds)(Gamma_s(t))`` from differences of the
    normalized coefficient path; must match the Jacobian's order."""
    if fam.coeff_path is None:
        raise ValueError("family has no coefficient path")

    def central(step):
        return (fam.coeff_path(s + step) - fam.coeff_path(s - step)) / (2 * step)
    dc = (4 * central(h / 2) - central(h)) / 3
    X, Y = fam.jets(s, t, max_order)
    d = fam.degree
    one = J.jet_constant(1.0, t, max_order)
    xp, yp = [one], [one]
    for _ in range(d):
        xp.append(xp[-1] * X)
        yp.append(yp[-1] * Y)
    total = J.jet_constant(0.0, t, max_order)
    mono_scale = 0.0
    for c, (a, b) in zip(dc, monomials(d)):
        term = xp[a] * yp[b]
        mono_scale = max(mono_scale, float(np.max(np.abs(term.coeffs))))
        total = total + c * term
    scale = float(np.linalg.norm(dc)) * mono_scale
    order, _ = _vanishing_order(total.coeffs, scale, tol, "d f_s/ds")
    return min(order, max_order)


def envelope_multiplicity_check(curve, s, d, max_order=8, require_ellipse=False):
    """Multiplicity of the osculating line (``d = 1``) or conic (``d = 2``)
    family at the point of contact; ``n(d) - 1`` expected."""
    if d not in (1, 2):
        raise ValueError("d must be 1 or 2")
    if is_locally_algebraic(curve, s, d):
        raise PreconditionError(f"curve is algebraic of degree {d} near s={_fmt(s)}: the family is constant")
    rep = VerificationReport(theorem="envelope", family="conic_family" if d == 2 else "line_family")
    rep.params = {"curve": curve.describe(), "s": float(s), "degree": d, "max_order": max_order}
    rep.tolerances = {"fd_step": FD_STEP, "order_tol": ORDER_TOL, "noise_band": NOISE_BAND}
    if d == 2:
        kind = classify_conic(osculating_algebraic_curve(curve, s, 2))
        rep.checks["conic_type"] = kind
        if kind == "degenerate" or (require_ellipse and kind != "ellipse"):
            raise NotAnEllipse(f"osculating conic at s={_fmt(s)} is {kind}")
        if kind != "ellipse":
            rep.notes.append(f"osculating conic is a {kind}; the multiplicity is projectively invariant")
    fam = conic_family(curve, d)
    t0 = fam.tangency(s)
    contact = np.hypot(*(fam.point(s, t0) - curve.point(s)))
    rep.checks["contact_error"] = float(contact)
    m = multiplicity_detail(fam, s, t0, max_order)
    m.pop("coeffs")
    rep.multiplicities.append(m)
    expected = n_conditions(d) - 1
    rep.checks["expected_multiplicity"] = expected
    if d == 2:
        rep.checks["jacobian_lemma_order"] = jacobian_lemma_order(fam, s, t0, max_order)
    ok = m["order"] == expected and rep.checks.get("jacobian_lemma_order", expected) == expected
    rep.verdict = "verified" if ok else "violated"
    return rep


__all__ = [
    "FamilyMap", "OvalComparison", "circle_family", "circle_gaps", "circle_intersection",
    "circles_nested", "conic_family", "conic_points", "conic_vs_conic", "envelope_multiplicity_check",
    "graph_family", "infinitesimal_index", "infinitesimal_multiplicity", "jacobian_jet",
    "jacobian_lemma_order", "mobius_family", "multiplicity_detail", "oval_vs_curve", "pmap",
    "verify_algebraic_family", "verify_circle_family", "verify_mobius_family",
]
