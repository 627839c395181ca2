"""Zero contours of bivariate polynomials by marching squares, and tracing of
the bounded component through a given point."""

from dataclasses import dataclass

import numpy as np

from ._backend import ms_segments
from .errors import OpenComponent, SeedOffCurve

SEED_TOL = 1e-8
NEWTON_ITERS = 30
VERTEX_TOL = 1e-6
EXTRA_STEPS = 6


@dataclass(frozen=True)
class Polyline:
    points: np.ndarray  # (m, 2); a closed polyline does not repeat its first point
    closed: bool

    def __len__(self):
        return len(self.points)

    def closed_points(self):
        return np.vstack([self.points, self.points[:1]]) if self.closed else self.points

    def bbox(self):
        return self.points.min(axis=0), self.points.max(axis=0)


def _edge_points(values, xs, ys, edge_ids):
    ny, nx = values.shape[0] - 1, values.shape[1] - 1
    hoff = (ny + 1) * nx
    e = np.asarray(edge_ids)
    out = np.empty((len(e), 2))
    h = e < hoff
    j, i = np.divmod(e[h], nx)
    v0, v1 = values[j, i], values[j, i + 1]
    w = v0 / (v0 - v1)
    out[h, 0] = xs[i] + w * (xs[i + 1] - xs[i])
    out[h, 1] = ys[j]
    j, i = np.divmod(e[~h] - hoff, nx + 1)
    v0, v1 = values[j, i], values[j + 1, i]
    w = v0 / (v0 - v1)
    out[~h, 0] = xs[i]
    out[~h, 1] = ys[j] + w * (ys[j + 1] - ys[j])
    return out


def _link(segments):
    """Chain edge-id segments into (ids, closed) lists, in a canonical order
    independent of the order the kernel emitted them."""
    if len(segments) == 0:
        return []
    seg = np.sort(np.asarray(segments), axis=1)
    seg = seg[np.lexsort((seg[:, 1], seg[:, 0]))]
    adj = {}
    for a, b in seg.tolist():
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    visited = set()
    chains = []

    def walk(start):
        chain = [start]
        visited.add(start)
        prev, cur = None, start
        while True:
            nxt = [n for n in adj[cur] if n != prev and n not in visited]
            if not nxt:
                closed = len(chain) > 2 and start in adj[cur] and prev is not None
                return chain, closed
            prev, cur = cur, min(nxt)
            visited.add(cur)
            chain.append(cur)

    for e in sorted(k for k, v in adj.items() if len(v) == 1):
        if e not in visited:
            chains.append(walk(e))
    for e in sorted(adj):
        if e not in visited:
            chains.append(walk(e))
    return chains


def contour_polylines(func, box, nx=512, ny=None, grad=None, tol=None):
    """All zero-contour polylines of vectorized ``func(X, Y)`` over ``box``.

    ``box = (xmin, xmax, ymin, ymax)``. With ``grad`` each vertex receives one
    Newton step toward the zero set, and vertices still above ``tol`` (near
    almost-singular points) a few more.
    """
    ny = nx if ny is None else ny
    x0, x1, y0, y1 = map(float, box)
    xs = np.linspace(x0, x1, nx + 1)
    ys = np.linspace(y0, y1, ny + 1)
    X, Y = np.meshgrid(xs, ys)
    values = np.asarray(func(X, Y), dtype=float)
    # nudge exact zeros so every crossing sits strictly inside an edge
    values = np.where(values == 0.0, np.finfo(float).tiny, values)
    lines = []
    for ids, closed in _link(ms_segments(values)):
        pts = _edge_points(values, xs, ys, ids)
        if grad is not None:
            pts = newton_correct(func, grad, pts, tol)
        lines.append(Polyline(pts, closed))
    return lines


def newton_step(func, grad, pts):
    f = np.asarray(func(pts[:, 0], pts[:, 1]), dtype=float)
    gx, gy = grad(pts[:, 0], pts[:, 1])
    g2 = gx * gx + gy * gy
    ok = g2 > 0
    step = np.where(ok, f / np.where(ok, g2, 1.0), 0.0)
    return pts - step[:, None] * np.stack([gx, gy], axis=1)


def newton_correct(func, grad, pts, tol=None, extra=EXTRA_STEPS):
    pts = newton_step(func, grad, pts)
    if tol is None:
        return pts
    for _ in range(extra):
        bad = np.abs(func(pts[:, 0], pts[:, 1])) > tol
        if not bad.any():
            break
        pts[bad] = newton_step(func, grad, pts[bad])
    return pts


def project_to_curve(c, seed, tol=SEED_TOL, max_move=None):
    """Newton projection of ``seed`` onto the zero set of ``c``."""
    p = np.asarray(seed, dtype=float).copy()
    start = p.copy()
    max_move = 1e-3 * (1.0 + np.hypot(*start)) if max_move is None else max_move
    for _ in range(NEWTON_ITERS):
        f = c(*p)
        gx, gy = c.gradient(*p)
        g2 = gx * gx + gy * gy
        if g2 == 0:
            break
        p = p - f / g2 * np.array([gx, gy])
        if abs(c(*p)) <= tol * max(1.0, c.magnitude(*p)) * 1e-3:
            break
    resid = abs(c(*p))
    if resid > tol * max(1.0, c.magnitude(*p)) or np.hypot(*(p - start)) > max_move:
        raise SeedOffCurve(f"seed ({start[0]:.6g}, {start[1]:.6g}) is not on the curve (|f| = {abs(c(*start)):.3e})")
    return p


def _implicit_curvature(c, p):
    gx, gy = c.gradient(*p)
    hxx, hxy, hyy = c.hessian(*p)
    g = np.hypot(gx, gy)
    return abs(hxx * gy * gy - 2 * hxy * gx * gy + hyy * gx * gx) / g ** 3


def _component_at(lines, p, cell):
    best, best_d = None, np.inf
    for line in lines:
        d = np.min(np.hypot(*(line.points - p).T))
        if d < best_d:
            best, best_d = line, d
    return best if best_d <= 2.0 * cell else None


def _trace_in_box(c, p, box, grid):
    lines = contour_polylines(c, box, grid, grad=c.gradient, tol=VERTEX_TOL)
    cell = np.hypot((box[1] - box[0]) / grid, (box[3] - box[2]) / grid)
    return _component_at(lines, p, cell)


def _square(p, half):
    return (p[0] - half, p[0] + half, p[1] - half, p[1] + half)


def trace_oval(c, seed, grid=512, box=None, max_half=None):
    """Closed component of ``c`` through ``seed``.

    Without ``box`` the bounding box is fitted automatically: it starts at the
    size of the osculating circle of the contour, grows while the component
    leaves it, shrinks while the seed is missed, and is finally refit to the
    component with a 10% margin.
    """
    p = project_to_curve(c, seed)
    if box is not None:
        comp = _trace_in_box(c, p, tuple(box), grid)
        if comp is None:
            raise SeedOffCurve("seed not found on the traced contour; refine the grid")
        if not comp.closed:
            raise OpenComponent(f"component through ({p[0]:.6g}, {p[1]:.6g}) leaves the box {tuple(box)}")
        return comp

    scale = 1.0 + np.hypot(*p)
    max_half = 1e3 * scale if max_half is None else max_half
    kappa = _implicit_curvature(c, p)
    half = min(max(2.0 / kappa if kappa > 0 else max_half, 1e-3 * scale), max_half)
    comp = None
    for _ in range(60):
        comp = _trace_in_box(c, p, _square(p, half), grid)
        if comp is None:
            half /= 2
            continue
        if comp.closed:
            break
        if half >= max_half:
            raise OpenComponent(f"component through ({p[0]:.6g}, {p[1]:.6g}) is unbounded or larger than {max_half:g}")
        half = min(2 * half, max_half)
    else:
        raise SeedOffCurve("could not resolve the component through the seed")

    lo, hi = comp.bbox()
    pad = 0.1 * (hi - lo).max()
    fit = (lo[0] - pad, hi[0] + pad, lo[1] - pad, hi[1] + pad)
    refit = _trace_in_box(c, p, fit, grid)
    return refit if refit is not None and refit.closed else comp


def oval_residual(c, line):
    """Largest ``|f| / magnitude`` over the polyline's vertices."""
    pts = line.points
    return float(np.max(np.abs(c(pts[:, 0], pts[:, 1])) / np.maximum(1.0, c.magnitude(pts[:, 0], pts[:, 1]))))


def plot_implicit(c, box, grid=512):
    """Every zero-contour polyline of ``c`` inside ``box``."""
    return contour_polylines(c, box, grid, grad=c.gradient, tol=VERTEX_TOL)
