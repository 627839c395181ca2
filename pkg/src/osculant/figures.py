"""Deterministic SVG figures of curves and their osculating families."""

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .algebraic import osculating_algebraic_curve, osculating_circle
from .chebyshev import osculating_element, trig_basis, verify_disjoint_cheb
from .contour import plot_implicit, trace_oval
from .curves import astroid, log_spiral
from .errors import DomainError
from .expr import as_expr, eval_array_masked, univariate
from .taitkneser import verify_algebraic_family, verify_circle_family
from .taylor import osculating_polynomial, verify_disjoint_graphs

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2")
BASE_WIDTH = 2.0
FAMILY_WIDTH = 0.6
WIDTH_PX = 640.0

# Figure parameters. Bump the version whenever a value changes so rendered
# files can be told apart.
MANIFEST = {
    "version": 1,
    "figures": {
        1: {"title": "logarithmic spiral and its osculating circles", "pitch": 0.2,
            "interval": [0.0, 3 * math.pi], "samples": 24},
        2: {"title": "osculating quadratic polynomials of x^3", "f": "x^3", "n": 2,
            "interval": [0.5, 1.5], "samples": 16, "window": [-3.0, 3.0], "ylim": [-12.0, 20.0]},
        3: {"title": "osculating cubic polynomials of x^4", "f": "x^4", "n": 3,
            "interval": [0.25, 1.0], "samples": 16, "window": [-1.0, 3.0], "ylim": [-4.0, 30.0],
            "x_max": 3.0},
        4: {"title": "osculating linear harmonics of x^3", "f": "x^3", "degree": 1,
            "interval": [0.5, 1.5], "samples": 16, "window": [-math.pi, math.pi], "ylim": [-12.0, 20.0]},
        5: {"title": "osculating cubic ovals of a logarithmic spiral", "pitch": 0.2,
            "interval": [0.0, 4.5 * math.pi], "samples": 12, "grid": 512},
        6: {"title": "osculating quartics of the astroid",
            "s": [0.45, 0.5, 0.55, 0.6, 0.65, 0.7, 0.75, 0.8, 0.85, 0.9, 0.95, 1.0, 1.05, 1.1],
            "viewbox": [-1.2, 1.2, -1.2, 1.2], "grid": 512},
    },
}


@dataclass
class Element:
    kind: str  # polyline, graph, contour, marker, circle
    paths: list = field(default_factory=list)  # list of (m, 2) arrays
    circle: tuple | None = None  # (cx, cy, r)
    width: float = FAMILY_WIDTH
    color: int = 0

    def bbox(self):
        if self.circle is not None:
            cx, cy, r = self.circle
            return np.array([cx - r, cy - r]), np.array([cx + r, cy + r])
        pts = np.vstack([p for p in self.paths if len(p)])
        return pts.min(axis=0), pts.max(axis=0)

    def polylines(self):
        if self.circle is not None:
            cx, cy, r = self.circle
            th = np.linspace(0, 2 * np.pi, 257)
            return [np.column_stack([cx + r * np.cos(th), cy + r * np.sin(th)])]
        return self.paths


@dataclass
class Scene:
    viewbox: tuple  # (xmin, xmax, ymin, ymax) in model coordinates
    elements: list = field(default_factory=list)
    title: str = ""
    equal_aspect: bool = True

    def __post_init__(self):
        x0, x1, y0, y1 = self.viewbox
        if not (x1 > x0 and y1 > y0):
            raise ValueError("viewbox needs positive width and height")

    def add(self, element):
        lo, hi = element.bbox()
        x0, x1, y0, y1 = self.viewbox
        if hi[0] < x0 or lo[0] > x1 or hi[1] < y0 or lo[1] > y1:
            raise ValueError(f"{element.kind} element lies outside the viewbox")
        self.elements.append(element)
        return element

    def size(self):
        x0, x1, y0, y1 = self.viewbox
        sx = WIDTH_PX / (x1 - x0)
        sy = sx if self.equal_aspect else WIDTH_PX * 0.75 / (y1 - y0)
        return sx, sy, WIDTH_PX, sy * (y1 - y0)

    def to_svg(self, desc=""):
        x0, x1, y0, y1 = self.viewbox
        sx, sy, W, H = self.size()

        def px(p):
            return (p[:, 0] - x0) * sx, (y1 - p[:, 1]) * sy

        out = ['<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
               f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{W:.2f}" '
               f'height="{H:.2f}" viewBox="0 0 {W:.2f} {H:.2f}">',
               f"<title>{_esc(self.title)}</title>"]
        if desc:
            out.append(f"<desc>{_esc(desc)}</desc>")
        out += ['<defs><clipPath id="frame">'
                f'<rect x="0" y="0" width="{W:.2f}" height="{H:.2f}"/></clipPath></defs>',
                f'<rect x="0" y="0" width="{W:.2f}" height="{H:.2f}" fill="#ffffff"/>',
                '<g clip-path="url(#frame)" fill="none" stroke-linecap="round" stroke-linejoin="round">']
        for el in self.elements:
            color = PALETTE[el.color % len(PALETTE)]
            style = f'stroke="{color}" stroke-width="{el.width:g}"'
            if el.circle is not None:
                cx, cy, r = el.circle
                if not self.equal_aspect:
                    raise ValueError("circle elements need an equal-aspect scene")
                out.append(f'<circle cx="{(cx - x0) * sx:.4f}" cy="{(y1 - cy) * sy:.4f}" '
                           f'r="{r * sx:.4f}" {style}/>')
                continue
            if el.kind == "marker":
                for p in el.paths:
                    X, Y = px(p)
                    for a, b in zip(X, Y):
                        out.append(f'<circle cx="{a:.4f}" cy="{b:.4f}" r="2.5" fill="{color}" stroke="none"/>')
                continue
            for p in el.paths:
                if len(p) < 2:
                    continue
                X, Y = px(p)
                d = "M" + " L".join(f"{a:.4f},{b:.4f}" for a, b in zip(X, Y))
                out.append(f'<path d="{d}" {style}/>')
        out += ["</g>", "</svg>", ""]
        return "\n".join(out)

    def write_svg(self, path, desc=""):
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.to_svg(desc))

    def write_csv(self, path):
        """Every plotted polyline as ``x,y`` rows, a blank line between subpaths."""
        with open(path, "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            first = True
            for el in self.elements:
                for p in el.polylines():
                    if not first:
                        fh.write("\n")
                    first = False
                    for x, y in p:
                        w.writerow([f"{x:.10g}", f"{y:.10g}"])


def _esc(text):
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def plot_graph(e, window, samples=600, ylim=None):
    """Subpaths of ``(x, e(x))`` at uniform samples, split at poles.

    A break happens where the function is undefined, where a value strays more
    than ten viewbox heights outside ``ylim``, or where consecutive values jump
    by more than that. Without ``ylim`` the height is the 5-95% range of the
    sampled values.
    """
    e, name = univariate(as_expr(e))
    xs = np.linspace(float(window[0]), float(window[1]), samples)
    ys = np.broadcast_to(eval_array_masked(e, {name: xs}), xs.shape).astype(float)
    ok = np.isfinite(ys)
    if not ok.any():
        raise DomainError(f"expression undefined on the whole window {tuple(window)}")
    if ylim is None:
        lo, hi = np.percentile(ys[ok], [5, 95])
    else:
        lo, hi = map(float, ylim)
    span = 10.0 * (hi - lo)
    if span > 0:
        ok &= (ys >= lo - span) & (ys <= hi + span)
    paths, cur = [], []
    for k in range(samples):
        if not ok[k]:
            if cur:
                paths.append(cur)
            cur = []
            continue
        if cur and span > 0 and abs(ys[k] - cur[-1][1]) > span:
            paths.append(cur)
            cur = []
        cur.append((float(xs[k]), float(ys[k])))
    if cur:
        paths.append(cur)
    return [np.array(p) for p in paths]


def _fit_viewbox(arrays, pad=0.05):
    pts = np.vstack(arrays)
    lo, hi = pts.min(axis=0), pts.max(axis=0)
    m = pad * (hi - lo).max()
    return (lo[0] - m, hi[0] + m, lo[1] - m, hi[1] + m)


def _graph_scene(title, f, window, ylim, osculants):
    scene = Scene((window[0], window[1], ylim[0], ylim[1]), title=title, equal_aspect=False)
    for k, g in enumerate(osculants):
        xs = np.linspace(window[0], window[1], 600)
        ys = g(xs)
        keep = (ys > ylim[0] - 10 * (ylim[1] - ylim[0])) & (ys < ylim[1] + 10 * (ylim[1] - ylim[0]))
        scene.add(Element("graph", [np.column_stack([xs[keep], ys[keep]])], color=k + 1))
    scene.add(Element("graph", plot_graph(f, window, 600, ylim), width=BASE_WIDTH, color=0))
    return scene


def build_figure(fig_id):
    """``(scene, reports)``: the scene and the verification reports for the
    very objects it draws."""
    if fig_id not in MANIFEST["figures"]:
        raise ValueError(f"figure id must be 1..{len(MANIFEST['figures'])}, got {fig_id}")
    p = MANIFEST["figures"][fig_id]
    if fig_id == 1:
        curve = log_spiral(p["pitch"], tuple(p["interval"]))
        ss = np.linspace(*p["interval"], p["samples"])
        circles = [osculating_circle(curve, s) for s in ss]
        base = curve.points(np.linspace(*p["interval"], 600))
        boxes = [base] + [np.array([[c.center[0] - c.radius, c.center[1] - c.radius],
                                    [c.center[0] + c.radius, c.center[1] + c.radius]]) for c in circles]
        scene = Scene(_fit_viewbox(boxes), title=p["title"])
        for k, c in enumerate(circles):
            scene.add(Element("circle", circle=(c.center[0], c.center[1], c.radius), color=k + 1))
        scene.add(Element("polyline", [base], width=BASE_WIDTH))
        return scene, [verify_circle_family(curve, p["interval"], p["samples"])]
    if fig_id in (2, 3):
        ts = np.linspace(*p["interval"], p["samples"])
        osc = [osculating_polynomial(p["f"], t, p["n"]) for t in ts]
        scene = _graph_scene(p["title"], p["f"], p["window"], p["ylim"], osc)
        kw = {"window": tuple(p["window"])} if p["n"] % 2 == 0 else {"x_max": p["x_max"]}
        return scene, [verify_disjoint_graphs(p["f"], p["interval"], p["n"], t_samples=p["samples"], **kw)]
    if fig_id == 4:
        sys = trig_basis(p["degree"])
        ts = np.linspace(*p["interval"], p["samples"])
        osc = [osculating_element(sys, p["f"], t) for t in ts]
        scene = _graph_scene(p["title"], p["f"], p["window"], p["ylim"], osc)
        return scene, [verify_disjoint_cheb(sys, p["f"], p["interval"], p["window"], t_samples=p["samples"])]
    if fig_id == 5:
        curve = log_spiral(p["pitch"], tuple(p["interval"]))
        ss = np.linspace(*p["interval"], p["samples"])
        ovals = []
        for s in ss:
            c = osculating_algebraic_curve(curve, s, 3)
            ovals.append(trace_oval(c, c.tangency, grid=p["grid"]).closed_points())
        base = curve.points(np.linspace(*p["interval"], 600))
        scene = Scene(_fit_viewbox([base] + ovals), title=p["title"])
        for k, o in enumerate(ovals):
            scene.add(Element("contour", [o], color=k + 1))
        scene.add(Element("polyline", [base], width=BASE_WIDTH))
        return scene, [verify_algebraic_family(curve, ss, 3, grid=p["grid"])]
    # figure 6
    scene = Scene(tuple(p["viewbox"]), title=p["title"])
    for k, s in enumerate(p["s"]):
        c = osculating_algebraic_curve(astroid(), s, 4)
        lines = [ln.closed_points() for ln in plot_implicit(c, p["viewbox"], p["grid"])]
        scene.add(Element("contour", lines, color=k + 1))
    th = np.linspace(0, 2 * math.pi, 1201)
    base = np.column_stack([np.cos(th) ** 3, np.sin(th) ** 3])
    scene.add(Element("polyline", [base], width=BASE_WIDTH))
    rep = verify_algebraic_family(astroid(), [0.6, 0.7], 4, grid=p["grid"])
    return scene, [rep]


def render_figure(fig_id, out, csv_path=None):
    scene, reports = build_figure(fig_id)
    desc = f"osculant {__version__}, figure manifest v{MANIFEST['version']}, figure {fig_id}"
    scene.write_svg(out, desc)
    if csv_path:
        scene.write_csv(csv_path)
    return scene, reports
