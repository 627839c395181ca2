"""Plane curves given by expressions, and the key=value curve spec format.

A spec file looks like::

    kind=parametric
    x=exp(0.2*s)*cos(s)
    y=exp(0.2*s)*sin(s)
    domain=[0, 3*pi]

Graphs use ``kind=graph`` and ``f=<expr in x>``. Blank lines and lines starting
with ``#`` are ignored; unknown keys are rejected.
"""

from dataclasses import dataclass, field

import numpy as np

from . import jet as J
from .errors import CurveSpecError, DomainError, ParseError
from .expr import as_expr, constant_value, eval_jet, eval_real, to_text, variables

REGULARITY_GRID = 256
REGULARITY_TOL = 1e-12


@dataclass(frozen=True)
class PlaneCurve:
    kind: str  # "graph" or "parametric"
    x: object  # Expr; for graphs the identity in x
    y: object
    domain: tuple
    var: str = field(default="s")
    source: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        lo, hi = self.domain
        if not lo < hi:
            raise CurveSpecError(f"domain must satisfy lo < hi, got [{lo}, {hi}]")

    @property
    def lo(self):
        return self.domain[0]

    @property
    def hi(self):
        return self.domain[1]

    def jets(self, s, K):
        """Jets of ``x(s')`` and ``y(s')`` at ``s`` through order ``K``."""
        v = J.jet_variable(s, K)
        env = {self.var: v}
        return eval_jet(self.x, env), eval_jet(self.y, env)

    def point(self, s):
        env = {self.var: s}
        return np.array([eval_real(self.x, env), eval_real(self.y, env)])

    def points(self, ss):
        return np.array([self.point(s) for s in ss])

    def velocity(self, s):
        X, Y = self.jets(s, 1)
        return np.array([X.coeffs[1], Y.coeffs[1]])

    def curvature_jet(self, s, K):
        """Jet in ``s`` of the signed curvature, through order ``K``."""
        X, Y = self.jets(s, K + 2)
        dx, dy = X.deriv(), Y.deriv()
        ddx, ddy = dx.deriv(), dy.deriv()
        dx, dy = dx.truncate(K), dy.truncate(K)
        speed2 = dx * dx + dy * dy
        return (dx * ddy - dy * ddx) / J.power(speed2, 1.5)

    def check_regular(self, grid=REGULARITY_GRID, tol=REGULARITY_TOL):
        for s in np.linspace(self.lo, self.hi, grid):
            if np.hypot(*self.velocity(s)) < tol:
                raise CurveSpecError(f"parameterization is singular at s={s:.6g}")

    def spec_text(self):
        lo, hi = self.domain
        if self.kind == "graph":
            body = f"f={to_text(self.y)}"
        else:
            body = f"x={to_text(self.x)}\ny={to_text(self.y)}"
        return f"kind={self.kind}\n{body}\ndomain=[{lo!r},{hi!r}]\n"

    def describe(self):
        d = {"kind": self.kind, "domain": list(self.domain)}
        if self.kind == "graph":
            d["f"] = self.source.get("f", to_text(self.y))
        else:
            d["x"] = self.source.get("x", to_text(self.x))
            d["y"] = self.source.get("y", to_text(self.y))
        return d


def graph(f, domain=(-1.0, 1.0)):
    """The curve ``s -> (s, f(s))``; ``f`` is written in the variable ``x``."""
    f_src = f if isinstance(f, str) else to_text(f)
    f = as_expr(f)
    extra = variables(f) - {"x"}
    if extra:
        raise CurveSpecError(f"graph expression may only use x, found {sorted(extra)}")
    return PlaneCurve("graph", as_expr("x"), f, (float(domain[0]), float(domain[1])), var="x",
                      source={"f": f_src})


def parametric(x, y, domain=(0.0, 1.0), check=True):
    src = {"x": x if isinstance(x, str) else to_text(x), "y": y if isinstance(y, str) else to_text(y)}
    x, y = as_expr(x), as_expr(y)
    extra = (variables(x) | variables(y)) - {"s"}
    if extra:
        raise CurveSpecError(f"parametric components may only use s, found {sorted(extra)}")
    c = PlaneCurve("parametric", x, y, (float(domain[0]), float(domain[1])), var="s", source=src)
    if check:
        try:
            c.check_regular()
        except DomainError as exc:
            raise CurveSpecError(f"curve not evaluable on its domain: {exc}") from exc
    return c


def _parse_domain(text):
    t = text.strip()
    if not (t.startswith("[") and t.endswith("]")):
        raise CurveSpecError(f"domain must look like [lo,hi], got {text!r}")
    parts = t[1:-1].split(",")
    if len(parts) != 2:
        raise CurveSpecError(f"domain must have two endpoints, got {text!r}")
    try:
        return tuple(constant_value(p) for p in parts)
    except (ParseError, ValueError) as exc:
        raise CurveSpecError(f"bad domain endpoint in {text!r}: {exc}") from exc


_KEYS = {"kind", "f", "x", "y", "domain"}


def parse_curve_spec(text):
    fields = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise CurveSpecError(f"line {lineno}: expected key=value, got {raw!r}")
        key, value = (p.strip() for p in line.split("=", 1))
        if key not in _KEYS:
            raise CurveSpecError(f"line {lineno}: unknown key {key!r}")
        if key in fields:
            raise CurveSpecError(f"line {lineno}: duplicate key {key!r}")
        fields[key] = value
    kind = fields.get("kind")
    if kind not in ("graph", "parametric"):
        raise CurveSpecError(f"kind must be graph or parametric, got {kind!r}")
    if "domain" not in fields:
        raise CurveSpecError("missing domain")
    domain = _parse_domain(fields["domain"])
    try:
        if kind == "graph":
            if "f" not in fields or {"x", "y"} & fields.keys():
                raise CurveSpecError("graph spec needs f= and no x=/y=")
            return graph(fields["f"], domain)
        if "f" in fields or not {"x", "y"} <= fields.keys():
            raise CurveSpecError("parametric spec needs x= and y= and no f=")
        return parametric(fields["x"], fields["y"], domain)
    except ParseError as exc:
        raise CurveSpecError(f"bad expression: {exc}") from exc


def load_curve(path):
    with open(path, encoding="utf-8") as fh:
        return parse_curve_spec(fh.read())


# named curves used throughout the examples and figures

def ellipse(a=2.0, b=1.0, domain=(0.0, 2 * np.pi)):
    return parametric(f"{a!r}*cos(s)", f"{b!r}*sin(s)", domain)


def unit_circle(domain=(0.0, 2 * np.pi)):
    return parametric("cos(s)", "sin(s)", domain)


def log_spiral(pitch=0.2, domain=(0.0, 3 * np.pi)):
    return parametric(f"exp({pitch!r}*s)*cos(s)", f"exp({pitch!r}*s)*sin(s)", domain)


def astroid(domain=(0.05, np.pi / 2 - 0.05)):
    return parametric("cos(s)^3", "sin(s)^3", domain)
