"""Command-line interface: ``osculant <subcommand> ...``.

Exit codes: 0 success or verified, 1 intersection or bound violation found,
2 usage or input error, 3 inconclusive or degenerate.
"""

import argparse
import json
import math
import os
import sys

import numpy as np

from . import __version__
from . import algebraic as alg
from . import chebyshev as cheb
from . import taitkneser as tk
from . import taylor
from .curves import graph, load_curve, parametric
from .errors import OsculantError
from .expr import constant_value
from .figures import MANIFEST, render_figure
from .report import VerificationReport, _plain


class UsageError(Exception):
    pass


def _real(text):
    try:
        v = constant_value(text)
    except (OsculantError, ValueError) as exc:
        raise argparse.ArgumentTypeError(f"not a real number: {text!r}") from exc
    if not math.isfinite(v):
        raise argparse.ArgumentTypeError(f"not finite: {text!r}")
    return v


def _pos_int(text):
    try:
        v = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from exc
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1: {text!r}")
    return v


def _interval(text):
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"interval must be lo,hi: {text!r}")
    lo, hi = (_real(p) for p in parts)
    if not lo < hi:
        raise argparse.ArgumentTypeError(f"interval needs lo < hi: {text!r}")
    return (lo, hi)


def _reals(text):
    return [_real(p) for p in text.split(",") if p.strip()]


def _add_curve_args(p, graph_ok=True):
    g = p.add_argument_group("curve")
    g.add_argument("--curve", help="curve spec file (key=value lines)")
    if graph_ok:
        g.add_argument("--f", help="function of x (graph curve)")
    g.add_argument("--x", dest="cx", help="x(s) of a parametric curve")
    g.add_argument("--y", dest="cy", help="y(s) of a parametric curve")
    g.add_argument("--domain", type=_interval, help="curve domain lo,hi")


def _curve(args):
    given = [bool(args.curve), bool(getattr(args, "f", None)), bool(args.cx or args.cy)]
    if sum(given) != 1:
        raise UsageError("give exactly one of --curve, --f, or --x/--y")
    if args.curve:
        return load_curve(args.curve)
    domain = args.domain
    if domain is None:
        domain = args.interval if getattr(args, "interval", None) else None
    if domain is None:
        raise UsageError("--domain is required for inline curves")
    if args.cx or args.cy:
        if not (args.cx and args.cy):
            raise UsageError("--x and --y go together")
        return parametric(args.cx, args.cy, domain)
    return graph(args.f, domain)


def _need(args, *names):
    for n in names:
        if getattr(args, n, None) is None:
            raise UsageError(f"--{n.replace('_', '-')} is required here")


def build_parser():
    ap = argparse.ArgumentParser(prog="osculant", description="Osculating curves and functions.")
    ap.add_argument("--version", action="version", version=f"osculant {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("osculate", help="construct an osculating object")
    p.add_argument("--kind", required=True, choices=["taylor", "trig", "circle", "algebraic", "mobius"])
    _add_curve_args(p)
    p.add_argument("--t", "--s", dest="t", type=_real, required=True, help="point of contact")
    p.add_argument("--n", type=_pos_int, help="Taylor degree")
    p.add_argument("--degree", type=_pos_int, help="trigonometric or algebraic degree")
    p.add_argument("--csv", help="write algebraic coefficients as a CSV row")

    p = sub.add_parser("vertices", help="curvature vertices, or Taylor hyper-osculation points with --n")
    _add_curve_args(p)
    p.add_argument("--interval", type=_interval, required=True)
    p.add_argument("--n", type=_pos_int)

    p = sub.add_parser("flexes", help="flexes for trigonometric polynomials of degree n")
    p.add_argument("--f", required=True)
    p.add_argument("--degree", type=_pos_int, required=True)
    p.add_argument("--interval", type=_interval, required=True)

    p = sub.add_parser("extactic", help="d-extactic points of a curve")
    _add_curve_args(p)
    p.add_argument("--degree", type=_pos_int, required=True)
    p.add_argument("--interval", type=_interval, required=True)

    p = sub.add_parser("schwarzian", help="Schwarzian derivative at t, or its zeros on an interval")
    p.add_argument("--f", required=True)
    p.add_argument("--t", type=_real)
    p.add_argument("--interval", type=_interval)

    p = sub.add_parser("verify", help="check pairwise disjointness of an osculating family")
    p.add_argument("--kind", required=True,
                   choices=["taylor", "trig", "circle", "mobius", "conic", "cubic", "quartic"])
    _add_curve_args(p)
    p.add_argument("--n", type=_pos_int, help="Taylor degree")
    p.add_argument("--degree", type=_pos_int, default=1, help="trigonometric degree")
    p.add_argument("--interval", type=_interval)
    p.add_argument("--s-values", type=_reals, help="explicit sample parameters (algebraic kinds)")
    p.add_argument("--samples", type=_pos_int)
    p.add_argument("--window", type=_interval)
    p.add_argument("--x-samples", type=_pos_int, default=401)
    p.add_argument("--x-max", type=_real)
    p.add_argument("--grid", type=_pos_int, default=512)
    p.add_argument("--margin", type=_real, default=taylor.HYPER_MARGIN)
    p.add_argument("--gap-floor", type=_real, default=taylor.GAP_FLOOR)
    p.add_argument("--format", choices=["json", "text"], default="json")
    p.add_argument("--out", help="write the report here instead of stdout")

    p = sub.add_parser("multiplicity", help="infinitesimal intersection multiplicity or index")
    p.add_argument("--family", required=True, choices=["taylor", "circle", "conic", "line", "mobius"])
    _add_curve_args(p)
    p.add_argument("--n", type=_pos_int, help="Taylor degree")
    p.add_argument("--s", type=_real, required=True)
    p.add_argument("--t", type=_real, help="curve parameter (default: the point of contact)")
    p.add_argument("--index", action="store_true", help="sum multiplicities over the curve")
    p.add_argument("--window", type=_interval, help="x-window for graph families")
    p.add_argument("--t-samples", type=_pos_int, default=512)
    p.add_argument("--max-order", type=_pos_int, default=8)
    p.add_argument("--format", choices=["json", "text"], default="json")
    p.add_argument("--out")

    p = sub.add_parser("figure", help="render a figure as SVG")
    p.add_argument("--id", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--csv", help="also dump every polyline as CSV")
    return ap


def print_report(report, fmt="json", stream=None):
    stream = sys.stdout if stream is None else stream
    text = report.to_json() if fmt == "json" else report.to_text()
    stream.write(text + "\n")


def _emit(obj, stream=None):
    stream = sys.stdout if stream is None else stream
    stream.write(json.dumps(_plain(obj), sort_keys=True, indent=2) + "\n")


def _roots_payload(roots):
    return {"roots": [float(r) for r in roots], "flagged": [float(r) for r in roots.flagged],
            "degenerate": bool(roots.degenerate), "scan": roots.params()}


def _cmd_osculate(args):
    if args.kind == "taylor":
        _need(args, "f", "n")
        g = taylor.osculating_polynomial(args.f, args.t, args.n)
        _emit({"kind": "taylor", "f": args.f, "t": g.t, "n": g.n, "local_coeffs": g.local_coeffs,
               "power_coeffs": g.power_coeffs()})
    elif args.kind == "trig":
        _need(args, "f", "degree")
        g = cheb.osculating_element(cheb.trig_basis(args.degree), args.f, args.t)
        c, a, b = g.trig_form()
        _emit({"kind": "trig", "f": args.f, "t": g.t, "degree": args.degree, "c": c, "a": a, "b": b})
    elif args.kind == "mobius":
        _need(args, "f")
        _emit({"kind": "mobius", "f": args.f, **alg.osculating_mobius(args.f, args.t).to_dict()})
    elif args.kind == "circle":
        _emit({"kind": "circle", **alg.osculating_circle(_curve(args), args.t).to_dict()})
    else:
        _need(args, "degree")
        c = alg.osculating_algebraic_curve(_curve(args), args.t, args.degree)
        out = {"kind": "algebraic", "s": args.t, **c.to_dict()}
        if args.degree == 2:
            out["conic_type"] = alg.classify_conic(c)
        if args.csv:
            with open(args.csv, "w", encoding="utf-8") as fh:
                fh.write(c.to_csv_row())
        _emit(out)
    return 0


def _cmd_vertices(args):
    if args.n is not None:
        _need(args, "f")
        roots = taylor.find_polynomial_vertices(args.f, args.interval, args.n)
    else:
        roots = alg.find_vertices(_curve(args), args.interval)
    _emit(_roots_payload(roots))
    return 3 if roots.degenerate else 0


def _cmd_flexes(args):
    roots = cheb.find_flexes(args.f, args.degree, args.interval)
    _emit(_roots_payload(roots))
    return 3 if roots.degenerate else 0


def _cmd_extactic(args):
    if args.degree > 4:
        raise UsageError("--degree must be at most 4")
    roots = alg.find_extactic_points(_curve(args), args.interval, args.degree)
    _emit(_roots_payload(roots))
    return 3 if roots.degenerate else 0


def _cmd_schwarzian(args):
    if (args.t is None) == (args.interval is None):
        raise UsageError("give exactly one of --t or --interval")
    if args.t is not None:
        _emit({"f": args.f, "t": args.t, "schwarzian": alg.schwarzian(args.f, args.t)})
        return 0
    roots = alg.find_schwarzian_zeros(args.f, args.interval)
    _emit(_roots_payload(roots))
    return 3 if roots.degenerate else 0


def _cmd_verify(args):
    k = args.kind
    if k == "taylor":
        _need(args, "f", "n", "interval")
        rep = taylor.verify_disjoint_graphs(args.f, args.interval, args.n, t_samples=args.samples or 64,
                                            window=args.window, x_samples=args.x_samples,
                                            x_max=args.x_max, margin=args.margin, gap_floor=args.gap_floor)
    elif k == "trig":
        _need(args, "f", "interval")
        window = args.window or (-math.pi, math.pi)
        rep = cheb.verify_disjoint_cheb(cheb.trig_basis(args.degree), args.f, args.interval, window,
                                        t_samples=args.samples or 64, x_samples=args.x_samples,
                                        margin=args.margin, gap_floor=args.gap_floor)
    elif k == "mobius":
        _need(args, "f", "interval", "window")
        rep = tk.verify_mobius_family(args.f, args.interval, args.window, samples=args.samples or 16,
                                      x_samples=max(args.x_samples, 801), gap_floor=args.gap_floor)
    elif k == "circle":
        _need(args, "interval")
        rep = tk.verify_circle_family(_curve(args), args.interval, samples=args.samples or 48)
    else:
        d = {"conic": 2, "cubic": 3, "quartic": 4}[k]
        curve = _curve(args)
        if args.s_values:
            ss = args.s_values
        else:
            _need(args, "interval")
            ss = np.linspace(*args.interval, args.samples or 16).tolist()
        rep = tk.verify_algebraic_family(curve, ss, d, grid=args.grid,
                                         check_extactic=len(ss) > 1 and k != "quartic")
    return rep


def _family(args):
    fam = args.family
    if fam == "taylor":
        _need(args, "f", "n")
        return tk.graph_family(args.f, args.n, args.window or (args.s - 3.0, args.s + 3.0))
    if fam == "mobius":
        _need(args, "f")
        return tk.mobius_family(args.f, args.window or (args.s - 3.0, args.s + 3.0))
    curve = _curve(args)
    if fam == "circle":
        return tk.circle_family(curve)
    return tk.conic_family(curve, 2 if fam == "conic" else 1)


def _cmd_multiplicity(args):
    fam = _family(args)
    if args.index:
        return tk.infinitesimal_index(fam, args.s, t_samples=args.t_samples, max_order=args.max_order)
    t = fam.tangency(args.s) if args.t is None else args.t
    m = tk.multiplicity_detail(fam, args.s, t, args.max_order)
    m.pop("coeffs")
    rep = VerificationReport(theorem="infinitesimal-multiplicity", family=fam.kind, verdict="verified")
    rep.params = {"s": args.s, "t": t, "max_order": args.max_order, **fam.info}
    rep.tolerances = {"fd_step": tk.FD_STEP, "order_tol": tk.ORDER_TOL, "noise_band": tk.NOISE_BAND}
    rep.multiplicities.append(m)
    return rep


def _cmd_figure(args):
    if args.id not in MANIFEST["figures"]:
        raise UsageError(f"--id must be between 1 and {len(MANIFEST['figures'])}")
    _, reports = render_figure(args.id, args.out, args.csv)
    _emit({"figure": args.id, "out": args.out, "csv": args.csv, "manifest_version": MANIFEST["version"],
           "verdicts": [r.verdict for r in reports]})
    return 0


COMMANDS = {
    "osculate": _cmd_osculate, "vertices": _cmd_vertices, "flexes": _cmd_flexes,
    "extactic": _cmd_extactic, "schwarzian": _cmd_schwarzian, "verify": _cmd_verify,
    "multiplicity": _cmd_multiplicity, "figure": _cmd_figure,
}


def _check_threads():
    raw = os.environ.get("OSCULANT_THREADS")
    if raw is None:
        return
    try:
        ok = int(raw) >= 1
    except ValueError:
        ok = False
    if not ok:
        raise UsageError(f"OSCULANT_THREADS must be an integer >= 1, got {raw!r}")


def _attach_negatives(argv):
    # argparse reads "-1,1" as an option; glue such values onto their flag
    out = []
    for tok in argv:
        if (out and out[-1].startswith("--") and "=" not in out[-1]
                and len(tok) > 1 and tok[0] == "-" and (tok[1].isdigit() or tok[1] == ".")):
            out[-1] = f"{out[-1]}={tok}"
        else:
            out.append(tok)
    return out


def run(argv=None):
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = parser.parse_args(_attach_negatives(argv))
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        _check_threads()
        result = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"osculant: error: {exc}", file=sys.stderr)
        return 2
    except OsculantError as exc:
        print(f"osculant: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"osculant: error: {exc}", file=sys.stderr)
        return 2
    if isinstance(result, VerificationReport):
        result.params["cli"] = {k: v for k, v in sorted(vars(args).items()) if k not in ("out", "format")}
        if getattr(args, "out", None):
            with open(args.out, "w", encoding="utf-8") as fh:
                print_report(result, args.format, fh)
        else:
            print_report(result, args.format)
        return result.exit_code
    return result


def main():
    sys.exit(run())
