"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line."""

import math
import time
from contextlib import contextmanager

import numpy as np
import pytest

import test_expr
import test_jet
from osculant.algebraic import (AlgebraicCurve, extactic_indicator, find_schwarzian_zeros, find_vertices,
                                osculating_algebraic_curve, osculating_circle, osculating_mobius, schwarzian)
from osculant.contour import trace_oval
from osculant.chebyshev import apply_D, osculating_element, trig_basis, verify_disjoint_cheb, wronskian
from osculant.curves import ellipse, graph, log_spiral, parametric
from osculant.taitkneser import (circle_family, conic_family, graph_family, infinitesimal_index,
                                 infinitesimal_multiplicity, verify_algebraic_family, verify_circle_family,
                                 verify_mobius_family)
from osculant.taylor import osculating_polynomial, verify_disjoint_graphs


@pytest.fixture
def criterion(capsys):
    @contextmanager
    def run(number, title, limit=None):
        start = time.perf_counter()
        ok = False
        try:
            yield
            elapsed = time.perf_counter() - start
            ok = limit is None or elapsed < limit
            if not ok:
                raise AssertionError(f"runtime {elapsed:.3f}s exceeds {limit}s")
        finally:
            elapsed = time.perf_counter() - start
            with capsys.disabled():
                print(f"\n{'PASS' if ok else 'FAIL'} criterion {number:2d}: {title} ({elapsed:.3f}s)")
    return run


def _coef_dist(a, b):
    a, b = np.asarray(a), np.asarray(b)
    return min(np.linalg.norm(a - b), np.linalg.norm(a + b))


# k-th derivatives written out by hand, independent of the jet machinery
DERIVS = {
    "x^3": lambda t, k: math.perm(3, k) * t ** (3 - k) if k <= 3 else 0.0,
    "x^4": lambda t, k: math.perm(4, k) * t ** (4 - k) if k <= 4 else 0.0,
    "sin(x)": lambda t, k: math.sin(t + k * math.pi / 2),
    "exp(x)": lambda t, k: math.exp(t),
}


def test_c01_taylor_closed_form(criterion):
    osculating_polynomial("x^3", 1, 2)  # warm the parser cache out of the timed region
    with criterion(1, "Taylor closed form", limit=1e-3):
        g = osculating_polynomial("x^3", 1, 2)
    assert np.abs(g.local_coeffs - [1, 3, 3]).max() <= 1e-12
    assert np.abs(g.power_coeffs() - [1, -3, 3]).max() <= 1e-12


def test_c02_family_derivative_identity(criterion):
    rng = np.random.default_rng(20260)
    with criterion(2, "family-derivative identity", limit=1.0):
        worst = 0.0
        for f, d in DERIVS.items():
            for n in (1, 2, 3):
                for t, x in zip(rng.uniform(0.2, 1.5, 20), rng.uniform(-2, 2, 20)):
                    def g(tt):
                        return osculating_polynomial(f, tt, n)(x)
                    # Richardson-extrapolated central difference in t
                    h = 1e-3
                    d1 = (g(t + h) - g(t - h)) / (2 * h)
                    d2 = (g(t + h / 2) - g(t - h / 2)) / h
                    fd = (4 * d2 - d1) / 3
                    want = d(t, n + 1) * (x - t) ** n / math.factorial(n)
                    worst = max(worst, abs(fd - want) / max(1.0, abs(want)))
        assert worst <= 1e-5, worst


def test_c03_taylor_certification(criterion):
    with criterion(3, "Taylor disjointness certification", limit=5.0):
        rep = verify_disjoint_graphs("x^3", (0.5, 1.5), 2, t_samples=64, window=(-3, 3))
        assert rep.verdict == "disjoint" and len(rep.pairs) == 2016
        assert min(p["min_gap"] for p in rep.pairs) > 0
        assert rep.checks["monotone_in_t"] is True
        rep = verify_disjoint_graphs("x^4", (0.25, 1), 3, x_max=3)
        assert rep.verdict == "disjoint"


def test_c04_trig_system(criterion):
    with criterion(4, "trig Chebyshev system"):
        sys = trig_basis(1)
        ts = np.linspace(-math.pi, math.pi, 64)
        assert max(abs(wronskian(sys, t) - 1) for t in ts) <= 1e-10
        for n in (2, 3):
            w = np.array([wronskian(trig_basis(n), t) for t in ts])
            assert np.abs(w - w[0]).max() <= 1e-9 * abs(w[0])
        c, a, b = osculating_element(sys, "x^3", 1).trig_form()
        # c + a cos x + b sin x matching 1, 3, 6 at x = 1, solved by hand
        want = (7.0, -6 * math.cos(1) - 3 * math.sin(1), 3 * math.cos(1) - 6 * math.sin(1))
        assert np.abs(np.array([c, a[0], b[0]]) - want).max() <= 1e-6
        assert np.allclose(want, (7, -5.7663, -3.4279), atol=1e-4)
        for t in np.linspace(0, 2 * math.pi, 32):
            assert abs(apply_D("sin(2*x)", 1, t) + 6 * math.cos(2 * t)) <= 1e-9


def test_c05_trig_certification(criterion):
    with criterion(5, "trig disjointness certification", limit=5.0):
        rep = verify_disjoint_cheb(trig_basis(1), "x^3", (0.5, 1.5), (-math.pi, math.pi))
        assert rep.verdict == "disjoint"
        assert min(p["min_gap"] for p in rep.pairs) > 0


def test_c06_self_osculation(criterion):
    with criterion(6, "self-osculation"):
        curve, target = ellipse(), AlgebraicCurve.from_expr("x^2/4 + y^2 - 1")
        for s in np.linspace(0.1, 6.1, 16):
            assert _coef_dist(osculating_algebraic_curve(curve, s, 2).coeffs, target.coeffs) <= 1e-8
            assert abs(extactic_indicator(curve, s, 2)) <= 1e-8
        c = osculating_algebraic_curve(parametric("s", "s^3", (-2, 2)), 1.0, 3)
        assert _coef_dist(c.coeffs, AlgebraicCurve.from_expr("y - x^3", 3).coeffs) <= 1e-8


def test_c07_circle_geometry(criterion):
    with criterion(7, "circle geometry"):
        circ = osculating_circle(ellipse(), 0.0)
        assert math.dist(circ.center, (1.5, 0)) <= 1e-12 and abs(circ.radius - 0.5) <= 1e-12
        v = find_vertices(ellipse(), (-0.1, 6.2))
        assert len(v) == 4
        assert np.abs(np.array(v) - [0, math.pi / 2, math.pi, 3 * math.pi / 2]).max() <= 1e-8
        spiral = log_spiral(domain=(0, 3 * math.pi))
        assert find_vertices(spiral, (0, 3 * math.pi)) == []
        rep = verify_circle_family(spiral, (0, 3 * math.pi), 48)
        assert rep.verdict == "nested" and len(rep.pairs) == 48 * 47 // 2
        assert all(p["relation"] == "nested" and p["min_gap"] > 0 for p in rep.pairs)


def test_c08_schwarzian_mobius(criterion):
    with criterion(8, "Schwarzian and Mobius osculants"):
        for t in np.linspace(-1, 2, 7):
            assert abs(schwarzian("exp(x)", t) + 0.5) <= 1e-12
            assert abs(schwarzian("(2*x+1)/(x+3)", t)) <= 1e-12
        m = osculating_mobius("exp(x)", 0)
        assert max(abs(m.p - 2), abs(m.q + 1), abs(m.c + 4)) <= 1e-10
        assert find_schwarzian_zeros("exp(x)", (0, 1)) == []
        rep = verify_mobius_family("exp(x)", (0, 1), (-4, 4), 16)
        assert rep.verdict == "disjoint"


def test_c09_algebraic_families(criterion):
    with criterion(9, "osculating conics and cubic ovals", limit=60.0):
        rep = verify_algebraic_family(graph("exp(x)", (-1, 2)), np.linspace(0, 1, 16), 2)
        assert rep.verdict == "disjoint" and len(rep.pairs) == 120
        # the osculating conics of exp are hyperbolas, not ellipses
        assert rep.checks["conic_types"] == ["hyperbola"]
        rep = verify_algebraic_family(log_spiral(domain=(0, 10)), np.linspace(0, 3 * math.pi, 8), 3)
        assert rep.verdict == "disjoint" and len(rep.pairs) == 28


def test_c10_quartic_counterexample(criterion):
    with criterion(10, "astroid quartic counterexample"):
        astroid = parametric("cos(s)^3", "sin(s)^3", (0.05, 1.5))
        a = verify_algebraic_family(astroid, [0.6, 0.7], 4, grid=512)
        b = verify_algebraic_family(astroid, [0.6, 0.7], 4, grid=1024)
        assert a.verdict == b.verdict == "intersecting"
        # cell of the finer grid over the fitted box of the oval at s=0.6
        q = osculating_algebraic_curve(astroid, 0.6, 4)
        lo, hi = trace_oval(q, q.tangency, grid=1024).bbox()
        cell = 1.2 * (hi - lo).max() / 1024
        assert math.dist(a.witness, b.witness) < 2 * cell


def test_c11_multiplicities(criterion):
    with criterion(11, "infinitesimal multiplicities", limit=30.0):
        fam = graph_family("x^3", 2, (-3, 3))
        assert infinitesimal_multiplicity(fam, 1.0, 1.0) == 2
        assert all(infinitesimal_multiplicity(fam, 1.0, t) == 0 for t in (-2.0, 0.0, 0.5, 2.0))
        exp = graph("exp(x)", (-1, 2))
        conics = conic_family(exp)
        assert infinitesimal_multiplicity(conics, 0.5, conics.tangency(0.5)) == 4
        lines = conic_family(exp, 1)
        assert infinitesimal_multiplicity(lines, 0.5, lines.tangency(0.5)) == 1
        spiral = log_spiral(domain=(0, 3 * math.pi))
        for family, s, d in [(conics, 0.0, 2), (conics, 0.5, 2), (conics, 1.0, 2), (lines, 0.5, 1),
                             (circle_family(spiral), 2.0, 2)]:
            rep = infinitesimal_index(family, s)
            assert rep.index <= d * d
        assert infinitesimal_index(conics, 0.5).index == 4


def test_c12_kernel_properties(criterion):
    suites = [test_jet.test_ring_axioms, test_jet.test_finite_difference_crosscheck,
              test_expr.test_parse_print_roundtrip, test_jet.test_div_mul_roundtrip]
    assert test_jet.N_CASES >= 1000 and test_expr.N_CASES >= 1000
    with criterion(12, "kernel property suites", limit=30.0):
        for suite in suites:
            suite()
