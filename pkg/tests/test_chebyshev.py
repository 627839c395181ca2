import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from osculant.chebyshev import (annihilator_coefficients, apply_D, cheb_system, find_flexes,
                                osculating_element, osculation_mismatch, trig_basis,
                                verify_disjoint_cheb, wronskian)
from osculant.errors import PreconditionError, SingularSystem
from osculant.expr import jet_at
from osculant.taylor import osculating_polynomial

TS = np.linspace(0, 2 * math.pi, 64)


def test_trig_basis():
    assert trig_basis(1).labels() == ["1.0", "cos(x)", "sin(x)"]
    assert trig_basis(2).N == 5
    with pytest.raises(ValueError):
        trig_basis(0)


def test_wronskian_examples():
    assert wronskian(trig_basis(1), 0.7) == pytest.approx(1, abs=1e-12)
    assert wronskian(trig_basis(1), 0.0) == pytest.approx(1, abs=1e-12)
    poly = cheb_system(["1", "x", "x^2"], (0, 10))
    assert wronskian(poly, 5) == pytest.approx(2, abs=1e-12)
    with pytest.raises(SingularSystem):
        cheb_system(["1", "x", "2*x"], (0, 1))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_wronskian_constant(n):
    sys = trig_basis(n)
    w = np.array([wronskian(sys, t) for t in TS])
    assert np.abs(w - w[0]).max() <= 1e-9 * abs(w[0])


def test_annihilator():
    assert annihilator_coefficients(1) == [1, 1]
    assert annihilator_coefficients(2) == [4, 5, 1]
    for n in (1, 2, 3):
        for b in trig_basis(n).basis:
            assert max(abs(apply_D(b, n, t)) for t in TS) <= 1e-9


def test_osculating_element_examples():
    sys = trig_basis(1)
    assert np.allclose(osculating_element(sys, "x^3", 0).coeffs, 0, atol=1e-15)
    c, a, b = osculating_element(sys, "x^3", 1).trig_form()
    assert c == pytest.approx(7, abs=1e-9)
    assert a[0] == pytest.approx(-6 * math.cos(1) - 3 * math.sin(1), abs=1e-9)
    assert b[0] == pytest.approx(3 * math.cos(1) - 6 * math.sin(1), abs=1e-9)


def test_polynomial_basis_reduces_to_taylor():
    sys = cheb_system(["1", "x", "x^2"], (-3, 3))
    for t in (-1.0, 0.3, 1.0, 2.0):
        assert np.allclose(osculating_element(sys, "x^3", t).coeffs,
                           osculating_polynomial("x^3", t, 2).power_coeffs(), rtol=1e-10, atol=1e-10)


def test_apply_D_examples():
    for t in np.linspace(0, 3, 32):
        assert apply_D("sin(2*x)", 1, t) == pytest.approx(-6 * math.cos(2 * t), abs=1e-9)
        assert abs(apply_D("sin(x)", 1, t)) <= 1e-12
        assert apply_D("x", 1, t) == pytest.approx(1, abs=1e-12)


def test_flex_examples():
    assert find_flexes("sin(2*x)", 1, (0.1, 3)) == pytest.approx([math.pi / 4, 3 * math.pi / 4], abs=1e-9)
    assert find_flexes("x^3", 1, (0.5, 2)) == []
    r = find_flexes("cos(x)", 1, (0, 3))
    assert r == [] and r.degenerate


def test_flex_is_hyper_osculation():
    # at a flex the osculant matches one more derivative
    assert abs(osculation_mismatch(trig_basis(1), "sin(2*x)", math.pi / 4)) < 1e-9
    assert abs(osculation_mismatch(trig_basis(1), "sin(2*x)", 1.2)) > 1e-2


def test_verify_examples():
    sys = trig_basis(1)
    assert verify_disjoint_cheb(sys, "x^3", (0.5, 1.5), (-math.pi, math.pi), t_samples=16).verdict == "disjoint"
    assert verify_disjoint_cheb(sys, "sin(2*x)", (0.9, 1.4), (0, 2 * math.pi), t_samples=16).verdict == "disjoint"
    with pytest.raises(PreconditionError):
        verify_disjoint_cheb(sys, "sin(2*x)", (0.6, 0.9), (0, 2 * math.pi))


@settings(max_examples=100)
@given(st.sampled_from([1, 2, 3]), st.sampled_from(["x^3", "exp(x)", "1/(4-x)"]), st.floats(0.2, 2))
def test_osculation_order(n, f, t):
    g = osculating_element(trig_basis(n), f, t)
    want = jet_at(f, t, 2 * n).derivatives()
    got = g.jet(t, 2 * n).derivatives()
    assert np.allclose(got, want, rtol=1e-9, atol=1e-9 * np.abs(want).max())
