import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.polynomial import polynomial as P

from osculant import jet as J
from osculant.errors import DivisionByZeroJet, DomainError, OrderExceeded
from osculant.jet import Jet, derivative, jet_arith, jet_constant, jet_elementary, jet_variable

N_CASES = 1000


def test_variable_examples():
    assert jet_variable(2, 3).coeffs.tolist() == [2, 1, 0, 0]
    assert jet_variable(0, 0).coeffs.tolist() == [0]
    assert jet_variable(-1.5, 2).coeffs.tolist() == [-1.5, 1, 0]


def test_arith_examples():
    a = Jet(0, [1, 1, 0])
    assert jet_arith(a, a, "mul").coeffs.tolist() == [1, 2, 1]
    assert jet_arith(Jet(0, [1, 2, 3]), Jet(0, [0, -2, 1]), "add").coeffs.tolist() == [1, 0, 4]
    q = jet_arith(Jet(0, [1, 0, 0]), a, "div")
    assert np.allclose(q.coeffs, [1, -1, 1], atol=1e-15)
    assert np.allclose((q * a).coeffs, [1, 0, 0], atol=1e-15)


def test_elementary_examples():
    assert np.allclose(jet_elementary(Jet(0, [0, 1, 0]), "exp").coeffs, [1, 1, 0.5])
    assert np.allclose(jet_elementary(Jet(0, [0, 1, 0, 0]), "sin").coeffs, [0, 1, 0, -1 / 6])
    cube = jet_elementary(jet_variable(2, 3), "pow", 3)
    assert cube.coeffs.tolist() == [8, 12, 6, 1]
    assert derivative(cube, 2) == 12
    assert derivative(cube, 0) == cube.value
    assert derivative(Jet(0, [1, 1, 0.5, 1 / 6]), 3) == pytest.approx(1, abs=1e-15)


def test_errors():
    with pytest.raises(DivisionByZeroJet):
        Jet(0, [1, 0]) / Jet(0, [0, 1])
    with pytest.raises(DomainError):
        J.log(Jet(0, [-1.0, 1]))
    with pytest.raises(DomainError):
        J.power(Jet(0, [-1.0, 1]), 0.5)
    with pytest.raises(OrderExceeded):
        derivative(jet_variable(0, 2), 3)
    with pytest.raises(OrderExceeded):
        jet_variable(0, J.MAX_ORDER + 1)
    with pytest.raises(ValueError):
        Jet(0, [1, 2]) + Jet(1, [1, 2])
    with pytest.raises(AttributeError):
        jet_variable(0, 1).base = 3


def test_max_order_supported():
    e = J.exp(jet_variable(0, J.MAX_ORDER))
    assert derivative(e, J.MAX_ORDER) == pytest.approx(1.0, rel=1e-12)


def test_tan_and_fractional_power():
    t = J.tan(jet_variable(0.3, 4))
    assert derivative(t, 1) == pytest.approx(1 / math.cos(0.3) ** 2, rel=1e-14)
    r = J.power(jet_variable(4.0, 2), 0.5)
    assert np.allclose(r.coeffs, [2, 0.25, -1 / 64])


# -- randomized suites --------------------------------------------------------

orders = st.integers(0, 10)
coef = st.floats(-3, 3, allow_nan=False)


@st.composite
def jets(draw, n=1, K=None):
    K = draw(orders) if K is None else K
    t = draw(st.floats(-2, 2))
    return [Jet(t, draw(st.lists(coef, min_size=K + 1, max_size=K + 1))) for _ in range(n)]


def _close(x, y, rtol, scale):
    return np.allclose(x.coeffs, y.coeffs, rtol=rtol, atol=rtol * max(1.0, scale))


@settings(max_examples=N_CASES)
@given(jets(3))
def test_ring_axioms(abc):
    a, b, c = abc
    scale = (np.abs(a.coeffs).sum() * np.abs(b.coeffs).sum() * np.abs(c.coeffs).sum())
    assert _close((a * b) * c, a * (b * c), 1e-13, scale)
    assert _close(a * (b + c), a * b + a * c, 1e-13, scale)
    assert _close(a * b, b * a, 1e-13, scale)


@settings(max_examples=N_CASES)
@given(st.integers(0, 8), st.integers(0, 8), st.floats(-2, 2),
       st.lists(coef, min_size=18, max_size=18))
def test_polynomial_oracle(dp, dq, t, raw):
    p, q = np.array(raw[: dp + 1]), np.array(raw[9: 9 + dq + 1])
    K = 8

    def shifted(c):
        # Taylor coefficients of c(x) at x = t, via the binomial shift
        out = np.zeros(K + 1)
        d = c.copy()
        for i in range(min(K, len(c) - 1) + 1):
            out[i] = P.polyval(t, d) / math.factorial(i)
            d = P.polyder(d)
        return out

    jp, jq = Jet(t, shifted(p)), Jet(t, shifted(q))
    want = shifted(P.polymul(p, q))
    scale = np.abs(jp.coeffs).sum() * np.abs(jq.coeffs).sum()
    assert np.allclose((jp * jq).coeffs, want, rtol=1e-12, atol=1e-12 * max(1.0, scale))


@settings(max_examples=N_CASES)
@given(jets(1, K=12), st.floats(0.5, 2), st.booleans(), st.lists(st.floats(-1, 1), min_size=12, max_size=12))
def test_div_mul_roundtrip(a, b0, neg, tail):
    (a,) = a
    b = Jet(a.base, [(-b0 if neg else b0), *tail])
    q = a / b
    back = q * b
    scale = np.abs(q.coeffs).max() * np.abs(b.coeffs).sum()
    assert np.allclose(back.coeffs, a.coeffs, rtol=1e-12, atol=1e-12 * max(1.0, scale))


ELEMENTARY = {
    "sin": (J.sin, mpmath.sin, (-3, 3)),
    "cos": (J.cos, mpmath.cos, (-3, 3)),
    "tan": (J.tan, mpmath.tan, (-1.2, 1.2)),
    "exp": (J.exp, mpmath.exp, (-3, 3)),
    "log": (J.log, mpmath.log, (0.2, 5)),
    "sqrt": (J.sqrt, mpmath.sqrt, (0.2, 5)),
    "pow": (lambda a: J.power(a, 2.5), lambda x: x ** mpmath.mpf(2.5), (0.2, 5)),
}


@settings(max_examples=N_CASES)
@given(st.sampled_from(sorted(ELEMENTARY)), st.floats(0, 1), st.integers(0, 4))
def test_finite_difference_crosscheck(name, u, i):
    jet_fn, ref_fn, (lo, hi) = ELEMENTARY[name]
    t = lo + u * (hi - lo)
    got = derivative(jet_fn(jet_variable(t, 4)), i)
    with mpmath.workdps(40):
        # central differences at high working precision
        want = float(mpmath.diff(ref_fn, mpmath.mpf(t), i, method="step", h=mpmath.mpf("1e-12")))
    assert abs(got - want) <= 1e-5 * max(1.0, abs(want))
