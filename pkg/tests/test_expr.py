import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from osculant.curves import graph, parametric, parse_curve_spec
from osculant.errors import CurveSpecError, DomainError, ParseError
from osculant.expr import Binary, Const, Unary, Var, eval_array, eval_jet, eval_real, parse, to_text
from osculant.jet import derivative, jet_variable

N_CASES = 1000


def test_parse_examples():
    assert parse("x^3") == Binary("^", Var("x"), Const(3.0))
    assert parse("cos(s)^3") == Binary("^", Unary("cos", Var("s")), Const(3.0))
    with pytest.raises(ParseError) as exc:
        parse("2*x+-1")
    assert exc.value.offset == 4


@pytest.mark.parametrize("text,offset", [("", 0), ("2x", 1), ("sin(x", 5), ("foo(x)", 3), ("x**2", 2), ("(x", 2)])
def test_parse_errors_carry_offsets(text, offset):
    with pytest.raises(ParseError) as exc:
        parse(text)
    assert exc.value.offset == offset


def test_precedence():
    assert eval_real("-x^2", {"x": 3}) == -9
    assert eval_real("2^3^2", {}) == 512
    assert eval_real("1-2-3", {}) == -4
    assert eval_real("8/4/2", {}) == 1
    assert eval_real("2*pi", {}) == pytest.approx(2 * math.pi)


def test_eval_examples():
    assert eval_real("x^3", {"x": 2}) == 8
    assert eval_real("sin(s)", {"s": 0}) == 0
    with pytest.raises(DomainError):
        eval_real("log(x)", {"x": 0})
    assert eval_jet("x^3", {"x": jet_variable(2, 3)}).coeffs.tolist() == [8, 12, 6, 1]
    assert np.allclose(eval_jet("exp(x)", {"x": jet_variable(0, 2)}).coeffs, [1, 1, 0.5])
    assert np.allclose(eval_jet("cos(s)^3", {"s": jet_variable(0, 2)}).coeffs, [1, 0, -1.5])


def test_fractional_power_positive_branch():
    assert eval_real("x^(2/3)", {"x": 8}) == pytest.approx(4)
    with pytest.raises(DomainError):
        eval_real("x^(2/3)", {"x": -8})


def test_eval_array_matches_scalar():
    xs = np.linspace(-2, 2, 9)
    got = eval_array(parse("x^3 - 2*sin(x)"), {"x": xs})
    assert np.allclose(got, [eval_real("x^3 - 2*sin(x)", {"x": v}) for v in xs], rtol=1e-14)


def test_curve_spec():
    c = parse_curve_spec("kind=parametric\nx=2*cos(s)\ny=sin(s)\ndomain=[0, 2*pi]\n")
    assert c.domain == pytest.approx((0, 2 * math.pi))
    assert np.allclose(c.point(0.0), [2, 0])
    g = parse_curve_spec("# comment\nkind=graph\nf=x^2\ndomain=[-1,1]")
    assert np.allclose(g.point(0.5), [0.5, 0.25])
    for bad in ("kind=graph\nf=x\ndomain=[0,1]\ncolor=red",
                "kind=graph\nf=x\ndomain=[1,0]",
                "kind=graph\nf=2x\ndomain=[0,1]",
                "kind=spiral\ndomain=[0,1]",
                "kind=parametric\nx=s\ndomain=[0,1]"):
        with pytest.raises(CurveSpecError):
            parse_curve_spec(bad)


def test_regularity_checked():
    with pytest.raises(CurveSpecError, match="singular at s=0"):
        parametric("s^3", "s^2", (0, 1))
    graph("x^2", (-1, 1)).check_regular()


# -- randomized suites ----------------------------------------------------------

FUNCS = ("sin", "cos", "tan", "exp", "log", "sqrt")


def _any_tree(depth):
    leaf = st.one_of(st.sampled_from([Var("x"), Var("y")]),
                     st.floats(0, 100, allow_nan=False).map(Const))
    if depth == 0:
        return leaf
    sub = _any_tree(depth - 1)
    return st.one_of(
        leaf,
        st.builds(Unary, st.sampled_from(FUNCS + ("neg",)), sub),
        st.builds(Binary, st.sampled_from("+-*/^"), sub, sub),
    )


@settings(max_examples=N_CASES)
@given(_any_tree(5))
def test_parse_print_roundtrip(tree):
    once = parse(to_text(tree))
    assert parse(to_text(once)) == once
    assert to_text(once) == to_text(tree)


def _safe_tree(depth):
    """Expressions that are finite and smooth for every real x."""
    leaf = st.one_of(st.just(Var("x")), st.floats(0.5, 2).map(Const))
    if depth == 0:
        return leaf
    sub = _safe_tree(depth - 1)
    one = Const(1.0)
    return st.one_of(
        leaf,
        st.builds(Unary, st.sampled_from(("sin", "cos", "neg")), sub),
        st.builds(lambda c: Unary("exp", Unary("sin", c)), sub),
        st.builds(lambda c: Unary("log", Binary("+", one, Binary("^", c, Const(2.0)))), sub),
        st.builds(lambda c: Unary("sqrt", Binary("+", one, Binary("^", c, Const(2.0)))), sub),
        st.builds(lambda a, b: Binary("/", a, Binary("+", one, Binary("^", b, Const(2.0)))), sub, sub),
        st.builds(Binary, st.sampled_from("+-*"), sub, sub),
    )


@settings(max_examples=N_CASES)
@given(_safe_tree(5), st.floats(-1.5, 1.5))
def test_jet_matches_finite_differences(tree, x):
    f = lambda v: eval_real(tree, {"x": v})  # noqa: E731
    j = eval_jet(tree, {"x": jet_variable(x, 1)})
    assert j.value == f(x)  # order-0 part is the real evaluation, exactly
    h = 1e-3
    d1 = (f(x + h) - f(x - h)) / (2 * h)
    d2 = (f(x + h / 2) - f(x - h / 2)) / h
    fd = (4 * d2 - d1) / 3  # Richardson-extrapolated central difference
    # skip points where the difference quotient itself has not converged
    assume(abs(d2 - d1) <= 1e-2 * max(1.0, abs(fd)))
    assert abs(derivative(j, 1) - fd) <= 1e-5 * max(1.0, abs(fd))


@settings(max_examples=200)
@given(_safe_tree(4), st.floats(-1.5, 1.5))
def test_order_zero_jet_is_real_evaluation(tree, x):
    assert eval_jet(tree, {"x": jet_variable(x, 0)}).value == eval_real(tree, {"x": x})
