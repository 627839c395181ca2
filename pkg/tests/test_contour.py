import numpy as np
import pytest

from osculant.algebraic import AlgebraicCurve
from osculant.contour import oval_residual, plot_implicit, project_to_curve, trace_oval
from osculant.errors import OpenComponent, SeedOffCurve

CIRCLE = AlgebraicCurve.from_expr("x^2 + y^2 - 1")


def test_trace_unit_circle():
    line = trace_oval(CIRCLE, (1, 0), grid=512)
    assert line.closed
    assert np.abs(np.hypot(*line.points.T) - 1).max() <= 2e-3
    assert oval_residual(CIRCLE, line) < 1e-10


def test_trace_in_fixed_box():
    line = trace_oval(CIRCLE, (0, 1), grid=128, box=(-2, 2, -2, 2))
    assert line.closed and len(line) > 100
    with pytest.raises(OpenComponent):
        trace_oval(CIRCLE, (0, 1), grid=128, box=(-0.5, 2, -2, 2))


def test_cubic_examples():
    # x^3 - 3x + 2.5 has a single real root (< -2), so this cubic has no oval;
    # the sign pattern at -2, 0, 2 is +, +, +
    roots = np.roots([1, 0, -3, 2.5])
    assert np.sum(np.abs(roots.imag) < 1e-12) == 1
    assert all(v ** 3 - 3 * v + 2.5 > 0 for v in (-2, 0, 2))
    one_branch = AlgebraicCurve.from_expr("y^2 - x^3 + 3*x - 2.5")
    r = roots[np.abs(roots.imag) < 1e-12].real[0]
    with pytest.raises(OpenComponent):
        trace_oval(one_branch, (r, 0.0))
    # lowering the constant gives three real roots and an oval between the first two
    oval = AlgebraicCurve.from_expr("y^2 - x^3 + 3*x - 1.5")
    roots = np.sort(np.roots([1, 0, -3, 1.5]).real)
    line = trace_oval(oval, (-1.0, np.sqrt(3.5)))
    assert line.closed
    lo, hi = line.bbox()
    assert lo[0] == pytest.approx(roots[0], abs=1e-3) and hi[0] == pytest.approx(roots[1], abs=1e-3)
    assert oval_residual(oval, line) < 1e-6


def test_open_and_off_curve():
    with pytest.raises(OpenComponent):
        trace_oval(AlgebraicCurve.from_expr("y - x^2"), (0, 0))
    with pytest.raises(SeedOffCurve):
        trace_oval(CIRCLE, (5, 5))
    p = project_to_curve(CIRCLE, (1.0 + 1e-6, 0.0))
    assert abs(CIRCLE(*p)) < 1e-12


def test_plot_implicit_examples():
    lines = plot_implicit(CIRCLE, (-2, 2, -2, 2), 256)
    assert len(lines) == 1 and lines[0].closed
    assert np.abs(np.hypot(*lines[0].points.T) - 1).max() <= 4e-3
    branches = plot_implicit(AlgebraicCurve.from_expr("x*y - 1"), (-3, 3, -3, 3), 256)
    assert len(branches) == 2 and not any(b.closed for b in branches)
    assert plot_implicit(AlgebraicCurve.from_expr("x^2 + y^2 + 1"), (-3, 3, -3, 3), 64) == []


def test_grid_independence():
    a = plot_implicit(CIRCLE, (-2, 2, -2, 2), 64)[0]
    b = plot_implicit(CIRCLE, (-2, 2, -2, 2), 256)[0]
    assert len(b) > 3 * len(a)
    assert oval_residual(CIRCLE, a) < 1e-6 and oval_residual(CIRCLE, b) < 1e-6
