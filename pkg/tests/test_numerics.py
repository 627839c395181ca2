import math
import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from osculant import _backend, linalg
from osculant.contour import _link, contour_polylines
from osculant.errors import SingularSystem
from osculant.roots import bisect, find_roots

try:
    CY = _backend.kernels("cython")
except ImportError:
    CY = None
PY = _backend.kernels("python")
needs_cython = pytest.mark.skipif(CY is None, reason="compiled extension not built")


# -- roots ---------------------------------------------------------------------

def test_find_roots_sign_changes():
    r = find_roots(math.cos, 0.1, 6.2)
    assert np.allclose(r, [math.pi / 2, 3 * math.pi / 2], atol=1e-9)
    assert not r.degenerate and r.flagged == []
    assert r.params() == {"grid": 512, "xtol": 1e-10, "plateau_tol": 1e-9}


def test_find_roots_double_root_is_flagged():
    r = find_roots(lambda x: (x - 0.3) ** 4, -1, 1)
    assert len(r) == 1 and r.flagged == r
    assert r[0] == pytest.approx(0.3, abs=1e-4)


def test_find_roots_degenerate_and_empty():
    assert find_roots(lambda x: 0.0, 0, 1).degenerate
    assert find_roots(lambda x: 1 + x * x, -1, 1) == []
    with pytest.raises(ValueError):
        find_roots(math.sin, 1, 1)


def test_bisect_precision():
    assert bisect(lambda x: x * x - 2, 1, 2, xtol=1e-13) == pytest.approx(math.sqrt(2), abs=1e-12)


# -- linear algebra, checked against LAPACK -----------------------------------

@settings(max_examples=200)
@given(st.integers(1, 25), st.integers(0, 2**32 - 1))
def test_lu_solve_matches_lapack(n, seed):
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((n, n)) + n * np.eye(n)
    b = rng.standard_normal(n)
    assert np.allclose(linalg.lu_solve(A, b), np.linalg.solve(A, b), rtol=1e-9, atol=1e-12)
    assert linalg.det(A) == pytest.approx(np.linalg.det(A), rel=1e-9)


def test_singular_detected():
    with pytest.raises(SingularSystem):
        linalg.lu_solve([[1, 2], [2, 4]], [1, 1])
    assert linalg.det([[1, 2], [2, 4]]) == 0.0


# -- backend equivalence ---------------------------------------------------------

SERIES = ("series_mul", "series_div", "series_exp", "series_log", "series_sincos", "series_sqrt")


@needs_cython
@settings(max_examples=300)
@given(st.sampled_from(SERIES), st.integers(0, 24), st.integers(0, 2**32 - 1))
def test_series_kernels_agree(name, K, seed):
    rng = np.random.default_rng(seed)
    a = rng.uniform(-1, 1, K + 1)
    a[0] = rng.uniform(0.5, 2)
    b = rng.uniform(-1, 1, K + 1)
    b[0] = rng.uniform(0.5, 2)
    args = (a, b) if name in ("series_mul", "series_div") else (a,)
    got_py = getattr(PY, name)(*args)
    got_cy = getattr(CY, name)(*args)
    for p, c in zip(np.atleast_2d(got_py), np.atleast_2d(got_cy)):
        assert np.allclose(p, c, rtol=1e-12, atol=1e-12 * max(1.0, np.abs(p).max()))


@needs_cython
@settings(max_examples=60)
@given(st.integers(2, 40), st.integers(2, 40), st.integers(0, 2**32 - 1))
def test_marching_squares_agree_after_linking(nx, ny, seed):
    rng = np.random.default_rng(seed)
    v = rng.standard_normal((ny + 1, nx + 1))
    sp, sc = PY.ms_segments(v), CY.ms_segments(v)
    assert _link(sp) == _link(sc)


def test_marching_squares_ambiguous_saddle():
    v = np.array([[1.0, -1.0], [-1.0, 1.0]])
    segs = PY.ms_segments(v)
    assert len(segs) == 2
    if CY is not None:
        assert _link(segs) == _link(CY.ms_segments(v))


def test_contour_polylines_circle():
    lines = contour_polylines(lambda x, y: x * x + y * y - 1, (-2, 2, -2, 2), 128)
    assert len(lines) == 1 and lines[0].closed
    r = np.hypot(*lines[0].points.T)
    assert np.abs(r - 1).max() < 2e-3


@pytest.mark.parametrize("flag,expected", [("1", "python"), ("0", "cython" if CY is not None else "python")])
def test_backend_env_switch(flag, expected):
    env = dict(os.environ, OSCULANT_PURE_PYTHON=flag)
    out = subprocess.run([sys.executable, "-c", "import osculant; print(osculant.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == expected
