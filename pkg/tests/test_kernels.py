from __future__ import annotations

import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from chofisher import kernels
from chofisher._accel import HAVE_NUMBA

needs_numba = pytest.mark.skipif(not HAVE_NUMBA, reason="numba path unavailable")


@needs_numba
@given(a=st.floats(-0.5, 0.5), n=st.integers(0, 10), b=st.floats(1.5, 17.5), xmax=st.floats(0.0, 60.0))
def test_kummer_paths_agree(a, n, b, xmax):
    x = np.linspace(0.0, xmax, 33)
    v_nb, m_nb, ok_nb = kernels.kummer_series(a, b, x, True, a_int=-n)
    v_np, m_np, ok_np = kernels.kummer_series(a, b, x, False, a_int=-n)
    assert ok_nb == ok_np
    np.testing.assert_allclose(v_nb, v_np, rtol=1e-13, atol=1e-13 * m_np.max())
    np.testing.assert_allclose(m_nb, m_np, rtol=1e-13)


@needs_numba
@pytest.mark.parametrize("l", [0, 1, 3, 8, 16])
def test_bessel_paths_agree(l):
    x = np.concatenate([[0.0, 1e-200, 1e-3, 0.0999, 0.1], np.linspace(0.0, 250.0, 5001)])
    j_nb, d_nb = kernels.sph_jn(l, x, True)
    j_np, d_np = kernels.sph_jn(l, x, False)
    np.testing.assert_allclose(j_nb, j_np, rtol=1e-13, atol=1e-16)
    np.testing.assert_allclose(d_nb, d_np, rtol=1e-13, atol=1e-16)


@needs_numba
def test_bessel_sums_paths_agree():
    rng = np.random.default_rng(3)
    p = np.sort(rng.uniform(0, 200, 64))
    r = np.sort(rng.uniform(0, 2, 128))
    f = rng.standard_normal((2, 128))
    fd = rng.standard_normal((2, 128))
    a = kernels.bessel_sums(2, p, r, f, fd, True)
    b = kernels.bessel_sums(2, p, r, f, fd, False)
    for x, y in zip(a, b):
        np.testing.assert_allclose(x, y, rtol=1e-11, atol=1e-12)


@needs_numba
def test_tridiag_paths_agree():
    n = 500
    h = 1.0 / (n + 1)
    grid = h * np.arange(1, n + 1)
    d = 1.0 / h**2 + 0.5 * grid**2
    e = np.full(n - 1, -0.5 / h**2)
    np.testing.assert_allclose(
        kernels.tridiag_lowest(d, e, 4, use_numba=True),
        kernels.tridiag_lowest(d, e, 4, use_numba=False),
        rtol=1e-14,
    )


def test_tridiag_matches_dense_eigensolver():
    rng = np.random.default_rng(7)
    d = rng.uniform(-1, 1, 60)
    e = rng.uniform(-1, 1, 59)
    dense = np.diag(d) + np.diag(e, 1) + np.diag(e, -1)
    np.testing.assert_allclose(kernels.tridiag_lowest(d, e, 5), np.linalg.eigvalsh(dense)[:5], atol=1e-13)


def test_environment_flag_selects_numpy_backend():
    env = dict(os.environ, CHOFISHER_NO_NUMBA="1")
    code = "from chofisher import backend; print(backend())"
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"


def test_pipeline_identical_without_numba():
    code = (
        "from chofisher import StateSpec, analyze_state;"
        "a = analyze_state(StateSpec(0, 2, 1, 1.0, 0.5, 'cho'));"
        "print(repr(a.level.energy), repr(a.fisher.i_r), repr(a.fisher.i_p))"
    )
    runs = []
    for flag in ("1", "0"):
        env = dict(os.environ, CHOFISHER_NO_NUMBA=flag)
        out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
        runs.append([float(v) for v in out.stdout.split()])
    np.testing.assert_allclose(runs[0], runs[1], rtol=1e-11)
