"""Compiled and numpy kernels agree, and both match independent quadrature."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from gpmfix import kernels
from gpmfix._kernels_py import panel_weights
from gpmfix.ivp import greens_ivp
from gpmfix.pbvp import greens_periodic

BACKENDS = [kernels.python_backend] + ([kernels.compiled_backend] if kernels.compiled_backend else [])
IDS = ["python"] + (["compiled"] if kernels.compiled_backend else [])

samples = arrays(float, st.integers(3, 300), elements=st.floats(-1e3, 1e3, allow_nan=False))


def test_compiled_backend_selected():
    if kernels.compiled_backend is None:
        pytest.skip("extension not built")
    assert kernels.BACKEND == "compiled"


@pytest.mark.skipif(kernels.compiled_backend is None, reason="extension not built")
@settings(max_examples=200)
@given(samples, st.floats(0.1, 5.0), st.floats(1e-4, 0.1))
def test_backends_agree_ivp(f, w, h):
    a = kernels.python_backend.ivp_convolve(f, w, h)
    b = kernels.compiled_backend.ivp_convolve(f, w, h)
    assert np.allclose(a, b, rtol=1e-12, atol=1e-12 * max(1.0, np.max(np.abs(f))))


@pytest.mark.skipif(kernels.compiled_backend is None, reason="extension not built")
@settings(max_examples=200)
@given(samples, st.floats(0.05, 50.0), st.floats(1e-4, 0.1))
def test_backends_agree_periodic(f, a, h):
    x = kernels.python_backend.periodic_convolve(f, a, h)
    y = kernels.compiled_backend.periodic_convolve(f, a, h)
    assert np.allclose(x, y, rtol=1e-11, atol=1e-12 * max(1.0, np.max(np.abs(f))))


@pytest.mark.parametrize("lam", [1e-8, 1e-4, 0.1, 0.49, 0.5, 2.0, 50.0])
def test_panel_weights_against_midpoint_oracle(lam):
    s = (np.arange(200_000) + 0.5) / 200_000
    e = np.exp(-lam * s)
    A, B = panel_weights(lam)
    # midpoint error is about lam^2 / (24 m^2) relative
    assert A == pytest.approx(np.mean(s * e), rel=1e-8)
    assert B == pytest.approx(np.mean((1 - s) * e), rel=1e-8)


@pytest.mark.parametrize("backend", BACKENDS, ids=IDS)
def test_ivp_convolve_against_dense_quadrature(backend):
    n, S, w = 400, 1.2, 1.7
    h = S / n
    y = np.linspace(0, S, n + 1)
    g = np.exp(y) * np.cos(3 * y)
    out = backend.ivp_convolve(g, w, h)
    for i in (0, 1, 57, 200, n):
        ref = np.trapezoid(greens_ivp(y[i], y[: i + 1], w) * g[: i + 1], dx=h) if i else 0.0
        assert out[i] == pytest.approx(ref, abs=1e-13)


@pytest.mark.parametrize("backend", BACKENDS, ids=IDS)
@pytest.mark.parametrize("a", [0.3, 2.0, 40.0])
def test_periodic_convolve_against_fine_quadrature(backend, a):
    S, n = 1.0, 200
    f = lambda z: np.sin(2 * np.pi * z) + z * z  # noqa: E731
    out = backend.periodic_convolve(f(np.linspace(0, S, n + 1)), a, S / n)
    kern = np.vectorize(greens_periodic)
    m = 20_000
    for i in (0, 37, 100, n):
        y = i * S / n
        ref = 0.0
        # midpoint rule on each side of the jump at z = y
        for lo, hi in ((0.0, y), (y, S)):
            if hi > lo:
                z = lo + (np.arange(m) + 0.5) * (hi - lo) / m
                ref += np.sum(kern(y, z, a, S) * f(z)) * (hi - lo) / m
        # product integration is second order: error about h^2 max|f''| / (8 a)
        assert out[i] == pytest.approx(ref, abs=1e-4 / a)


@pytest.mark.parametrize("backend", BACKENDS, ids=IDS)
def test_periodic_convolve_exact_for_linear(backend):
    # product integration reproduces constants and linear data exactly
    S, n, a = 2.0, 50, 1.3
    y = np.linspace(0, S, n + 1)
    out_one = backend.periodic_convolve(np.ones(n + 1), a, S / n)
    assert np.allclose(out_one, 1 / a, rtol=1e-13)
    out_lin = backend.periodic_convolve(y, a, S / n)
    # periodic solution of v' + a v = z
    ref = y / a - 1 / a**2 + S * np.exp(-a * y) / (a * -math.expm1(-a * S))
    assert np.allclose(out_lin, ref, rtol=1e-12, atol=1e-13)


@pytest.mark.parametrize("backend", BACKENDS, ids=IDS)
def test_periodic_convolve_large_exponent_no_overflow(backend):
    out = backend.periodic_convolve(np.ones(2001), 900.0, 1e-3)
    assert np.all(np.isfinite(out))
    assert np.allclose(out, 1 / 900.0, rtol=1e-12)


def test_pure_python_env_var(monkeypatch):
    import importlib

    monkeypatch.setenv("GPMFIX_PURE_PYTHON", "1")
    mod = importlib.reload(kernels)
    try:
        assert mod.BACKEND == "python"
    finally:
        monkeypatch.delenv("GPMFIX_PURE_PYTHON")
        importlib.reload(kernels)
