"""Numpy implementations of the quadrature kernels.

Used when the compiled extension is unavailable or ``GPMFIX_PURE_PYTHON`` is
set.  Both functions return quadrature values at every node of a
uniform grid ``y_i = i * h``, ``i = 0..n``.
"""

import numpy as np

# largest exponent allowed inside one cumsum block of the decaying prefix sum
_BLOCK_EXP = 600.0


def _cumtrapz(f: np.ndarray, h: float) -> np.ndarray:
    c = np.cumsum(f)
    out = h * (c - 0.5 * (f[0] + f))
    out[0] = 0.0
    return out


def ivp_convolve(g: np.ndarray, w: float, h: float) -> np.ndarray:
    """``int_0^{y_i} sin(w (y_i - u)) / w * g(u) du`` by the trapezoid rule.

    The kernel is split as ``sin(w y)cos(w u) - cos(w y)sin(w u)`` so the
    whole grid costs two prefix sums.
    """
    g = np.asarray(g, dtype=float)
    y = h * np.arange(g.size)
    cw, sw = np.cos(w * y), np.sin(w * y)
    a = _cumtrapz(cw * g, h)
    b = _cumtrapz(sw * g, h)
    return (sw * a - cw * b) / w


def _decaying_prefix(f: np.ndarray, lam: float) -> np.ndarray:
    """``P_i = sum_{k <= i} exp(-lam (i - k)) f_k`` without overflow."""
    n1 = f.size
    out = np.empty(n1)
    block = max(1, int(_BLOCK_EXP / lam)) if lam > 0 else n1
    carry = 0.0
    for start in range(0, n1, block):
        stop = min(n1, start + block)
        j = np.arange(stop - start)
        grow = np.exp(lam * j)
        decay = np.exp(-lam * j)
        part = decay * np.cumsum(grow * f[start:stop])
        part += carry * np.exp(-lam * (j + 1))
        out[start:stop] = part
        carry = part[-1]
    return out


def panel_weights(lam: float) -> tuple[float, float]:
    """``A = int_0^1 s e^{-lam s} ds`` and ``B = int_0^1 (1 - s) e^{-lam s} ds``.

    A series is used for small ``lam``, where the closed forms cancel.
    """
    if lam < 0.5:
        A = B = 0.0
        term = 1.0
        for m in range(25):
            A += term / (m + 2)
            B += term / ((m + 1) * (m + 2))
            term *= -lam / (m + 1)
        return A, B
    e = np.exp(-lam)
    return (1.0 - e * (1.0 + lam)) / lam**2, (lam - 1.0 + e) / lam**2


def periodic_convolve(f: np.ndarray, a: float, h: float) -> np.ndarray:
    """``int_0^S G(y_i, z) f(z) dz`` for the periodic exponential kernel.

    ``G(y, z) = exp(a (z - y)) / (1 - exp(-a S))`` for ``z < y`` and
    ``exp(a (z - y - S)) / (1 - exp(-a S))`` for ``z >= y``.  The kernel is
    integrated exactly against the piecewise-linear interpolant of ``f``
    (product integration), split at ``z = y_i``.  Constants and linear
    functions are integrated exactly; all exponents are nonpositive.
    """
    f = np.asarray(f, dtype=float)
    n = f.size - 1
    lam = a * h
    A, B = panel_weights(lam)
    d = A * f[:-1] + B * f[1:]  # panel [z_k, z_{k+1}]; the kernel grows toward z_{k+1}
    # left: L_i = e^{-lam} L_{i-1} + h d_{i-1}
    left = np.zeros(n + 1)
    left[1:] = h * _decaying_prefix(d, lam)
    # right: R_i = h e^{-lam i} sum_{k >= i} e^{-lam (n - 1 - k)} d_k
    k = np.arange(n)
    wk = np.exp(-lam * (n - 1 - k)) * d
    right = np.zeros(n + 1)
    right[:-1] = h * np.exp(-lam * k) * np.cumsum(wk[::-1])[::-1]
    return (left + right) / -np.expm1(-a * h * n)


def periodic_convolve_trapezoid(f: np.ndarray, a: float, h: float) -> np.ndarray:
    """Composite trapezoid version of :func:`periodic_convolve`, split at ``z = y_i``.

    Its relative error on constants is about ``(a h)^2 / 12``.
    """
    f = np.asarray(f, dtype=float)
    n = f.size - 1
    lam = a * h
    k = np.arange(n + 1)
    p = _decaying_prefix(f, lam)
    left = h * (p - 0.5 * np.exp(-lam * k) * f[0] - 0.5 * f)
    left[0] = 0.0
    wk = np.exp(-lam * (n - k)) * f
    q = np.cumsum(wk[::-1])[::-1]
    right = h * np.exp(-lam * k) * (q - 0.5 * wk - 0.5 * f[n])
    right[n] = 0.0
    return (left + right) / -np.expm1(-a * h * n)
