# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled quadrature kernels; same contract as ``gpmfix._kernels_py``."""

import numpy as np
cimport numpy as cnp
from libc.math cimport cos, exp, expm1, sin

cnp.import_array()

from gpmfix._kernels_py import panel_weights


def ivp_convolve(g, double w, double h):
    cdef const double[::1] gv = np.ascontiguousarray(g, dtype=np.float64)
    cdef Py_ssize_t n1 = gv.shape[0], i
    out = np.empty(n1)
    cdef double[::1] o = out
    cdef double y, c, s, fc, fs, fc0, fs0
    cdef double pa = 0.0, pb = 0.0
    if n1 == 0:
        return out
    fc0 = gv[0]
    fs0 = 0.0
    o[0] = 0.0
    pa = fc0
    pb = fs0
    for i in range(1, n1):
        y = h * i
        c = cos(w * y)
        s = sin(w * y)
        fc = c * gv[i]
        fs = s * gv[i]
        pa += fc
        pb += fs
        o[i] = (s * h * (pa - 0.5 * (fc0 + fc)) - c * h * (pb - 0.5 * (fs0 + fs))) / w
    return out


def periodic_convolve(f, double a, double h):
    cdef const double[::1] fv = np.ascontiguousarray(f, dtype=np.float64)
    cdef Py_ssize_t n1 = fv.shape[0], n = n1 - 1, i
    out = np.zeros(n1)
    cdef double[::1] o = out
    cdef double lam = a * h
    cdef double decay = exp(-lam)
    cdef double norm = -expm1(-a * h * n)
    cdef double A, B, d, p = 0.0, q = 0.0, wq = 1.0
    A, B = panel_weights(lam)
    # left: L_i = e^{-lam} L_{i-1} + h d_{i-1}
    for i in range(1, n1):
        d = A * fv[i - 1] + B * fv[i]
        p = decay * p + h * d
        o[i] = p
    # right: R_i = h e^{-lam i} sum_{k >= i} e^{-lam (n - 1 - k)} d_k
    for i in range(n - 1, -1, -1):
        d = A * fv[i] + B * fv[i + 1]
        q += wq * d
        wq *= decay
        o[i] += h * exp(-lam * i) * q
    for i in range(n1):
        o[i] /= norm
    return out
