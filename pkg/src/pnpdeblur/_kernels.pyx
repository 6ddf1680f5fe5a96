# cython: boundscheck=False, wraparound=False, cdivision=True
# cython: language_level=3
"""Compiled per-pixel hot kernels.

Twin of ``_kernels_py``: same signatures, same arithmetic order, same
uniform stream, so outputs match the fallback bit for bit (the objective
reduction in ``kl_value`` may differ in the last ulp from summation order).
"""

from libc.math cimport exp, fabs, floor, log, sqrt
from libc.stdint cimport uint64_t

import numpy as np

IMPLEMENTATION = "compiled"

cdef double INV_2_53 = 2.0 ** -53
cdef double HALF_LOG_TWO_PI = 0.9189385332046727

cdef double[16] LOGFACT
_LF = (
    0.0,
    0.0,
    0.6931471805599453,
    1.791759469228055,
    3.1780538303479458,
    4.787491742782046,
    6.579251212010101,
    8.525161361065415,
    10.60460290274525,
    12.801827480081469,
    15.104412573075516,
    17.502307845873887,
    19.987214495661885,
    22.552163853123425,
    25.19122118273868,
    27.89927138384089,
)
cdef int _i
for _i in range(16):
    LOGFACT[_i] = _LF[_i]


def prox_kl(v, g, double b, double gamma):
    """Closed-form minimizer of ``gamma*KL(w, g) + 0.5*(w - (v + b))^2``."""
    cdef double[:, ::1] vv = np.ascontiguousarray(v, dtype=np.float64)
    cdef double[:, ::1] gg = np.ascontiguousarray(g, dtype=np.float64)
    out_arr = np.empty((vv.shape[0], vv.shape[1]), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t i, j
    cdef double c
    cdef double fg = 4.0 * gamma
    with nogil:
        for i in range(vv.shape[0]):
            for j in range(vv.shape[1]):
                c = (vv[i, j] + b) - gamma
                out[i, j] = 0.5 * (c + sqrt(c * c + fg * gg[i, j]))
    return out_arr


def kl_value(w, g):
    """Generalized Kullback-Leibler divergence, with 0*log(0) = 0.

    No domain checks: a pixel with ``w == 0 < g`` yields ``inf``.
    """
    cdef double[:, ::1] ww = np.ascontiguousarray(w, dtype=np.float64)
    cdef double[:, ::1] gg = np.ascontiguousarray(g, dtype=np.float64)
    cdef Py_ssize_t i, j
    cdef double acc = 0.0
    cdef double gi
    with nogil:
        for i in range(ww.shape[0]):
            for j in range(ww.shape[1]):
                gi = gg[i, j]
                acc += ww[i, j] - gi
                if gi > 0.0:
                    acc += gi * log(gi / ww[i, j])
    return acc


def soft_threshold(v, double t):
    """Per-pixel ``sign(v) * max(|v| - t, 0)``."""
    cdef double[:, ::1] vv = np.ascontiguousarray(v, dtype=np.float64)
    out_arr = np.empty((vv.shape[0], vv.shape[1]), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t i, j
    cdef double m
    with nogil:
        for i in range(vv.shape[0]):
            for j in range(vv.shape[1]):
                m = fabs(vv[i, j]) - t
                if m < 0.0:
                    m = 0.0
                out[i, j] = -m if vv[i, j] < 0.0 else m
    return out_arr


cdef inline double _next_u01(uint64_t* state) nogil:
    cdef uint64_t z
    state[0] = state[0] + <uint64_t>0x9E3779B97F4A7C15
    z = state[0]
    z = (z ^ (z >> 30)) * <uint64_t>0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * <uint64_t>0x94D049BB133111EB
    z = z ^ (z >> 31)
    return <double>(z >> 11) * INV_2_53


cdef inline double _logfact(long k) nogil:
    cdef double x, xx
    if k < 16:
        return LOGFACT[k]
    x = k + 1.0
    xx = x * x
    return (
        (x - 0.5) * log(x)
        - x
        + HALF_LOG_TWO_PI
        + 1.0 / (12.0 * x)
        - 1.0 / (360.0 * (xx * x))
        + 1.0 / (1260.0 * (xx * xx * x))
        - 1.0 / (1680.0 * (xx * xx * xx * x))
    )


cdef long _poisson_inversion(double lam, uint64_t* state) nogil:
    cdef double u = _next_u01(state)
    cdef double p = exp(-lam)
    cdef double cum = p
    cdef long k = 0
    cdef long cap = <long>(lam + 20.0 * sqrt(lam) + 101.0)
    while u > cum and k < cap:
        k += 1
        p *= lam / k
        cum += p
    return k


cdef long _poisson_ptrs(double lam, uint64_t* state) nogil:
    cdef double slam = sqrt(lam)
    cdef double loglam = log(lam)
    cdef double bb = 0.931 + 2.53 * slam
    cdef double a = -0.059 + 0.02483 * bb
    cdef double invalpha = 1.1239 + 1.1328 / (bb - 3.4)
    cdef double vr = 0.9277 - 3.6224 / (bb - 2.0)
    cdef double u, v, us
    cdef long k
    while True:
        u = _next_u01(state) - 0.5
        v = _next_u01(state)
        us = 0.5 - fabs(u)
        k = <long>floor((2.0 * a / us + bb) * u + lam + 0.43)
        if us >= 0.07 and v <= vr:
            return k
        if k < 0 or (us < 0.013 and v > us):
            continue
        if log(v * invalpha / (a / (us * us) + bb)) <= k * loglam - lam - _logfact(k):
            return k


def poisson_field(lam, seed):
    """Sample an independent Poisson count per pixel of ``lam``, seeded.

    Pixels are consumed in row-major order from one uniform stream, so the
    result is a pure function of (lam, seed).
    """
    flat_arr = np.ascontiguousarray(lam, dtype=np.float64).ravel()
    cdef double[::1] flat = flat_arr
    out_arr = np.empty(flat.shape[0], dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef uint64_t state = <uint64_t>(int(seed) & ((1 << 64) - 1))
    cdef Py_ssize_t i
    cdef double lam_i
    with nogil:
        for i in range(flat.shape[0]):
            lam_i = flat[i]
            if lam_i <= 0.0:
                out[i] = 0.0
            elif lam_i < 30.0:
                out[i] = <double>_poisson_inversion(lam_i, &state)
            else:
                out[i] = <double>_poisson_ptrs(lam_i, &state)
    return out_arr.reshape(np.shape(lam))
