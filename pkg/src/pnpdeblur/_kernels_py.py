"""Pure NumPy/Python implementations of the per-pixel hot kernels.

Mirror of the compiled extension ``_kernels``; selected at import time by
``kernels`` when the extension is unavailable. The arithmetic is arranged so
both implementations produce bit-identical grids (the Poisson sampler runs
the same scalar recurrences against the same uniform stream; CPython's
``math.exp``/``math.log`` and the extension both call libm).
"""

import math

import numpy as np

IMPLEMENTATION = "python"

_MASK64 = (1 << 64) - 1
_INV_2_53 = 2.0**-53

# ln(k!) for k = 0..15; larger arguments use the Stirling series below.
_LOGFACT = (
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

_HALF_LOG_TWO_PI = 0.9189385332046727


def prox_kl(v, g, b, gamma):
    """Closed-form minimizer of ``gamma*KL(w, g) + 0.5*(w - (v + b))^2``."""
    c = (v + b) - gamma
    return 0.5 * (c + np.sqrt(c * c + (4.0 * gamma) * g))


def kl_value(w, g):
    """Generalized Kullback-Leibler divergence, with 0*log(0) = 0.

    No domain checks: a pixel with ``w == 0 < g`` yields ``inf``.
    """
    total = float(np.sum(w) - np.sum(g))
    pos = g > 0.0
    if np.any(pos):
        gp = g[pos]
        with np.errstate(divide="ignore"):
            total += float(np.sum(gp * np.log(gp / w[pos])))
    return total


def soft_threshold(v, t):
    """Per-pixel ``sign(v) * max(|v| - t, 0)``."""
    m = np.abs(v) - t
    np.maximum(m, 0.0, out=m)
    return np.where(v < 0.0, -m, m)


def _logfact(k):
    if k < 16:
        return _LOGFACT[k]
    x = k + 1.0
    xx = x * x
    return (
        (x - 0.5) * math.log(x)
        - x
        + _HALF_LOG_TWO_PI
        + 1.0 / (12.0 * x)
        - 1.0 / (360.0 * (xx * x))
        + 1.0 / (1260.0 * (xx * xx * x))
        - 1.0 / (1680.0 * (xx * xx * xx * x))
    )


def _poisson_inversion(lam, state):
    # Sequential CDF search; valid for small lam (p0 stays well above 0).
    state = (state + 0x9E3779B97F4A7C15) & _MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    z ^= z >> 31
    u = (z >> 11) * _INV_2_53

    p = math.exp(-lam)
    cum = p
    k = 0
    cap = int(lam + 20.0 * math.sqrt(lam) + 101.0)
    while u > cum and k < cap:
        k += 1
        p *= lam / k
        cum += p
    return k, state


def _poisson_ptrs(lam, state):
    # Hormann's transformed-rejection sampler for lam >= 30.
    slam = math.sqrt(lam)
    loglam = math.log(lam)
    bb = 0.931 + 2.53 * slam
    a = -0.059 + 0.02483 * bb
    invalpha = 1.1239 + 1.1328 / (bb - 3.4)
    vr = 0.9277 - 3.6224 / (bb - 2.0)
    while True:
        state = (state + 0x9E3779B97F4A7C15) & _MASK64
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        z ^= z >> 31
        u = (z >> 11) * _INV_2_53 - 0.5

        state = (state + 0x9E3779B97F4A7C15) & _MASK64
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        z ^= z >> 31
        v = (z >> 11) * _INV_2_53

        us = 0.5 - abs(u)
        k = int(math.floor((2.0 * a / us + bb) * u + lam + 0.43))
        if us >= 0.07 and v <= vr:
            return k, state
        if k < 0 or (us < 0.013 and v > us):
            continue
        if math.log(v * invalpha / (a / (us * us) + bb)) <= k * loglam - lam - _logfact(k):
            return k, state


def poisson_field(lam, seed):
    """Sample an independent Poisson count per pixel of ``lam``, seeded.

    Pixels are consumed in row-major order from one uniform stream, so the
    result is a pure function of (lam, seed).
    """
    flat = np.ascontiguousarray(lam, dtype=np.float64).ravel()
    out = np.empty(flat.shape[0], dtype=np.float64)
    state = int(seed) & _MASK64
    for i in range(flat.shape[0]):
        lam_i = flat[i]
        if lam_i <= 0.0:
            out[i] = 0.0
        elif lam_i < 30.0:
            k, state = _poisson_inversion(lam_i, state)
            out[i] = float(k)
        else:
            k, state = _poisson_ptrs(lam_i, state)
            out[i] = float(k)
    return out.reshape(np.shape(lam))
