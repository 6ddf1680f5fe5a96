"""Independent reference implementations used to freeze expected values.

Everything here is deliberately slow and simple: direct DFT loops, spatial
double loops, dense matrices, high-precision golden-section search. None of
it shares code with the package paths it checks.
"""

import cmath
import math

import gmpy2
import numpy as np

gmpy2.get_context().precision = 150

_INVPHI = (gmpy2.sqrt(gmpy2.mpfr(5)) - 1) / 2


def naive_dft2(x):
    """O(n^2) direct 2-D DFT."""
    h, w = x.shape
    out = np.zeros((h, w), dtype=complex)
    for u in range(h):
        for v in range(w):
            s = 0j
            for i in range(h):
                for j in range(w):
                    s += x[i, j] * cmath.exp(-2j * cmath.pi * (u * i / h + v * j / w))
            out[u, v] = s
    return out


def circular_convolve_direct(kernel, anchor, x):
    """Spatial-domain periodic convolution with an anchored kernel."""
    h, w = x.shape
    kh, kw = kernel.shape
    ar, ac = anchor
    out = np.zeros_like(x)
    for i in range(h):
        for j in range(w):
            acc = 0.0
            for p in range(kh):
                for q in range(kw):
                    acc += kernel[p, q] * x[(i - (p - ar)) % h, (j - (q - ac)) % w]
            out[i, j] = acc
    return out


def operator_matrix(kernel, anchor, h, w):
    """Dense n x n matrix of the periodic convolution operator."""
    n = h * w
    mat = np.zeros((n, n))
    for col in range(n):
        basis = np.zeros((h, w))
        basis[col // w, col % w] = 1.0
        mat[:, col] = circular_convolve_direct(kernel, anchor, basis).ravel()
    return mat


def golden_section_prox_kl(v, g, b, gamma, lo=1e-12, hi=50.0, tol=1e-12):
    """argmin over w in [lo, hi] of gamma*KL(w, g) + 0.5*(w - (v + b))^2.

    Evaluated in 150-bit arithmetic so the bracket, not rounding noise,
    limits the answer.
    """
    vv = gmpy2.mpfr(v)
    gg = gmpy2.mpfr(g)
    bb = gmpy2.mpfr(b)
    gam = gmpy2.mpfr(gamma)
    c0 = vv + bb

    if gg > 0:
        lggg = gmpy2.log(gg)

        def f(w):
            return gam * (gg * (lggg - gmpy2.log(w)) + w - gg) + (w - c0) ** 2 / 2

    else:

        def f(w):
            return gam * w + (w - c0) ** 2 / 2

    a = gmpy2.mpfr(lo)
    d = gmpy2.mpfr(hi)
    x1 = d - _INVPHI * (d - a)
    x2 = a + _INVPHI * (d - a)
    f1 = f(x1)
    f2 = f(x2)
    while d - a > tol:
        if f1 < f2:
            d, x2, f2 = x2, x1, f1
            x1 = d - _INVPHI * (d - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + _INVPHI * (d - a)
            f2 = f(x2)
    return float((a + d) / 2)


def prox_kl_objective(w, v, g, b, gamma):
    """Double-precision objective, for competitor-point certificates."""
    q = 0.5 * (w - (v + b)) ** 2
    if g > 0:
        if w <= 0:
            return math.inf
        return gamma * (g * math.log(g / w) + w - g) + q
    return gamma * w + q


def _gaussian_window_direct(size=11, sigma=1.5):
    half = (size - 1) / 2.0
    win = np.zeros((size, size))
    for i in range(size):
        for j in range(size):
            win[i, j] = math.exp(-((i - half) ** 2 + (j - half) ** 2) / (2 * sigma**2))
    return win / win.sum()


def ssim_direct(a, b, data_range=1.0):
    """Windowed structural similarity by explicit per-window sums."""
    win = _gaussian_window_direct()
    size = win.shape[0]
    h, w = a.shape
    c1 = (0.01 * data_range) ** 2
    c2 = (0.03 * data_range) ** 2
    values = []
    for i in range(h - size + 1):
        for j in range(w - size + 1):
            pa = a[i : i + size, j : j + size]
            pb = b[i : i + size, j : j + size]
            mua = float((win * pa).sum())
            mub = float((win * pb).sum())
            va = float((win * pa * pa).sum()) - mua * mua
            vb = float((win * pb * pb).sum()) - mub * mub
            cov = float((win * pa * pb).sum()) - mua * mub
            num = (2 * mua * mub + c1) * (2 * cov + c2)
            den = (mua * mua + mub * mub + c1) * (va + vb + c2)
            values.append(num / den)
    return float(np.mean(values))


def synthetic_image(n, seed=0):
    """Structured test scene: gradients, a disk, two rectangles, mild texture."""
    rng = np.random.default_rng(seed)
    yy, xx = np.mgrid[0:n, 0:n] / n
    img = 0.35 + 0.3 * np.sin(2 * np.pi * xx * 1.5) * np.cos(2 * np.pi * yy)
    img += 0.25 * ((xx - 0.5) ** 2 + (yy - 0.5) ** 2 < 0.09)
    img[n // 8 : n // 4, n // 8 : n // 2] += 0.3
    img[int(0.6 * n) : int(0.8 * n), int(0.55 * n) : int(0.7 * n)] -= 0.25
    img += 0.02 * rng.standard_normal((n, n))
    return np.clip(img, 0.0, 1.0)
