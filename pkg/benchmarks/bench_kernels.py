"""Head-to-head benchmark: compiled hot kernels vs the NumPy fallback.

Times the per-pixel kernels in isolation and one full solver step with each
implementation patched in. Run as ``python benchmarks/bench_kernels.py``.
"""

import time

import numpy as np

from pnpdeblur import _kernels_py
from pnpdeblur import kernels as dispatch
from pnpdeblur import proximal, solver
from pnpdeblur.grid import Problem
from pnpdeblur.linops import psf_to_otf
from pnpdeblur.simulate import DegradeSpec, degrade, gaussian_psf

try:
    from pnpdeblur import _kernels
except ImportError:
    _kernels = None


def best_of(fn, repeat=7):
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def bench_kernels(n=512):
    rng = np.random.default_rng(0)
    v = rng.uniform(-3, 3, size=(n, n))
    g = rng.uniform(0, 5, size=(n, n))
    w = g + 0.1
    lam_small = rng.uniform(0.1, 25.0, size=(n // 2, n // 2))
    lam_large = rng.uniform(40.0, 200.0, size=(n // 2, n // 2))

    cases = [
        (f"prox_kl {n}x{n}", lambda impl: impl.prox_kl(v, g, 0.2, 3.0)),
        (f"soft_threshold {n}x{n}", lambda impl: impl.soft_threshold(v, 0.4)),
        (f"kl_value {n}x{n}", lambda impl: impl.kl_value(w, g)),
        (f"poisson_field {n//2}x{n//2} lam<30", lambda impl: impl.poisson_field(lam_small, 1)),
        (f"poisson_field {n//2}x{n//2} lam>=30", lambda impl: impl.poisson_field(lam_large, 1)),
    ]
    rows = []
    for name, call in cases:
        t_py = best_of(lambda: call(_kernels_py), repeat=3)
        t_c = best_of(lambda: call(_kernels), repeat=3) if _kernels else float("nan")
        rows.append((name, t_py, t_c))
    return rows


def bench_solver_step(n=128, iters=25):
    img = np.clip(np.random.default_rng(1).random((n, n)), 0, 1)
    deg = degrade(img, DegradeSpec(sigma=1.0, nu=20.0, seed=2))
    prob = Problem(g=deg.g, otf=deg.otf)
    denoiser = proximal.dct_softthresh_denoiser()

    def loop():
        state = solver.init_state(prob, 10.0)
        for _ in range(iters):
            state = solver.pnp_step(state, prob, denoiser, 0.1)

    rows = []
    originals = {name: getattr(dispatch, name) for name in ("prox_kl", "kl_value", "soft_threshold")}
    try:
        for label, impl in (("python", _kernels_py), ("compiled", _kernels)):
            if impl is None:
                continue
            for name in originals:
                setattr(dispatch, name, getattr(impl, name))
            rows.append((label, best_of(loop, repeat=3)))
    finally:
        for name, fn in originals.items():
            setattr(dispatch, name, fn)
    return n, iters, rows


def main():
    print(f"dispatch selected: {dispatch.IMPLEMENTATION}")
    if _kernels is None:
        print("compiled extension not built; timing the fallback only\n")

    print(f"{'kernel':<34} {'python':>10} {'compiled':>10} {'speedup':>8}")
    for name, t_py, t_c in bench_kernels():
        speed = t_py / t_c if t_c == t_c else float("nan")
        print(f"{name:<34} {t_py*1e3:>8.2f}ms {t_c*1e3:>8.2f}ms {speed:>7.1f}x")

    n, iters, rows = bench_solver_step()
    print(f"\nfull solver step loop ({iters} iterations, {n}x{n}, dct denoiser):")
    for label, elapsed in rows:
        print(f"  {label:<10} {elapsed*1e3:8.1f}ms ({elapsed/iters*1e3:.2f} ms/iter)")
    if len(rows) == 2:
        print(f"  speedup    {rows[0][1]/rows[1][1]:8.2f}x")


if __name__ == "__main__":
    main()
