"""Hot-kernel dispatch: compiled extension when built, NumPy fallback otherwise.

``benchmarks/bench_kernels.py`` compares the two implementations head to head.
"""

try:
    from . import _kernels as _impl

    HAVE_COMPILED = True
except ImportError:  # extension not built; pure fallback
    from . import _kernels_py as _impl

    HAVE_COMPILED = False

IMPLEMENTATION = _impl.IMPLEMENTATION

prox_kl = _impl.prox_kl
kl_value = _impl.kl_value
soft_threshold = _impl.soft_threshold
poisson_field = _impl.poisson_field

__all__ = [
    "HAVE_COMPILED",
    "IMPLEMENTATION",
    "prox_kl",
    "kl_value",
    "soft_threshold",
    "poisson_field",
]
