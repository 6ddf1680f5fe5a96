"""Proximal maps and the denoiser abstraction used by the solver.

The data-fidelity prox (Poisson negative log-likelihood) and the
nonnegativity projection are closed-form. The regularization slot takes any
``Denoiser``; the built-in ones are true proximal maps, hence firmly
non-expansive, and an empirical checker is provided for foreign denoisers.
"""

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import fft as sfft

from . import kernels
from .errors import DomainError, ParameterError
from .grid import ImageGrid, _check_same_shape

__all__ = [
    "Denoiser",
    "FirmnessReport",
    "kl_value",
    "prox_kl",
    "project_nonneg",
    "soft_threshold",
    "dct_l1_prox",
    "dct_softthresh_denoiser",
    "identity_denoiser",
    "scaling_denoiser",
    "check_firm_nonexpansive",
]


def kl_value(w: ImageGrid, g: ImageGrid) -> float:
    """Generalized Kullback-Leibler divergence sum(g*log(g/w) + w - g).

    Uses the convention 0*log(0) = 0; always >= 0 on its domain.
    """
    _check_same_shape(w, g)
    if np.any(g < 0.0):
        raise DomainError("g has negative entries")
    if np.any(w < 0.0):
        raise DomainError("w has negative entries")
    if np.any((w == 0.0) & (g > 0.0)):
        raise DomainError("w == 0 where g > 0 (divergence undefined)")
    return float(kernels.kl_value(w, g))


def prox_kl(v: ImageGrid, g: ImageGrid, b: float, gamma: float) -> ImageGrid:
    """Proximal map of the KL fidelity at the pre-prox point ``v``.

    Per pixel, with c = v + b - gamma, returns 0.5*(c + sqrt(c^2 + 4*gamma*g)):
    the unique minimizer over w >= 0 of gamma*KL(w, g) + 0.5*(w - (v + b))^2.
    The background ``b`` is added internally; the output is nonnegative, and
    strictly positive wherever g > 0.
    """
    _check_same_shape(v, g)
    if not gamma > 0.0:
        raise ParameterError(f"gamma must be > 0, got {gamma}")
    if np.any(g < 0.0):
        raise DomainError("g has negative entries")
    return kernels.prox_kl(v, g, float(b), float(gamma))


def project_nonneg(v: ImageGrid) -> ImageGrid:
    """Project onto the nonnegative orthant (pixelwise max with 0)."""
    return np.maximum(v, 0.0)


def soft_threshold(v: ImageGrid, t: float) -> ImageGrid:
    """Shrink toward zero: sign(v) * max(|v| - t, 0)."""
    if t < 0.0:
        raise ParameterError(f"threshold must be >= 0, got {t}")
    return kernels.soft_threshold(v, float(t))


def dct_l1_prox(v: ImageGrid, t: float) -> ImageGrid:
    """Prox of ``t * ||W v||_1`` with W the orthonormal 2-D cosine transform.

    With an orthonormal W this is exactly W^-1 soft_threshold(W v, t); at
    t == 0 the prox is the identity and the transforms are skipped.
    """
    if t < 0.0:
        raise ParameterError(f"threshold must be >= 0, got {t}")
    if t == 0.0:
        return np.array(v, dtype=np.float64, copy=True)
    coeffs = sfft.dctn(v, norm="ortho")
    return sfft.idctn(kernels.soft_threshold(coeffs, float(t)), norm="ortho")


@dataclass(frozen=True)
class Denoiser:
    """A denoising map ``apply(v, strength) -> grid`` of the same shape.

    ``claims_firmly_nonexpansive`` records whether the map is known to be a
    proximal operator (the property the solver's convergence rests on); use
    :func:`check_firm_nonexpansive` to probe a foreign one empirically.
    """

    name: str
    claims_firmly_nonexpansive: bool
    fn: Callable[[ImageGrid, float], ImageGrid]

    def apply(self, v: ImageGrid, strength: float) -> ImageGrid:
        out = self.fn(v, strength)
        if out.shape != v.shape:
            raise DomainError(
                f"denoiser {self.name!r} changed shape {v.shape} -> {out.shape}"
            )
        if not np.isfinite(out).all():
            raise DomainError(f"denoiser {self.name!r} produced non-finite values")
        return out


def identity_denoiser() -> Denoiser:
    """No-op denoiser (prox of the zero function)."""
    return Denoiser(
        name="identity",
        claims_firmly_nonexpansive=True,
        fn=lambda v, s: np.array(v, dtype=np.float64, copy=True),
    )


def dct_softthresh_denoiser() -> Denoiser:
    """Soft-thresholding of orthonormal cosine-transform coefficients.

    A genuine proximal map (of strength * l1 in the transform domain), so it
    is firmly non-expansive for every strength.
    """
    return Denoiser(
        name="dct",
        claims_firmly_nonexpansive=True,
        fn=dct_l1_prox,
    )


def scaling_denoiser(factor: float) -> Denoiser:
    """Multiply by a constant; expansive for factor > 1 (a test double)."""
    return Denoiser(
        name=f"scale:{factor:g}",
        claims_firmly_nonexpansive=factor <= 1.0,
        fn=lambda v, s: factor * np.asarray(v, dtype=np.float64),
    )


@dataclass(frozen=True)
class FirmnessReport:
    violations: int
    worst_margin: float
    num_pairs: int


# Roundoff slack on the firmly-non-expansive inequality across transform
# round trips.
_FIRMNESS_TOL = 1e-9


def check_firm_nonexpansive(
    d: Denoiser,
    strength: float,
    num_pairs: int,
    seed: int,
    shape: tuple[int, int] = (16, 16),
) -> FirmnessReport:
    """Empirically test ||D(a)-D(b)||^2 <= <D(a)-D(b), a-b> on random pairs.

    Pairs are seeded uniform images plus Gaussian perturbations. A failing
    denoiser yields a violation count, never an exception; ``worst_margin``
    is the largest signed excess of the left side over the right.
    """
    if num_pairs < 1:
        raise ParameterError(f"num_pairs must be >= 1, got {num_pairs}")
    rng = np.random.default_rng(seed)
    violations = 0
    worst = -np.inf
    for _ in range(num_pairs):
        a = rng.uniform(0.0, 1.0, size=shape)
        b = a + rng.normal(0.0, 0.1, size=shape)
        da = d.apply(a, strength)
        db = d.apply(b, strength)
        diff = da - db
        margin = float(np.sum(diff * diff) - np.sum(diff * (a - b)))
        if margin > _FIRMNESS_TOL:
            violations += 1
        worst = max(worst, margin)
    return FirmnessReport(violations=violations, worst_margin=worst, num_pairs=num_pairs)
