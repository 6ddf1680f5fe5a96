"""Forward-model simulation: Gaussian blur, background, seeded Poisson noise.

The noise level ``nu`` scales the Poisson intensity: the observation is
``Poisson(nu * (H x + b)) / nu``, so the data stay on the scale of the
ground truth and the per-pixel variance is mean / nu. Lower nu means fewer
effective counts, hence stronger relative noise.
"""

import math
import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import kernels
from .errors import DimensionError, InternalError, ParameterError
from .grid import ImageGrid, Otf, Psf, as_grid
from .linops import convolve, psf_to_otf

__all__ = ["DegradeSpec", "Degraded", "gaussian_psf", "degrade"]


@dataclass(frozen=True)
class DegradeSpec:
    """Degradation parameters: blur width, background, noise level, seed.

    ``kernel_radius`` defaults to ceil(4 * sigma), which truncates less than
    1e-7 of the kernel mass.
    """

    sigma: float
    kernel_radius: Optional[int] = None
    b: float = 0.0
    nu: float = 20.0
    seed: int = 0

    def __post_init__(self):
        if not self.sigma > 0.0:
            raise ParameterError(f"sigma must be > 0, got {self.sigma}")
        if not self.nu > 0.0:
            raise ParameterError(f"nu must be > 0, got {self.nu}")
        if self.b < 0.0:
            raise ParameterError(f"b must be >= 0, got {self.b}")
        if self.kernel_radius is None:
            object.__setattr__(self, "kernel_radius", max(1, math.ceil(4.0 * self.sigma)))
        if self.kernel_radius < 1:
            raise ParameterError(f"kernel_radius must be >= 1, got {self.kernel_radius}")


@dataclass(frozen=True)
class Degraded:
    g: ImageGrid
    otf: Otf


def gaussian_psf(sigma: float, radius: int, height: int, width: int) -> Psf:
    """Truncated, normalized Gaussian kernel on a (2*radius+1)^2 window.

    The anchor sits at the window center; the window must fit inside the
    ``height x width`` grid the kernel will act on.
    """
    if not sigma > 0.0:
        raise ParameterError(f"sigma must be > 0, got {sigma}")
    if radius < 1:
        raise ParameterError(f"radius must be >= 1, got {radius}")
    size = 2 * radius + 1
    if size > height or size > width:
        raise DimensionError(f"kernel {size}x{size} larger than grid {height}x{width}")
    coords = np.arange(-radius, radius + 1, dtype=np.float64)
    prof = np.exp(-(coords**2) / (2.0 * sigma * sigma))
    kernel = np.outer(prof, prof)
    kernel /= kernel.sum()
    return Psf(kernel=kernel, anchor=(radius, radius))


def degrade(x_true: ImageGrid, spec: DegradeSpec) -> Degraded:
    """Blur, add background, and apply seeded Poisson noise at level nu.

    Deterministic for a fixed (x_true, spec); the returned operator is the
    one used to produce the data, ready to hand to a restoration run.
    """
    x = as_grid(x_true, name="x_true")
    if x.min() < 0.0 or x.max() > 1.0:
        warnings.warn("x_true has entries outside [0, 1]; noise level semantics assume unit scale")
    h, w = x.shape
    psf = gaussian_psf(spec.sigma, spec.kernel_radius, h, w)
    otf = psf_to_otf(psf, h, w)

    mean = convolve(otf, x) + spec.b
    floor_tol = 1e-12 * max(1.0, float(np.abs(mean).max()))
    if float(mean.min()) < -floor_tol:
        raise InternalError(f"negative mean pixel {mean.min()!r} from nonnegative inputs")
    np.maximum(mean, 0.0, out=mean)  # clear FFT roundoff at exact zeros

    counts = kernels.poisson_field(spec.nu * mean, spec.seed)
    return Degraded(g=counts / spec.nu, otf=otf)
