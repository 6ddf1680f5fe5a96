"""Periodic convolution by the blur kernel and the direct deblurring solve.

The blur operator H is circulant (periodic boundary), so H, its adjoint, and
the normal-equations system (H^T H + 2 I) x = rhs are all diagonal in the
2-D DFT basis. The solve therefore costs one forward and one inverse
transform; the system is always nonsingular because the spectral denominator
|OTF|^2 + 2 is bounded below by 2.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, InternalError
from .grid import ImageGrid, Otf, Psf

__all__ = [
    "psf_to_otf",
    "convolve",
    "convolve_adjoint",
    "SpectralSolver",
    "solve_deblur_system",
]

# After an inverse transform of a real-operator product, any imaginary part
# is roundoff; a larger residue means the spectrum was corrupted.
_IMAG_RESIDUE_REL = 1e-9


def psf_to_otf(psf: Psf, height: int, width: int) -> Otf:
    """Embed the kernel in a ``height x width`` grid, center it at (0, 0), transform.

    The kernel is zero-padded and circularly shifted so its anchor lands on
    index (0, 0); the zero-frequency entry of the result equals the kernel
    sum (1 for a valid kernel).
    """
    kh, kw = psf.kernel.shape
    if kh > height or kw > width:
        raise DimensionError(
            f"kernel {psf.kernel.shape} larger than grid ({height}, {width})"
        )
    padded = np.zeros((height, width), dtype=np.float64)
    padded[:kh, :kw] = psf.kernel
    centered = np.roll(padded, (-psf.anchor[0], -psf.anchor[1]), axis=(0, 1))
    return Otf(height=height, width=width, spectrum=np.fft.fft2(centered))


def _real_part(freq_result: np.ndarray) -> ImageGrid:
    """Drop the imaginary residue of an inverse transform, verifying it is noise."""
    re = np.ascontiguousarray(freq_result.real)
    imag_max = float(np.abs(freq_result.imag).max())
    real_max = float(np.abs(re).max())
    if imag_max > _IMAG_RESIDUE_REL * real_max + 1e-300:
        raise InternalError(
            f"imaginary residue {imag_max:.3e} exceeds {_IMAG_RESIDUE_REL:.0e} "
            f"of result magnitude {real_max:.3e}"
        )
    return re


def _check_shape(otf: Otf, x: ImageGrid) -> None:
    if x.shape != otf.shape:
        raise DimensionError(f"grid shape {x.shape} != operator shape {otf.shape}")


def convolve(otf: Otf, x: ImageGrid) -> ImageGrid:
    """Apply the blur operator H (periodic convolution with the kernel)."""
    _check_shape(otf, x)
    return _real_part(np.fft.ifft2(np.fft.fft2(x) * otf.spectrum))


def convolve_adjoint(otf: Otf, y: ImageGrid) -> ImageGrid:
    """Apply H^T, the correlation with the kernel (conjugate spectrum)."""
    _check_shape(otf, y)
    return _real_part(np.fft.ifft2(np.fft.fft2(y) * np.conj(otf.spectrum)))


@dataclass(frozen=True)
class SpectralSolver:
    """Precomputed spectral denominator for the (H^T H + 2 I) system."""

    otf: Otf
    denom: np.ndarray

    @classmethod
    def for_otf(cls, otf: Otf) -> "SpectralSolver":
        spec = otf.spectrum
        denom = (np.conj(spec) * spec).real + 2.0
        return cls(otf=otf, denom=denom)


def solve_deblur_system(solver: SpectralSolver, rhs: ImageGrid) -> ImageGrid:
    """Solve ``(H^T H + 2 I) x = rhs`` exactly in the frequency domain."""
    _check_shape(solver.otf, rhs)
    return _real_part(np.fft.ifft2(np.fft.fft2(rhs) / solver.denom))
