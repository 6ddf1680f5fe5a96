"""Core data types: images, blur kernels, transfer functions, problems.

An image grid is a 2-D C-contiguous ``float64`` ndarray: ``shape == (height,
width)``, row-major values, origin at the top-left. Every solver-side
quantity (iterates, multipliers, observed data) uses this one representation;
file formats convert at the boundary. Grids handed to solver steps are
treated as immutable; operations return fresh arrays.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, DomainError, ParameterError

__all__ = [
    "ImageGrid",
    "Psf",
    "Otf",
    "Problem",
    "new_image",
    "as_grid",
    "elementwise",
    "require_finite",
]

# Alias for annotations: a (height, width) float64 ndarray.
ImageGrid = np.ndarray


def new_image(height: int, width: int, fill: float = 0.0) -> ImageGrid:
    """Allocate a ``height x width`` grid with every pixel equal to ``fill``."""
    if height < 1 or width < 1:
        raise DimensionError(f"grid dimensions must be >= 1, got {height}x{width}")
    fill = float(fill)
    if not np.isfinite(fill):
        raise DomainError(f"fill value must be finite, got {fill}")
    return np.full((height, width), fill, dtype=np.float64)


def as_grid(values, *, name: str = "grid") -> ImageGrid:
    """Coerce ``values`` to a valid grid (2-D, float64, finite, contiguous)."""
    arr = np.ascontiguousarray(values, dtype=np.float64)
    if arr.ndim != 2:
        raise DimensionError(f"{name} must be 2-D, got shape {arr.shape}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise DimensionError(f"{name} has degenerate shape {arr.shape}")
    require_finite(arr, name)
    return arr


def require_finite(grid: ImageGrid, name: str = "grid") -> None:
    if not np.isfinite(grid).all():
        raise DomainError(f"{name} contains non-finite values")


def _check_same_shape(a: ImageGrid, b: ImageGrid) -> None:
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch: {a.shape} vs {b.shape}")


_ELEMENTWISE = {
    "add": np.add,
    "sub": np.subtract,
    "mul": np.multiply,
    "max": np.maximum,
}


def elementwise(op: str, a: ImageGrid, b: ImageGrid) -> ImageGrid:
    """Pointwise ``add``/``sub``/``mul``/``div``/``max`` of two same-shape grids."""
    _check_same_shape(a, b)
    if op == "div":
        if np.any(b == 0.0):
            raise DomainError("division by zero entry")
        return np.divide(a, b)
    try:
        fn = _ELEMENTWISE[op]
    except KeyError:
        raise ParameterError(f"unknown elementwise op {op!r}") from None
    return fn(a, b)


@dataclass(frozen=True)
class Psf:
    """Spatial blur kernel: nonnegative, unit sum, with a distinguished center.

    ``kernel`` is stored compactly (it may be smaller than the image it will
    blur); ``anchor`` is the (row, col) of the kernel center, the pixel that
    maps a point source onto itself.
    """

    kernel: ImageGrid
    anchor: tuple[int, int]

    def __post_init__(self):
        k = as_grid(self.kernel, name="psf kernel")
        object.__setattr__(self, "kernel", k)
        r, c = self.anchor
        if not (0 <= r < k.shape[0] and 0 <= c < k.shape[1]):
            raise DimensionError(f"anchor {self.anchor} outside kernel {k.shape}")
        if np.any(k < 0.0):
            raise DomainError("psf kernel has negative entries")
        total = float(k.sum())
        if abs(total - 1.0) > 1e-12:
            raise DomainError(f"psf kernel sum {total!r} not 1 within 1e-12")


@dataclass(frozen=True)
class Otf:
    """Frequency response of a centered kernel on a fixed grid size.

    ``spectrum`` is the 2-D DFT of the kernel circularly shifted so its
    anchor sits at index (0, 0). For a unit-sum kernel the zero-frequency
    entry is 1, which is validated here.
    """

    height: int
    width: int
    spectrum: np.ndarray

    def __post_init__(self):
        spec = np.ascontiguousarray(self.spectrum, dtype=np.complex128)
        if spec.shape != (self.height, self.width):
            raise DimensionError(
                f"spectrum shape {spec.shape} != ({self.height}, {self.width})"
            )
        if abs(spec[0, 0] - 1.0) > 1e-10:
            raise DomainError(f"zero-frequency gain {spec[0, 0]!r} not 1 within 1e-10")
        object.__setattr__(self, "spectrum", spec)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.height, self.width)


@dataclass(frozen=True)
class Problem:
    """One restoration task: observed data, blur operator, background, strength target.

    ``beta_gamma_target`` is the default product of regularization weight and
    penalty parameter handed to the denoiser slot each iteration.
    """

    g: ImageGrid
    otf: Otf
    b: float = 0.0
    beta_gamma_target: float = 0.1

    def __post_init__(self):
        g = as_grid(self.g, name="observed data g")
        object.__setattr__(self, "g", g)
        if g.shape != self.otf.shape:
            raise DimensionError(
                f"data shape {g.shape} != operator shape {self.otf.shape}"
            )
        if np.any(g < 0.0):
            raise DomainError("observed data g has negative entries")
        if self.b < 0.0:
            raise DomainError(f"background b must be >= 0, got {self.b}")
        if not self.beta_gamma_target > 0.0:
            raise ParameterError(
                f"beta_gamma_target must be > 0, got {self.beta_gamma_target}"
            )

    @property
    def shape(self) -> tuple[int, int]:
        return self.g.shape
