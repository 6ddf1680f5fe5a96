"""Restoration quality indices: MSE, relative error, PSNR, SSIM."""

from dataclasses import dataclass

import numpy as np
from scipy import signal

from .errors import DimensionError, DomainError, ParameterError
from .grid import ImageGrid, _check_same_shape

__all__ = ["MetricReport", "mse", "relative_error", "psnr", "ssim", "compute_metrics"]

_SSIM_WINDOW = 11
_SSIM_SIGMA = 1.5


@dataclass(frozen=True)
class MetricReport:
    mse: float
    re: float
    psnr: float
    ssim: float


def mse(a: ImageGrid, b: ImageGrid) -> float:
    """Mean squared pixel difference."""
    _check_same_shape(a, b)
    diff = np.subtract(a, b, dtype=np.float64)
    return float(np.mean(diff * diff))


def relative_error(x_true: ImageGrid, x_rec: ImageGrid) -> float:
    """l2 error normalized by the true image's norm."""
    _check_same_shape(x_true, x_rec)
    denom = float(np.linalg.norm(np.ravel(x_true)))
    if denom == 0.0:
        raise DomainError("x_true is identically zero")
    return float(np.linalg.norm(np.ravel(x_true - x_rec)) / denom)


def psnr(x_true: ImageGrid, x_rec: ImageGrid, data_range: float = 1.0, ceiling: float = 99.0) -> float:
    """Peak signal-to-noise ratio in dB, capped at ``ceiling`` for identical images."""
    if not data_range > 0.0:
        raise ParameterError(f"data_range must be > 0, got {data_range}")
    err = mse(x_true, x_rec)
    if err == 0.0:
        return ceiling
    return min(ceiling, 10.0 * np.log10(data_range * data_range / err))


def _gaussian_window() -> np.ndarray:
    coords = np.arange(_SSIM_WINDOW, dtype=np.float64) - (_SSIM_WINDOW - 1) / 2.0
    prof = np.exp(-(coords**2) / (2.0 * _SSIM_SIGMA**2))
    win = np.outer(prof, prof)
    return win / win.sum()


def ssim(x_true: ImageGrid, x_rec: ImageGrid, data_range: float = 1.0) -> float:
    """Mean local structural similarity, Gaussian-weighted 11x11 windows.

    Local means/variances/covariance are weighted moments over each window
    (no sample-size correction); the map is averaged over the fully valid
    interior. Symmetric in its arguments; equal images score exactly 1.
    """
    _check_same_shape(x_true, x_rec)
    if not data_range > 0.0:
        raise ParameterError(f"data_range must be > 0, got {data_range}")
    h, w = np.shape(x_true)
    if h < _SSIM_WINDOW or w < _SSIM_WINDOW:
        raise DimensionError(
            f"image {h}x{w} smaller than the {_SSIM_WINDOW}x{_SSIM_WINDOW} window"
        )
    a = np.asarray(x_true, dtype=np.float64)
    b = np.asarray(x_rec, dtype=np.float64)
    win = _gaussian_window()

    def local(img):
        return signal.fftconvolve(img, win, mode="valid")

    mu_a = local(a)
    mu_b = local(b)
    var_a = local(a * a) - mu_a * mu_a
    var_b = local(b * b) - mu_b * mu_b
    cov = local(a * b) - mu_a * mu_b

    c1 = (0.01 * data_range) ** 2
    c2 = (0.03 * data_range) ** 2
    num = (2.0 * mu_a * mu_b + c1) * (2.0 * cov + c2)
    den = (mu_a * mu_a + mu_b * mu_b + c1) * (var_a + var_b + c2)
    return float(np.mean(num / den))


def compute_metrics(x_true: ImageGrid, x_rec: ImageGrid, data_range: float = 1.0) -> MetricReport:
    """All four indices in one report."""
    return MetricReport(
        mse=mse(x_true, x_rec),
        re=relative_error(x_true, x_rec),
        psnr=psnr(x_true, x_rec, data_range),
        ssim=ssim(x_true, x_rec, data_range),
    )
