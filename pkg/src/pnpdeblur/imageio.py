"""Image file I/O: binary PGM (8/16-bit) and PNG (8/16-bit gray, 8-bit RGB).

Solver-side grids hold raw intensities divided by the format maximum, so
ground truths land in [0, 1]. Multi-channel images become one grid per
channel; channels are processed independently downstream.
"""

import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image

from .errors import DimensionError, ParameterError
from .grid import ImageGrid

__all__ = ["LoadedImage", "read_image", "write_image"]


@dataclass(frozen=True)
class LoadedImage:
    channels: list  # one [0, 1] grid per channel
    maxval: int  # format maximum the intensities were divided by

    @property
    def shape(self) -> tuple[int, int]:
        return self.channels[0].shape


def _read_pgm(path: Path) -> LoadedImage:
    data = path.read_bytes()
    if not data.startswith(b"P5"):
        raise ParameterError(f"{path}: not a binary PGM (P5) file")
    # Header: magic, width, height, maxval; '#' comments allowed between tokens.
    tokens = []
    pos = 2
    while len(tokens) < 3:
        m = re.compile(rb"\s*(?:#[^\n]*\n\s*)*(\d+)").match(data, pos)
        if m is None:
            raise ParameterError(f"{path}: truncated PGM header")
        tokens.append(int(m.group(1)))
        pos = m.end()
    width, height, maxval = tokens
    if not 0 < maxval < 65536:
        raise ParameterError(f"{path}: bad PGM maxval {maxval}")
    pos += 1  # single whitespace after maxval
    dtype = np.dtype(">u2") if maxval > 255 else np.dtype("u1")
    count = height * width
    if len(data) - pos < count * dtype.itemsize:
        raise ParameterError(f"{path}: PGM payload shorter than {height}x{width}")
    raw = np.frombuffer(data, dtype=dtype, count=count, offset=pos)
    grid = raw.reshape(height, width).astype(np.float64) / maxval
    return LoadedImage(channels=[grid], maxval=maxval)


def _write_pgm(path: Path, grid: np.ndarray, maxval: int) -> None:
    header = f"P5\n{grid.shape[1]} {grid.shape[0]}\n{maxval}\n".encode()
    dtype = np.dtype(">u2") if maxval > 255 else np.dtype("u1")
    path.write_bytes(header + grid.astype(dtype).tobytes())


def _read_png(path: Path) -> LoadedImage:
    with Image.open(path) as im:
        if im.mode in ("P", "RGBA", "LA"):
            im = im.convert("RGB" if im.mode in ("P", "RGBA") else "L")
        if im.mode == "L":
            arr = np.asarray(im, dtype=np.float64)
            return LoadedImage(channels=[arr / 255.0], maxval=255)
        if im.mode in ("I", "I;16"):
            arr = np.asarray(im, dtype=np.float64)
            return LoadedImage(channels=[arr / 65535.0], maxval=65535)
        if im.mode == "RGB":
            arr = np.asarray(im, dtype=np.float64) / 255.0
            return LoadedImage(channels=[arr[:, :, i].copy() for i in range(3)], maxval=255)
    raise ParameterError(f"{path}: unsupported PNG mode")


def _write_png(path: Path, quantized: list, maxval: int) -> None:
    if maxval > 255:
        if len(quantized) != 1:
            raise ParameterError("16-bit PNG output is grayscale only")
        Image.fromarray(quantized[0].astype(np.uint16)).save(path)
    elif len(quantized) == 1:
        Image.fromarray(quantized[0].astype(np.uint8), mode="L").save(path)
    elif len(quantized) == 3:
        Image.fromarray(np.stack(quantized, axis=-1).astype(np.uint8), mode="RGB").save(path)
    else:
        raise ParameterError(f"cannot write {len(quantized)} channels as PNG")


def read_image(path) -> LoadedImage:
    """Load a PGM or PNG file as [0, 1] grids, one per channel."""
    path = Path(path)
    suffix = path.suffix.lower()
    if suffix == ".pgm":
        return _read_pgm(path)
    if suffix == ".png":
        return _read_png(path)
    raise ParameterError(f"{path}: unsupported image format {suffix!r}")


def write_image(path, channels: list, maxval: int = 255) -> None:
    """Quantize [0, 1] grids to ``maxval`` levels and write PGM or PNG.

    Values are clipped to [0, 1] first; PGM accepts one channel, PNG one or
    three (three only at 8 bit).
    """
    path = Path(path)
    if not channels:
        raise ParameterError("no channels to write")
    shape = np.shape(channels[0])
    for ch in channels[1:]:
        if np.shape(ch) != shape:
            raise DimensionError("channel shapes differ")
    quantized = [
        np.rint(np.clip(ch, 0.0, 1.0) * maxval).astype(np.int64) for ch in channels
    ]
    suffix = path.suffix.lower()
    if suffix == ".pgm":
        if len(quantized) != 1:
            raise ParameterError("PGM output is grayscale only")
        _write_pgm(path, quantized[0], maxval)
    elif suffix == ".png":
        _write_png(path, quantized, maxval)
    else:
        raise ParameterError(f"{path}: unsupported image format {suffix!r}")
