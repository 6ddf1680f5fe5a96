import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from pnpdeblur.grid import Psf
from pnpdeblur.linops import psf_to_otf


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def delta_psf():
    kernel = np.zeros((3, 3))
    kernel[1, 1] = 1.0
    return Psf(kernel=kernel, anchor=(1, 1))


def random_unit_kernel(rng, size=3):
    kernel = rng.random((size, size)) + 0.05
    kernel /= kernel.sum()
    return Psf(kernel=kernel, anchor=(size // 2, size // 2))


@pytest.fixture
def delta_otf(delta_psf):
    return psf_to_otf(delta_psf, 8, 8)
