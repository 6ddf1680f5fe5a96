"""Parity between the compiled extension and the NumPy fallback."""

import numpy as np
import pytest

from pnpdeblur import _kernels_py, kernels

pytestmark = pytest.mark.skipif(
    not kernels.HAVE_COMPILED, reason="compiled kernels not built"
)


@pytest.fixture
def compiled():
    from pnpdeblur import _kernels

    return _kernels


def test_implementation_labels(compiled):
    assert compiled.IMPLEMENTATION == "compiled"
    assert _kernels_py.IMPLEMENTATION == "python"
    assert kernels.IMPLEMENTATION == "compiled"


def test_prox_kl_bit_exact(compiled, rng):
    for _ in range(20):
        v = rng.uniform(-20, 20, size=(17, 13))
        g = rng.uniform(0, 10, size=(17, 13))
        b = rng.uniform(0, 1)
        gamma = 10 ** rng.uniform(-3, 3)
        assert np.array_equal(
            compiled.prox_kl(v, g, b, gamma), _kernels_py.prox_kl(v, g, b, gamma)
        )


def test_soft_threshold_bit_exact(compiled, rng):
    for t in (0.0, 0.3, 2.5):
        v = rng.standard_normal((23, 9))
        assert np.array_equal(
            compiled.soft_threshold(v, t), _kernels_py.soft_threshold(v, t)
        )


def test_kl_value_close(compiled, rng):
    # Summation order differs between the two paths, so compare to 1e-12 rel.
    w = rng.uniform(0.01, 5, size=(31, 17))
    g = rng.uniform(0, 5, size=(31, 17))
    g[rng.random((31, 17)) < 0.2] = 0.0
    a = compiled.kl_value(w, g)
    b = _kernels_py.kl_value(w, g)
    assert a == pytest.approx(b, rel=1e-12, abs=1e-12)


def test_kl_value_infinite_when_w_zero_g_positive(compiled):
    w = np.array([[0.0, 1.0]])
    g = np.array([[2.0, 1.0]])
    assert compiled.kl_value(w, g) == np.inf
    assert _kernels_py.kl_value(w, g) == np.inf
