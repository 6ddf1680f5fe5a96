import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from pnpdeblur.errors import DimensionError, DomainError, ParameterError
from pnpdeblur.grid import Otf, Problem, Psf, as_grid, elementwise, new_image


class TestNewImage:
    def test_zero_fill(self):
        grid = new_image(2, 2, 0.0)
        assert grid.shape == (2, 2)
        assert np.array_equal(grid, np.zeros((2, 2)))

    def test_constant_fill(self):
        assert np.array_equal(new_image(1, 3, 0.5), [[0.5, 0.5, 0.5]])

    @pytest.mark.parametrize("shape", [(0, 4), (4, 0), (-1, 2)])
    def test_degenerate_shape(self, shape):
        with pytest.raises(DimensionError):
            new_image(*shape, 1.0)

    def test_nonfinite_fill(self):
        with pytest.raises(DomainError):
            new_image(2, 2, np.nan)

    def test_round_trip_bit_exact(self, rng):
        fill = rng.standard_normal()
        grid = new_image(5, 7, fill)
        assert (grid == fill).all()


class TestElementwise:
    def test_add(self):
        out = elementwise("add", np.array([[1.0, 2.0]]), np.array([[3.0, 4.0]]))
        assert np.array_equal(out, [[4.0, 6.0]])

    def test_sub_self_cancels(self, rng):
        a = rng.random((4, 5))
        assert np.array_equal(elementwise("sub", a, a), np.zeros((4, 5)))

    def test_div_by_zero(self):
        with pytest.raises(DomainError):
            elementwise("div", np.array([[1.0]]), np.array([[0.0]]))

    def test_shape_mismatch(self):
        with pytest.raises(DimensionError):
            elementwise("add", np.zeros((2, 2)), np.zeros((2, 3)))

    def test_unknown_op(self):
        with pytest.raises(ParameterError):
            elementwise("pow", np.zeros((2, 2)), np.zeros((2, 2)))

    @given(
        a=arrays(np.float64, (3, 4), elements=st.floats(-10, 10)),
        b=arrays(np.float64, (3, 4), elements=st.floats(-10, 10)),
    )
    def test_shape_preserving_and_transpose_commutes(self, a, b):
        for op in ("add", "sub", "mul", "max"):
            out = elementwise(op, a, b)
            assert out.shape == a.shape
            assert np.array_equal(out.T, elementwise(op, a.T, b.T))


class TestAsGrid:
    def test_rejects_non_2d(self):
        with pytest.raises(DimensionError):
            as_grid(np.zeros(4))

    def test_rejects_nan(self):
        with pytest.raises(DomainError):
            as_grid([[1.0, np.nan]])


class TestPsf:
    def test_unit_sum_enforced(self):
        with pytest.raises(DomainError):
            Psf(kernel=np.full((3, 3), 0.2), anchor=(1, 1))

    def test_negative_entries_rejected(self):
        kernel = np.full((3, 3), 1.0 / 7.0)
        kernel[0, 0] = -1.0 / 7.0
        kernel[1, 1] += 2.0 / 7.0
        with pytest.raises(DomainError):
            Psf(kernel=kernel, anchor=(1, 1))

    def test_anchor_bounds(self):
        kernel = np.zeros((3, 3))
        kernel[1, 1] = 1.0
        with pytest.raises(DimensionError):
            Psf(kernel=kernel, anchor=(3, 1))


class TestOtf:
    def test_dc_gain_validated(self):
        spectrum = np.ones((4, 4), dtype=complex)
        spectrum[0, 0] = 1.5
        with pytest.raises(DomainError):
            Otf(height=4, width=4, spectrum=spectrum)

    def test_shape_validated(self):
        with pytest.raises(DimensionError):
            Otf(height=4, width=4, spectrum=np.ones((3, 4), dtype=complex))


class TestProblem:
    def test_negative_data_rejected(self, delta_otf):
        g = np.full((8, 8), 0.5)
        g[0, 0] = -0.1
        with pytest.raises(DomainError):
            Problem(g=g, otf=delta_otf)

    def test_shape_mismatch(self, delta_otf):
        with pytest.raises(DimensionError):
            Problem(g=np.zeros((4, 4)), otf=delta_otf)

    def test_negative_background(self, delta_otf):
        with pytest.raises(DomainError):
            Problem(g=np.zeros((8, 8)), otf=delta_otf, b=-1.0)
