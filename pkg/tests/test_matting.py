import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shadowdecomp.matting import (enforce_matte_constraints, interpolate_matte,
                                  matte_from_gaussian_boundary)
from shadowdecomp.morphmask import penumbra_masks


def test_enforce_empty_mask_zeroes_everything():
    pen = penumbra_masks(np.zeros((6, 6), bool))
    np.testing.assert_array_equal(enforce_matte_constraints(np.full((6, 6), 0.5), pen), 0.0)


def test_enforce_full_frame_keeps_border_band():
    pen = penumbra_masks(np.ones((6, 6), bool), r_in=1, r_out=1)
    out = enforce_matte_constraints(np.full((6, 6), 0.5), pen)
    expected = np.full((6, 6), 0.5)
    expected[1:5, 1:5] = 1.0
    np.testing.assert_array_equal(out, expected)


def test_enforce_idempotent_and_conforming(rng):
    for _ in range(20):
        m = rng.random((16, 16)) > 0.5
        pen = penumbra_masks(m, 2, 2)
        once = enforce_matte_constraints(rng.random((16, 16)), pen)
        np.testing.assert_array_equal(enforce_matte_constraints(once, pen), once)


def test_enforce_dimension_mismatch():
    pen = penumbra_masks(np.zeros((4, 4), bool))
    with pytest.raises(ValueError):
        enforce_matte_constraints(np.zeros((4, 5)), pen)


def test_interpolate_constant():
    np.testing.assert_array_equal(interpolate_matte(np.full((5, 5), 0.3), 17, 9), 0.3)


def test_interpolate_smooth_round_trip():
    m = np.zeros((128, 128), bool)
    m[30:100, 20:90] = True
    matte = matte_from_gaussian_boundary(m, 4.0)
    back = interpolate_matte(interpolate_matte(matte, 64, 64), 128, 128)
    assert np.abs(back - matte).max() < 0.05


@settings(max_examples=40)
@given(seed=st.integers(0, 2 ** 32 - 1), ow=st.integers(1, 40), oh=st.integers(1, 40))
def test_interpolate_stays_in_range(seed, ow, oh):
    matte = np.random.default_rng(seed).random((7, 9))
    out = interpolate_matte(matte, ow, oh)
    assert out.shape == (oh, ow)
    assert out.min() >= 0 and out.max() <= 1


def test_gaussian_sigma_zero_is_binary(rng):
    m = rng.random((8, 8)) > 0.5
    np.testing.assert_array_equal(matte_from_gaussian_boundary(m, 0), m.astype(float))


def test_gaussian_empty_mask():
    np.testing.assert_array_equal(matte_from_gaussian_boundary(np.zeros((9, 9), bool), 2.5), 0.0)


def test_gaussian_center_weight():
    m = np.zeros((7, 7), bool)
    m[3, 3] = True
    out = matte_from_gaussian_boundary(m, 1.0)
    # 1-D taps exp(-x^2/2), x in -3..3, normalised; the 2-D centre is the square of the middle tap
    taps = np.exp(-0.5 * np.arange(-3, 4) ** 2)
    centre = (taps[3] / taps.sum()) ** 2
    assert abs(out[3, 3] - centre) < 1e-15
    assert abs(out[3, 3] - 0.15924112569070245) < 1e-12


def test_gaussian_conserves_mass_for_interior_masks():
    m = np.zeros((40, 40), bool)
    m[10:25, 12:30] = True
    for sigma in (0.7, 1.5, 3.0):
        assert abs(matte_from_gaussian_boundary(m, sigma).sum() - m.sum()) < 1e-6


def test_gaussian_negative_sigma():
    with pytest.raises(ValueError):
        matte_from_gaussian_boundary(np.zeros((3, 3), bool), -1)
