"""Shadow matte utilities: hard constraints, resolution transfer, soft-mask synthesis."""
from __future__ import annotations

import math

import numpy as np
from scipy import ndimage

from .imagecore import as_gray, as_mask, check_same_hw, resize_bilinear
from .morphmask import PenumbraMasks


def enforce_matte_constraints(matte, pen: PenumbraMasks) -> np.ndarray:
    """Pin the matte to 1 on the umbra and 0 outside the dilated mask.

    The penumbra band (inner and outer rings) is left untouched.
    """
    alpha = as_gray(matte, "matte").copy()
    check_same_hw(alpha, pen.inner, names=("matte", "penumbra masks"))
    alpha[pen.umbra] = 1.0
    alpha[~pen.dilated] = 0.0
    return alpha


def interpolate_matte(matte, out_w, out_h) -> np.ndarray:
    """Bilinearly resample a matte to a new resolution."""
    return np.clip(resize_bilinear(as_gray(matte, "matte"), out_w, out_h), 0.0, 1.0)


def gaussian_kernel1d(sigma) -> np.ndarray:
    """Normalised Gaussian taps on ``|x| <= 3 sigma``."""
    radius = int(math.floor(3.0 * sigma + 1e-9))
    x = np.arange(-radius, radius + 1, dtype=np.float64)
    k = np.exp(-0.5 * (x / sigma) ** 2)
    return k / k.sum()


def matte_from_gaussian_boundary(mask, sigma) -> np.ndarray:
    """Soft matte from a binary mask by separable Gaussian blur (zero outside the frame).

    Only used to fabricate soft shadows for fixtures and demos.
    """
    if sigma < 0:
        raise ValueError(f"sigma must be nonnegative, got {sigma}")
    m = as_mask(mask).astype(np.float64)
    if sigma == 0:
        return m
    k = gaussian_kernel1d(sigma)
    out = ndimage.convolve1d(m, k, axis=0, mode="constant", cval=0.0)
    out = ndimage.convolve1d(out, k, axis=1, mode="constant", cval=0.0)
    return np.clip(out, 0.0, 1.0)
