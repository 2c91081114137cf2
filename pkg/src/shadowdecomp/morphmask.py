"""Binary morphology with a square structuring element and penumbra bands."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .imagecore import as_mask


def _check_radius(radius):
    if radius < 0 or int(radius) != radius:
        raise ValueError(f"radius must be a nonnegative integer, got {radius}")
    return int(radius)


def erode(mask, radius) -> np.ndarray:
    """Erode with a (2r+1) x (2r+1) square; pixels outside the frame count as non-shadow."""
    m = as_mask(mask)
    r = _check_radius(radius)
    if r == 0:
        return m.copy()
    size = 2 * r + 1
    return ndimage.minimum_filter(m.view(np.uint8), size=size, mode="constant", cval=0).astype(bool)


def dilate(mask, radius) -> np.ndarray:
    """Dilate with a (2r+1) x (2r+1) square; outside the frame contributes nothing."""
    m = as_mask(mask)
    r = _check_radius(radius)
    if r == 0:
        return m.copy()
    size = 2 * r + 1
    return ndimage.maximum_filter(m.view(np.uint8), size=size, mode="constant", cval=0).astype(bool)


@dataclass
class PenumbraMasks:
    """Bands on either side of a shadow boundary.

    ``inner`` is the ring just inside the mask (mask minus its erosion),
    ``outer`` the ring just outside (dilation minus mask).  ``eroded`` is
    the umbra used for hard constraints.
    """

    inner: np.ndarray
    outer: np.ndarray
    dilated: np.ndarray
    eroded: np.ndarray

    @property
    def mask(self) -> np.ndarray:
        return self.inner | self.eroded

    @property
    def umbra(self) -> np.ndarray:
        return self.mask & ~self.inner

    @property
    def band(self) -> np.ndarray:
        return self.inner | self.outer

    @property
    def shape(self):
        return self.inner.shape


def penumbra_masks(mask, r_in=5, r_out=5) -> PenumbraMasks:
    m = as_mask(mask)
    if r_in < 1 or r_out < 1:
        raise ValueError(f"penumbra radii must be >= 1, got r_in={r_in}, r_out={r_out}")
    dil = dilate(m, r_out)
    ero = erode(m, r_in)
    return PenumbraMasks(inner=m & ~ero, outer=dil & ~m, dilated=dil, eroded=ero)
