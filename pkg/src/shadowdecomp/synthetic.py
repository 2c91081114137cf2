"""Synthetic shadow scenes for tests and demos.

Nothing here is needed to process real data.  It fabricates textured
shadow-free images, blob-shaped masks and soft mattes so that every formula
can be checked end to end against a known ground truth.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .illum import ShadowParams, synth_shadow
from .matting import matte_from_gaussian_boundary


def textured_image(rng, h, w, lo=0.2, hi=0.9, smooth=2.0) -> np.ndarray:
    """Smooth random texture with every value in [lo, hi]."""
    noise = rng.random((h, w, 3))
    if smooth > 0:
        noise = ndimage.gaussian_filter(noise, sigma=(smooth, smooth, 0), mode="reflect")
    noise -= noise.min(axis=(0, 1))
    noise /= np.maximum(noise.max(axis=(0, 1)), 1e-12)
    return lo + (hi - lo) * noise


def ellipse_mask(h, w, cy, cx, ry, rx) -> np.ndarray:
    yy, xx = np.mgrid[0:h, 0:w]
    return ((yy + 0.5 - cy) / ry) ** 2 + ((xx + 0.5 - cx) / rx) ** 2 <= 1.0


def random_mask(rng, h, w, margin=12) -> np.ndarray:
    """One random ellipse comfortably inside the frame."""
    ry = rng.uniform(0.15, 0.3) * h
    rx = rng.uniform(0.15, 0.3) * w
    cy = rng.uniform(margin + ry, h - margin - ry)
    cx = rng.uniform(margin + rx, w - margin - rx)
    return ellipse_mask(h, w, cy, cx, ry, rx)


def random_params(rng, base_range=(1.4, 2.6), spread=0.3, b_range=(0.0, 0.1)) -> ShadowParams:
    """Gains share a common base with a per-channel jitter of at most ``spread``.

    Real shadows are lit by one ambient source, so their channel gains are
    strongly correlated.  A single scalar matte cannot exactly undo a
    penumbra darkened with very different per-channel gains, so the jitter
    bounds how far the synthetic data strays from that model.
    """
    base = rng.uniform(*base_range)
    return ShadowParams(base + rng.uniform(-spread, spread, 3), rng.uniform(*b_range, 3))


@dataclass
class Scene:
    shadow_free: np.ndarray
    shadow: np.ndarray
    mask: np.ndarray
    matte: np.ndarray  # decomposition convention: 1 = umbra
    params: ShadowParams


def make_scene(rng, h=64, w=64, sigma=1.2, params=None, mask=None, sf=None) -> Scene:
    """Cast a soft shadow onto a random texture.

    ``sigma`` is the blur of the mask edge; keep ``3 * sigma`` at or below
    the erosion radius so the eroded mask is pure umbra.
    """
    sf = textured_image(rng, h, w) if sf is None else sf
    mask = random_mask(rng, h, w) if mask is None else mask
    params = random_params(rng) if params is None else params
    matte = matte_from_gaussian_boundary(mask, sigma)
    shadow, _ = synth_shadow(sf, 1.0 - matte, params, 1.0)
    return Scene(sf, shadow, mask, matte, params)


def expected_decomposition_matte(lit_matte, w) -> np.ndarray:
    """Matte that exactly inverts a lit-is-one synthesis with gains ``w``.

    Casting ``sf * m + (sf - b) / w * (1 - m)`` and solving the
    decomposition for alpha gives ``(1 - m) / (1 + m (w - 1))`` per channel;
    the channel mean is returned, matching how mattes are recovered.
    """
    m = np.asarray(lit_matte, dtype=np.float64)[..., None]
    return ((1.0 - m) / (1.0 + m * (np.asarray(w) - 1.0))).mean(axis=2)
