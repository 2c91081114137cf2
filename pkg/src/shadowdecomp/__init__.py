"""Physics-based shadow image decomposition.

Shadow removal as ``I_free = I_shadow * (1 - alpha) + (w * I_shadow + b) * alpha``
with per-channel illumination parameters ``(w, b)`` and a shadow matte
``alpha``; plus the tooling to fit, evaluate and augment that model.
"""
__version__ = "0.1.0"

from .illum import (Box, ShadowParams, alpha_from_triplet, apply_residual, compose, darken,
                    lit_matte, relight, synth_shadow)
from .imagecore import load_image, load_mask, resize_bilinear, rgb_to_lab, save_image
from .morphmask import PenumbraMasks, dilate, erode, penumbra_masks
from .paramfit import fit_shadow_params, sample_pairs, solve_box_ls
from .pipeline import augment_batch, decompose_pair, remove_shadow

__all__ = [
    "Box", "PenumbraMasks", "ShadowParams", "alpha_from_triplet", "apply_residual",
    "augment_batch", "compose", "darken", "decompose_pair", "dilate", "erode",
    "fit_shadow_params", "lit_matte", "load_image", "load_mask", "penumbra_masks", "relight",
    "remove_shadow", "resize_bilinear", "rgb_to_lab", "sample_pairs", "save_image",
    "solve_box_ls", "synth_shadow",
]
