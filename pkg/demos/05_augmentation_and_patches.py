"""
Shadow augmentation and patch sets
==================================

One paired example can be re-shadowed with scaled gains to give darker or
lighter variants.  For weak supervision, images are tiled into overlapping
patches labelled as no shadow (N), boundary (B) or full shadow (F).
"""
import warnings

import numpy as np

from shadowdecomp.patches import extract_and_classify
from shadowdecomp.pipeline import AUGMENT_KS, augment_batch
from shadowdecomp.synthetic import make_scene

scene = make_scene(np.random.default_rng(4), 480, 640, sigma=2.0)

# %% Variants for every default scale factor
with warnings.catch_warnings():
    warnings.simplefilter("ignore", RuntimeWarning)  # k < 1 may push a gain below 1
    batch = augment_batch(scene.shadow_free, scene.shadow, scene.mask)
base = scene.shadow[scene.mask].mean()
print(f"original shadow-region mean {base:.4f}")
for k, (img, p) in zip(AUGMENT_KS, batch):
    print(f"k={k}: mean {img[scene.mask].mean():.4f}, w = {np.round(p.w, 3)}")

# %% Tiling a 640x480 frame
grid, pset = extract_and_classify(scene.shadow, scene.mask, patch_size=128, step=32)
print(f"{len(grid)} patches:", pset.counts())
