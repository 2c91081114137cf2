"""
Evaluating a shadow-removal result
==================================

Results are scored by mean absolute error in CIELAB at a fixed 256x256
resolution, split into shadow, non-shadow and all pixels.  Ground truth
captured at a different moment often has a slight colour drift, which an
affine per-channel correction fitted on non-shadow pixels removes first.
"""
import numpy as np

from shadowdecomp.evaluation import color_correct_gt, mae_report
from shadowdecomp.pipeline import decompose_pair, remove_shadow
from shadowdecomp.synthetic import make_scene

scene = make_scene(np.random.default_rng(3), 200, 240, sigma=1.0)
params, matte, _ = decompose_pair(scene.shadow, scene.shadow_free, scene.mask)
result = remove_shadow(scene.shadow, scene.mask, params, matte)

# %% Input vs result, both against the clean image
print("input :", mae_report(scene.shadow, scene.shadow_free, scene.mask).to_dict()["mae"])
print("result:", mae_report(result, scene.shadow_free, scene.mask).to_dict()["mae"])

# %% A drifted ground truth inflates the non-shadow error...
drifted = np.clip(scene.shadow_free * [1.08, 1.0, 0.93] + 0.02, 0, 1)
print("drifted GT:  ", mae_report(result, drifted, scene.mask).to_dict()["mae"])

# ...until it is colour-corrected towards the shadow image
fixed = color_correct_gt(scene.shadow, drifted, scene.mask)
print("corrected GT:", mae_report(result, fixed, scene.mask).to_dict()["mae"])
