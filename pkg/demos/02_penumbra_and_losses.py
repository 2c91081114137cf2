"""
Penumbra bands and training losses
==================================

The losses used to train a decomposition network are plain functions of
images, mattes and masks.  Here they are evaluated on a perfect and on a
deliberately wrong matte to show what each term reacts to.
"""
import numpy as np

from shadowdecomp.losses import (LossWeights, boundary_loss, matting_loss, penumbra_loss,
                                 smoothness_loss, total_weakly)
from shadowdecomp.morphmask import penumbra_masks
from shadowdecomp.pipeline import decompose_pair, remove_shadow
from shadowdecomp.synthetic import make_scene

scene = make_scene(np.random.default_rng(1), 128, 128, sigma=1.2)
pen = penumbra_masks(scene.mask, r_in=5, r_out=5)
print("band sizes:", {k: int(getattr(pen, k).sum()) for k in ("inner", "outer", "umbra")})

params, good, _ = decompose_pair(scene.shadow, scene.shadow_free, scene.mask)

# %% A hard binary matte: no soft penumbra at all
hard = scene.mask.astype(float)

# %% Compare the two mattes term by term
for name, matte in [("recovered", good), ("binary", hard)]:
    out = remove_shadow(scene.shadow, scene.mask, params, matte)
    terms = {
        "smoothness": smoothness_loss(matte),
        "matting": matting_loss(matte, pen),
        "boundary": boundary_loss(out, pen),
        "gan": 0.0,
    }
    rep = total_weakly(terms)
    pen_l1 = penumbra_loss(out, scene.shadow_free, pen)
    print(f"{name:>9}: penumbra L1 {pen_l1:.4f}, weakly total {rep.total:.4f}",
          {k: round(v, 4) for k, v in terms.items()})

print("default weights:", LossWeights().fully(), LossWeights().weakly())
