"""Network-free decomposition pipeline.

Given paired data the shadow parameters and matte are computed analytically
(these are the supervision targets the estimators would be trained on), and
they can be recombined to remove the shadow or to cast new synthetic ones.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .illum import (Box, ShadowParams, alpha_from_triplet, apply_residual, compose,
                    lit_matte, relight, synth_shadow)
from .imagecore import as_image, as_mask, check_same_hw
from .morphmask import PenumbraMasks, penumbra_masks
from .paramfit import fit_shadow_params

AUGMENT_KS = (0.8, 0.9, 1.1, 1.2)


@dataclass
class DecomposeConfig:
    erode_px: int = 5
    r_in: int = 5
    r_out: int = 5
    box: Box = field(default_factory=Box)
    eps_den: float = 1e-4


def decompose_pair(shadow, shadow_free, mask, cfg: DecomposeConfig | None = None):
    """Fit ``(w, b)`` on the umbra and solve for the matte everywhere.

    Returns ``(params, matte, penumbra_masks)``.
    """
    cfg = cfg or DecomposeConfig()
    shadow = as_image(shadow, "shadow")
    shadow_free = as_image(shadow_free, "shadow_free")
    mask = as_mask(mask)
    check_same_hw(shadow, shadow_free, mask, names=("shadow", "shadow_free", "mask"))

    params = fit_shadow_params(shadow, shadow_free, mask, cfg.erode_px, cfg.box)
    pen = penumbra_masks(mask, cfg.r_in, cfg.r_out)
    relit = relight(shadow, params)
    matte = alpha_from_triplet(shadow, shadow_free, relit, mask, pen.eroded, pen.dilated,
                               cfg.eps_den)
    return params, matte, pen


def remove_shadow(shadow, mask, params: ShadowParams, matte, residual=None) -> np.ndarray:
    """Relight, blend through the matte, and optionally add a refinement residual."""
    shadow = as_image(shadow, "shadow")
    mask = as_mask(mask)
    check_same_hw(shadow, mask, np.asarray(matte), names=("shadow", "mask", "matte"))
    out = compose(shadow, relight(shadow, params), matte)
    if residual is not None:
        out = apply_residual(out, residual)
    return out


def augment_batch(shadow_free, shadow, mask, ks=AUGMENT_KS, cfg: DecomposeConfig | None = None,
                  workers=1):
    """Re-cast the pair's shadow with gains scaled by each ``k``.

    The decomposition matte (1 = umbra) is mapped to the lit-is-one
    convention expected by :func:`synth_shadow` via :func:`lit_matte`, so
    ``k = 1`` re-creates the input shadow.  Returns a list of
    ``(shadow_image, scaled_params)``, one per ``k``.
    """
    ks = list(ks)
    if not ks:
        raise ValueError("need at least one scale factor k")
    if any(k <= 0 for k in ks):
        raise ValueError(f"scale factors must be positive, got {ks}")
    params, matte, _ = decompose_pair(shadow, shadow_free, mask, cfg)
    lit = lit_matte(matte, params)

    def one(k):
        return synth_shadow(shadow_free, lit, params, k)

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(one, ks))
    return [one(k) for k in ks]


__all__ = ["AUGMENT_KS", "DecomposeConfig", "PenumbraMasks", "augment_batch",
           "decompose_pair", "remove_shadow"]
