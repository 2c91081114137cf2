"""Lab-space MAE evaluation and colour correction of ground-truth images."""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .imagecore import as_image, as_mask, check_same_hw, resize_bilinear, resize_nearest, rgb_to_lab

EVAL_SIZE = (256, 256)


@dataclass
class EvalReport:
    mae_shadow: Optional[float]
    mae_nonshadow: Optional[float]
    mae_all: float
    n_shadow: int
    n_nonshadow: int
    eval_size: tuple = EVAL_SIZE

    def to_dict(self):
        return {
            "mae": {"shadow": self.mae_shadow, "non_shadow": self.mae_nonshadow, "all": self.mae_all},
            "pixels": {"shadow": self.n_shadow, "non_shadow": self.n_nonshadow},
            "eval_size": list(self.eval_size),
        }

    def to_json(self):
        return json.dumps(self.to_dict())


def mae_report(result, gt, mask, eval_size=EVAL_SIZE) -> EvalReport:
    """MAE in CIELAB on the shadow region, its complement and the whole frame.

    Both images are bilinearly resized to ``eval_size`` (width, height) and
    the mask is resized by nearest neighbour.  The per-pixel error is the
    mean over L, a, b of the absolute difference.  A region with no pixels
    reports ``None``.
    """
    result = as_image(result, "result")
    gt = as_image(gt, "gt")
    mask = as_mask(mask)
    check_same_hw(result, gt, mask, names=("result", "gt", "mask"))
    ew, eh = eval_size
    r = resize_bilinear(result, ew, eh)
    g = resize_bilinear(gt, ew, eh)
    m = resize_nearest(mask, ew, eh)

    err = np.abs(rgb_to_lab(r) - rgb_to_lab(g)).mean(axis=2)
    n_s = int(m.sum())
    n_n = int(m.size - n_s)
    return EvalReport(
        mae_shadow=float(err[m].mean()) if n_s else None,
        mae_nonshadow=float(err[~m].mean()) if n_n else None,
        mae_all=float(err.mean()),
        n_shadow=n_s,
        n_nonshadow=n_n,
        eval_size=(ew, eh),
    )


def mean_reports(reports) -> dict:
    """Average each MAE over a batch, skipping images where a region was empty."""
    reports = list(reports)
    out = {}
    for key, attr in (("shadow", "mae_shadow"), ("non_shadow", "mae_nonshadow"), ("all", "mae_all")):
        vals = [getattr(r, attr) for r in reports if getattr(r, attr) is not None]
        out[key] = float(np.mean(vals)) if vals else None
    return {"mae": out, "n_images": len(reports)}


def color_correction_coeffs(shadow, gt, mask):
    """Per-channel ``(a, c)`` with ``a * gt + c`` fitted to ``shadow`` on the lit region.

    Returns ``(a, c, degenerate)``; a channel with constant ``gt`` gets the
    identity map and is flagged.
    """
    shadow = as_image(shadow, "shadow")
    gt = as_image(gt, "gt")
    mask = as_mask(mask)
    check_same_hw(shadow, gt, mask, names=("shadow", "gt", "mask"))
    lit = ~mask
    if lit.sum() < 2:
        raise ValueError("colour correction needs at least 2 non-shadow pixels")
    a = np.ones(3)
    c = np.zeros(3)
    degenerate = [False] * 3
    for k in range(3):
        x = gt[..., k][lit]
        y = shadow[..., k][lit]
        dx = x - x.mean()
        sxx = float(dx @ dx)
        if sxx <= 1e-14 * max(1.0, float(x @ x)):
            degenerate[k] = True
            continue
        a[k] = float(dx @ (y - y.mean())) / sxx
        c[k] = y.mean() - a[k] * x.mean()
    return a, c, degenerate


def color_correct_gt(shadow, gt, mask) -> np.ndarray:
    """Match the tone of a shadow-free ground truth to its shadow image.

    The affine map is fitted on non-shadow pixels only and applied to the
    whole ground-truth image.
    """
    a, c, _ = color_correction_coeffs(shadow, gt, mask)
    return np.clip(as_image(gt) * a + c, 0.0, 1.0)
