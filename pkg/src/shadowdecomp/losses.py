"""Scalar loss functionals for training the decomposition estimators.

Every reduction is a mean rather than a raw sum so that values are comparable
across image sizes.  Multiply by the element count to get the summed form.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass

import numpy as np

from .illum import ShadowParams
from .imagecore import as_gray, as_image, as_mask, check_same_hw
from .morphmask import PenumbraMasks

GAN_CLAMP = 1e-7

FULLY_TERMS = ("regression", "smoothness", "penumbra", "rec_mat", "rec_final")
WEAKLY_TERMS = ("smoothness", "matting", "boundary", "gan")


@dataclass
class LossWeights:
    """Per-term loss weights with the usual training defaults."""

    reg: float = 1.0
    sm: float = 1.0
    pen: float = 10.0
    rec_mat: float = 1.0
    rec_final: float = 1.0
    bd: float = 0.5
    mat: float = 100.0
    sm_w: float = 10.0
    adv: float = 0.5

    def __post_init__(self):
        for name, value in asdict(self).items():
            if value < 0:
                raise ValueError(f"weight {name} must be nonnegative, got {value}")

    def fully(self) -> dict:
        return dict(zip(FULLY_TERMS, (self.reg, self.sm, self.pen, self.rec_mat, self.rec_final)))

    def weakly(self) -> dict:
        return dict(zip(WEAKLY_TERMS, (self.sm_w, self.mat, self.bd, self.adv)))


@dataclass
class LossReport:
    terms: dict
    weights: dict
    total: float

    def to_dict(self):
        return {"terms": dict(self.terms), "total": self.total, "weights": dict(self.weights)}

    def to_json(self):
        return json.dumps(self.to_dict())


def l1_reconstruction(out, gt, region=None) -> float:
    """Mean absolute difference, optionally restricted to a pixel region."""
    out = np.asarray(out, dtype=np.float64)
    gt = np.asarray(gt, dtype=np.float64)
    if out.shape != gt.shape:
        raise ValueError(f"shape mismatch: {out.shape} vs {gt.shape}")
    diff = np.abs(out - gt)
    if region is None:
        return float(diff.mean())
    region = as_mask(region, "region")
    check_same_hw(diff, region, names=("images", "region"))
    if not region.any():
        raise ValueError("reconstruction region is empty")
    return float(diff[region].mean())


def penumbra_loss(out, gt, pen: PenumbraMasks) -> float:
    return l1_reconstruction(out, gt, pen.band)


def smoothness_loss(matte) -> float:
    """Mean absolute forward difference of the matte, both directions pooled."""
    alpha = as_gray(matte, "matte")
    dx = np.abs(np.diff(alpha, axis=1)).ravel()
    dy = np.abs(np.diff(alpha, axis=0)).ravel()
    count = dx.size + dy.size
    if count == 0:
        return 0.0
    return float((dx.sum() + dy.sum()) / count)


def _region_mean(values, region):
    return float(values[region].mean()) if region.any() else 0.0


def matting_loss(matte, pen: PenumbraMasks) -> float:
    """Penalty for leaving the umbra below 1 or the exterior above 0."""
    alpha = as_gray(matte, "matte")
    check_same_hw(alpha, pen.inner, names=("matte", "penumbra masks"))
    return (_region_mean(np.abs(alpha - 1.0), pen.umbra)
            + _region_mean(np.abs(alpha), ~pen.dilated))


def boundary_loss(out, pen: PenumbraMasks) -> float:
    """Absolute gap between the mean intensity just inside and just outside the boundary."""
    out = as_image(out, "output")
    check_same_hw(out, pen.inner, names=("output", "penumbra masks"))
    if not pen.inner.any() or not pen.outer.any():
        raise ValueError("boundary loss needs nonempty inner and outer bands")
    return abs(float(out[pen.inner].mean()) - float(out[pen.outer].mean()))


def gan_loss(d_score) -> float:
    """``log(1 - D)`` for a discriminator score supplied by the caller."""
    d = float(d_score)
    if not 0.0 <= d <= 1.0:
        raise ValueError(f"discriminator score must lie in [0, 1], got {d}")
    return math.log(max(1.0 - d, GAN_CLAMP))


def regression_loss(pred: ShadowParams, target: ShadowParams) -> float:
    return float(np.abs(pred.vector() - target.vector()).mean())


def _weighted(terms, weights, names):
    missing = [n for n in names if n not in terms]
    if missing:
        raise ValueError(f"missing loss term(s): {', '.join(missing)}")
    picked = {n: float(terms[n]) for n in names}
    total = math.fsum(weights[n] * picked[n] for n in names)
    return LossReport(picked, dict(weights), total)


def total_fully(terms, weights: LossWeights | None = None) -> LossReport:
    """Weighted objective of the paired (fully supervised) setting."""
    weights = weights or LossWeights()
    return _weighted(terms, weights.fully(), FULLY_TERMS)


def total_weakly(terms, weights: LossWeights | None = None) -> LossReport:
    """Weighted objective of the patch-based (weakly supervised) setting."""
    weights = weights or LossWeights()
    return _weighted(terms, weights.weakly(), WEAKLY_TERMS)
