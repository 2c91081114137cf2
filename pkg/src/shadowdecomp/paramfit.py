"""Ground-truth shadow parameters from a shadow / shadow-free pair.

The umbra is isolated by eroding the shadow mask, then each colour channel
is fitted with ``y ~ w * x + b`` under box bounds on ``(w, b)``.  With two
unknowns the bounded problem is a convex quadratic over a rectangle, so it
is solved exactly by checking every KKT configuration instead of iterating.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .illum import Box, ShadowParams
from .imagecore import as_image, as_mask, check_same_hw
from .morphmask import erode


class FitError(ValueError):
    """Not enough usable samples to fit shadow parameters."""


@dataclass
class PairSample:
    channel: int
    xs: np.ndarray
    ys: np.ndarray

    def __post_init__(self):
        self.xs = np.asarray(self.xs, dtype=np.float64).ravel()
        self.ys = np.asarray(self.ys, dtype=np.float64).ravel()
        if self.xs.shape != self.ys.shape:
            raise ValueError("xs and ys must have the same length")
        if self.xs.size < 2:
            raise FitError(f"need at least 2 samples, got {self.xs.size}")


class BoxLSResult(NamedTuple):
    w: float
    b: float
    residual: float
    degenerate: bool = False


def sample_pairs(shadow, shadow_free, mask, erode_px=5) -> list[PairSample]:
    """Collect (shadow, shadow-free) value pairs from the eroded mask, per channel."""
    shadow = as_image(shadow, "shadow")
    shadow_free = as_image(shadow_free, "shadow_free")
    mask = as_mask(mask)
    check_same_hw(shadow, shadow_free, mask, names=("shadow", "shadow_free", "mask"))
    core = erode(mask, erode_px)
    n = int(core.sum())
    if n < 2:
        raise FitError(f"eroded shadow mask has {n} pixel(s); need at least 2 "
                       f"(erode_px={erode_px})")
    return [PairSample(c, shadow[..., c][core], shadow_free[..., c][core]) for c in range(3)]


def _sse(w, b, xs, ys):
    r = w * xs + b - ys
    return float(r @ r)


def solve_box_ls(sample: PairSample, box: Box = Box()) -> BoxLSResult:
    """Exact minimiser of ``sum((w*x + b - y)**2)`` over the box.

    Candidates are the unconstrained optimum, the optimum along each of the
    four edges (with the free variable clipped, which also yields corners),
    and the four corners.  The feasible candidate with the lowest residual
    wins; ties go to the lower ``w`` and then the lower ``b``.
    """
    xs, ys = sample.xs, sample.ys
    mx, my = xs.mean(), ys.mean()
    dx = xs - mx
    sxx = float(dx @ dx)

    if sxx <= 1e-14 * max(1.0, float(xs @ xs)):
        w = box.w_lo
        b = float(np.clip(my - w * xs[0], box.b_lo, box.b_hi))
        return BoxLSResult(w, b, _sse(w, b, xs, ys), True)

    cands = []
    w_ols = float(dx @ (ys - my)) / sxx
    b_ols = my - w_ols * mx
    if box.w_lo <= w_ols <= box.w_hi and box.b_lo <= b_ols <= box.b_hi:
        cands.append((w_ols, b_ols))

    sx2 = float(xs @ xs)
    for w in (box.w_lo, box.w_hi):
        cands.append((w, float(np.clip(my - w * mx, box.b_lo, box.b_hi))))
    for b in (box.b_lo, box.b_hi):
        w = float(xs @ (ys - b)) / sx2 if sx2 > 0 else box.w_lo
        cands.append((float(np.clip(w, box.w_lo, box.w_hi)), b))
    for w in (box.w_lo, box.w_hi):
        for b in (box.b_lo, box.b_hi):
            cands.append((w, b))

    best = min((_sse(w, b, xs, ys), w, b) for w, b in cands)
    return BoxLSResult(best[1], best[2], best[0], False)


@dataclass
class ParamFit:
    """Fitted parameters together with per-channel diagnostics."""

    params: ShadowParams
    residual: np.ndarray
    degenerate: list = field(default_factory=lambda: [False] * 3)
    n_samples: int = 0

    def to_dict(self):
        d = self.params.to_dict()
        d.update(residual=self.residual.tolist(), degenerate=list(self.degenerate),
                 n_samples=self.n_samples)
        return d


def fit_shadow_params_report(shadow, shadow_free, mask, erode_px=5, box: Box = Box()) -> ParamFit:
    samples = sample_pairs(shadow, shadow_free, mask, erode_px)
    sols = [solve_box_ls(s, box) for s in samples]
    params = ShadowParams([s.w for s in sols], [s.b for s in sols], box)
    return ParamFit(params, np.array([s.residual for s in sols]),
                    [bool(s.degenerate) for s in sols], int(samples[0].xs.size))


def fit_shadow_params(shadow, shadow_free, mask, erode_px=5, box: Box = Box()) -> ShadowParams:
    """Per-channel bounded regression of shadow-free on shadow values in the umbra."""
    return fit_shadow_params_report(shadow, shadow_free, mask, erode_px, box).params
