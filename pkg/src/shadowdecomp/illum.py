"""Linear illumination model and the shadow image decomposition.

A shadowed pixel is relit by a per-channel affine map ``w * x + b``; the
shadow-free image is a per-pixel blend of the shadow image and the relit
image controlled by a matte ``alpha`` (0 = lit, 1 = umbra).
"""
from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field

import numpy as np

from .imagecore import as_gray, as_image, as_mask, check_same_hw

W_BOX = (1.0, 3.0)
B_BOX = (0.0, 1.0)


@dataclass(frozen=True)
class Box:
    w_lo: float = W_BOX[0]
    w_hi: float = W_BOX[1]
    b_lo: float = B_BOX[0]
    b_hi: float = B_BOX[1]

    def __post_init__(self):
        if self.w_lo > self.w_hi or self.b_lo > self.b_hi:
            raise ValueError(f"empty box: {self}")

    def to_dict(self):
        return {"w": [self.w_lo, self.w_hi], "b": [self.b_lo, self.b_hi]}

    @classmethod
    def from_dict(cls, d):
        return cls(float(d["w"][0]), float(d["w"][1]), float(d["b"][0]), float(d["b"][1]))


@dataclass
class ShadowParams:
    """Per-channel gains ``w`` and offsets ``b`` with their feasible box."""

    w: np.ndarray
    b: np.ndarray
    box: Box = field(default_factory=Box)

    def __post_init__(self):
        self.w = np.asarray(self.w, dtype=np.float64).reshape(3)
        self.b = np.asarray(self.b, dtype=np.float64).reshape(3)

    @classmethod
    def identity(cls, box=None):
        return cls(np.ones(3), np.zeros(3), box or Box())

    def in_box(self, tol=0.0) -> bool:
        bx = self.box
        return bool(np.all(self.w >= bx.w_lo - tol) and np.all(self.w <= bx.w_hi + tol)
                    and np.all(self.b >= bx.b_lo - tol) and np.all(self.b <= bx.b_hi + tol))

    def clamped(self) -> "ShadowParams":
        bx = self.box
        return ShadowParams(np.clip(self.w, bx.w_lo, bx.w_hi), np.clip(self.b, bx.b_lo, bx.b_hi), bx)

    def vector(self) -> np.ndarray:
        """The 6-element (w_R, w_G, w_B, b_R, b_G, b_B) vector."""
        return np.concatenate([self.w, self.b])

    def to_dict(self):
        return {"w": self.w.tolist(), "b": self.b.tolist(), "box": self.box.to_dict()}

    @classmethod
    def from_dict(cls, d):
        box = Box.from_dict(d["box"]) if "box" in d else Box()
        return cls(d["w"], d["b"], box)

    def to_json(self) -> str:
        # repr-based float formatting round-trips exactly
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


def relight(shadow, params: ShadowParams) -> np.ndarray:
    """``w * shadow + b`` per channel.  Deliberately not clamped."""
    shadow = as_image(shadow, "shadow")
    return shadow * params.w + params.b


def compose(shadow, relit, matte) -> np.ndarray:
    """Blend ``shadow * (1 - alpha) + relit * alpha`` and clamp to [0, 1]."""
    shadow = as_image(shadow, "shadow")
    relit = as_image(relit, "relit")
    alpha = as_gray(matte, "matte")
    check_same_hw(shadow, relit, alpha, names=("shadow", "relit", "matte"))
    a = alpha[..., None]
    return np.clip(shadow * (1.0 - a) + relit * a, 0.0, 1.0)


def alpha_from_triplet(shadow, shadow_free, relit, mask, inner, dilated, eps_den=1e-4) -> np.ndarray:
    """Recover the matte from a shadow / shadow-free / relit triplet.

    Per channel ``(sf - shadow) / (relit - shadow)``, averaged over the
    channels whose denominator magnitude is at least ``eps_den``, then
    clamped to [0, 1].  Pixels where every channel is degenerate take 1
    inside ``inner`` (the eroded shadow interior) and 0 elsewhere.  Pixels
    outside ``dilated`` are always 0.
    """
    if eps_den <= 0:
        raise ValueError(f"eps_den must be positive, got {eps_den}")
    shadow = as_image(shadow, "shadow")
    shadow_free = as_image(shadow_free, "shadow_free")
    relit = as_image(relit, "relit")
    mask = as_mask(mask)
    inner = as_mask(inner, "inner")
    dilated = as_mask(dilated, "dilated")
    check_same_hw(shadow, shadow_free, relit, mask, inner, dilated,
                  names=("shadow", "shadow_free", "relit", "mask", "inner", "dilated"))

    den = relit - shadow
    ok = np.abs(den) >= eps_den
    ratio = np.divide(shadow_free - shadow, den, out=np.zeros_like(den), where=ok)
    n_ok = ok.sum(axis=2)
    alpha = np.divide(ratio.sum(axis=2), n_ok, out=np.zeros(n_ok.shape), where=n_ok > 0)
    alpha = np.clip(alpha, 0.0, 1.0)

    umbra = mask & inner
    degenerate = n_ok == 0
    alpha[degenerate] = np.where(umbra[degenerate], 1.0, 0.0)
    alpha[~dilated] = 0.0
    return alpha


def darken(shadow_free, params: ShadowParams) -> np.ndarray:
    """Inverse of the relighting map, ``(sf - b) / w``, clamped to [0, 1]."""
    shadow_free = as_image(shadow_free, "shadow_free")
    if np.any(params.w == 0):
        raise ValueError("darken needs nonzero gains")
    return np.clip((shadow_free - params.b) / params.w, 0.0, 1.0)


def synth_shadow(shadow_free, matte, params: ShadowParams, k=1.0):
    """Cast a synthetic shadow with gains scaled by ``k``.

    Here ``matte`` follows the lit-is-one convention: the output is
    ``sf * matte + darken(sf) * (1 - matte)``, so ``matte = 0`` is full
    umbra.  Returns ``(shadow_image, scaled_params)``.
    """
    if k <= 0:
        raise ValueError(f"k must be positive, got {k}")
    shadow_free = as_image(shadow_free, "shadow_free")
    m = as_gray(matte, "matte")
    check_same_hw(shadow_free, m, names=("shadow_free", "matte"))
    syn = ShadowParams(params.w * k, params.b.copy(), params.box)
    if np.any(syn.w < 1.0):
        warnings.warn(f"scaled gains {syn.w} fall below 1; the result brightens the shadow",
                      RuntimeWarning, stacklevel=2)
    dark = darken(shadow_free, syn)
    m3 = m[..., None]
    return shadow_free * m3 + dark * (1.0 - m3), syn


def lit_matte(alpha, params: ShadowParams) -> np.ndarray:
    """Convert a decomposition matte (1 = umbra) into a lit-is-one matte.

    The two blends are not complements of each other.  Solving
    ``compose(shadow, relight(shadow), alpha) == sf`` for the synthesis
    weight gives ``(1 - alpha) / (1 + alpha (w - 1))``; the gain is
    averaged over channels since the returned matte is single-channel.
    """
    a = as_gray(alpha, "alpha")
    w = float(np.mean(params.w))
    return (1.0 - a) / (1.0 + a * (w - 1.0))


def apply_residual(base, residual) -> np.ndarray:
    base = as_image(base, "base")
    residual = np.asarray(residual, dtype=np.float64)
    if residual.shape != base.shape:
        raise ValueError(f"residual shape {residual.shape} does not match image {base.shape}")
    return np.clip(base + residual, 0.0, 1.0)
