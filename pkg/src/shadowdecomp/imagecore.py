"""Raster plumbing: PNG I/O, bilinear/nearest resampling and sRGB -> CIELAB.

Images are float64 numpy arrays in [0, 1]; colour images are H x W x 3,
gray rasters (masks, mattes) are H x W.
"""
from __future__ import annotations

import os

import cv2
import numpy as np

PNG_SIGNATURE = b"\x89PNG\r\n\x1a\n"

# sRGB primaries -> XYZ, D65.
_RGB_TO_XYZ = np.array([
    [0.4124564, 0.3575761, 0.1804375],
    [0.2126729, 0.7151522, 0.0721750],
    [0.0193339, 0.1191920, 0.9503041],
])
# Reference white taken from the matrix itself so that grays map to a = b = 0.
_WHITE = _RGB_TO_XYZ.sum(axis=1)

_LAB_EPS = (6.0 / 29.0) ** 3
_LAB_KAPPA = (29.0 / 6.0) ** 2 / 3.0


class ImageIOError(OSError):
    """Raised when a raster cannot be read or written."""


def as_image(img, name="image") -> np.ndarray:
    """Validate and return an H x W x 3 float array."""
    arr = np.asarray(img, dtype=np.float64)
    if arr.ndim != 3 or arr.shape[2] != 3:
        raise ValueError(f"{name} must be H x W x 3, got shape {arr.shape}")
    if arr.shape[0] == 0 or arr.shape[1] == 0:
        raise ValueError(f"{name} is empty")
    return arr


def as_gray(img, name="raster") -> np.ndarray:
    arr = np.asarray(img, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be H x W, got shape {arr.shape}")
    if arr.size == 0:
        raise ValueError(f"{name} is empty")
    return arr


def as_mask(mask, name="mask") -> np.ndarray:
    """Return a boolean H x W mask; float rasters are thresholded at 0.5."""
    arr = np.asarray(mask)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be H x W, got shape {arr.shape}")
    if arr.dtype == bool:
        return arr
    return arr > 0.5


def check_same_hw(*arrays, names=None):
    shapes = [a.shape[:2] for a in arrays]
    if any(s != shapes[0] for s in shapes):
        label = ", ".join(names) if names else "inputs"
        raise ValueError(f"dimension mismatch between {label}: {shapes}")


def load_image(path, kind="color") -> np.ndarray:
    """Read a PNG as a float raster in [0, 1].

    8-bit samples are scaled by 1/255, 16-bit by 1/65535.  ``kind='color'``
    expects RGB or RGBA (alpha is dropped) and returns H x W x 3;
    ``kind='gray'`` expects a single-channel PNG and returns H x W.
    """
    if kind not in ("color", "gray"):
        raise ValueError(f"kind must be 'color' or 'gray', got {kind!r}")
    path = os.fspath(path)
    if not os.path.isfile(path):
        raise ImageIOError(f"no such file: {path}")
    with open(path, "rb") as fh:
        if fh.read(8) != PNG_SIGNATURE:
            raise ImageIOError(f"not a PNG file: {path}")
    raw = cv2.imread(path, cv2.IMREAD_UNCHANGED)
    if raw is None:
        raise ImageIOError(f"could not decode PNG: {path}")
    if raw.size == 0:
        raise ImageIOError(f"zero-sized image: {path}")
    if raw.dtype == np.uint8:
        scale = 255.0
    elif raw.dtype == np.uint16:
        scale = 65535.0
    else:
        raise ImageIOError(f"unsupported bit depth ({raw.dtype}): {path}")

    if raw.ndim == 2:
        if kind != "gray":
            raise ImageIOError(f"expected a colour PNG, got grayscale: {path}")
        return raw.astype(np.float64) / scale
    if kind != "color":
        raise ImageIOError(f"expected a grayscale PNG, got {raw.shape[2]} channels: {path}")
    if raw.shape[2] not in (3, 4):
        raise ImageIOError(f"unsupported colour type ({raw.shape[2]} channels): {path}")
    rgb = raw[:, :, 2::-1]  # BGR(A) -> RGB, drops alpha
    return rgb.astype(np.float64) / scale


def load_mask(path) -> np.ndarray:
    """Load a grayscale PNG as a boolean mask (value > 0.5 is shadow)."""
    return load_image(path, kind="gray") > 0.5


def quantize(img, depth=8) -> np.ndarray:
    """Round-half-up quantization of [0, 1] values to unsigned integers."""
    if depth not in (8, 16):
        raise ValueError(f"depth must be 8 or 16, got {depth}")
    top = 2 ** depth - 1
    q = np.floor(np.clip(img, 0.0, 1.0) * top + 0.5)
    return q.astype(np.uint8 if depth == 8 else np.uint16)


def save_image(img, path, depth=8) -> None:
    """Write a colour or gray raster as PNG at 8 or 16 bits per sample."""
    arr = np.asarray(img)
    if arr.dtype == bool:
        arr = arr.astype(np.float64)
    if arr.ndim == 3 and arr.shape[2] == 3:
        data = quantize(arr, depth)[:, :, ::-1]
    elif arr.ndim == 2:
        data = quantize(arr, depth)
    else:
        raise ValueError(f"cannot save raster of shape {arr.shape}")
    path = os.fspath(path)
    try:
        ok = cv2.imwrite(path, np.ascontiguousarray(data))
    except cv2.error as exc:
        raise ImageIOError(f"cannot write {path}: {exc}") from exc
    if not ok:
        raise ImageIOError(f"cannot write {path}")


def save_mask(mask, path) -> None:
    """Masks are stored as 8-bit 0/255."""
    save_image(as_mask(mask).astype(np.float64), path, depth=8)


def _bilinear_axis(n_in, n_out):
    scale = n_in / n_out
    src = (np.arange(n_out) + 0.5) * scale - 0.5
    src = np.clip(src, 0.0, n_in - 1)
    i0 = np.floor(src).astype(np.intp)
    i1 = np.minimum(i0 + 1, n_in - 1)
    return i0, i1, src - i0


def resize_bilinear(img, out_w, out_h) -> np.ndarray:
    """Bilinear resampling with half-pixel centres and border clamping.

    Works on H x W and H x W x C arrays.  Same-size requests return a copy.
    """
    arr = np.asarray(img, dtype=np.float64)
    if out_w < 1 or out_h < 1:
        raise ValueError(f"output size must be positive, got {out_w}x{out_h}")
    h, w = arr.shape[:2]
    if (h, w) == (out_h, out_w):
        return arr.copy()

    y0, y1, fy = _bilinear_axis(h, out_h)
    x0, x1, fx = _bilinear_axis(w, out_w)
    extra = (1,) * (arr.ndim - 2)
    fy = fy.reshape((-1, 1) + extra)
    fx = fx.reshape((1, -1) + extra)

    top = arr[y0][:, x0] + fx * (arr[y0][:, x1] - arr[y0][:, x0])
    bot = arr[y1][:, x0] + fx * (arr[y1][:, x1] - arr[y1][:, x0])
    out = top + fy * (bot - top)
    # guard against one-ulp overshoot
    return np.clip(out, arr.min(), arr.max())


def resize_nearest(img, out_w, out_h) -> np.ndarray:
    """Nearest-neighbour resampling (same pixel-centre convention)."""
    arr = np.asarray(img)
    if out_w < 1 or out_h < 1:
        raise ValueError(f"output size must be positive, got {out_w}x{out_h}")
    h, w = arr.shape[:2]
    ys = np.minimum(((np.arange(out_h) + 0.5) * (h / out_h)).astype(np.intp), h - 1)
    xs = np.minimum(((np.arange(out_w) + 0.5) * (w / out_w)).astype(np.intp), w - 1)
    return arr[ys][:, xs].copy()


def srgb_to_linear(img):
    img = np.asarray(img, dtype=np.float64)
    return np.where(img <= 0.04045, img / 12.92, ((img + 0.055) / 1.055) ** 2.4)


def rgb_to_lab(img) -> np.ndarray:
    """Convert sRGB in [0, 1] to CIELAB (D65).  Output L is in [0, 100]."""
    rgb = np.asarray(img, dtype=np.float64)
    if rgb.shape[-1] != 3:
        raise ValueError(f"last axis must have 3 channels, got shape {rgb.shape}")
    xyz = srgb_to_linear(rgb) @ _RGB_TO_XYZ.T
    t = xyz / _WHITE
    f = np.where(t > _LAB_EPS, np.cbrt(t), t * _LAB_KAPPA + 4.0 / 29.0)
    lab = np.empty_like(f)
    lab[..., 0] = 116.0 * f[..., 1] - 16.0
    lab[..., 1] = 500.0 * (f[..., 0] - f[..., 1])
    lab[..., 2] = 200.0 * (f[..., 1] - f[..., 2])
    return lab
