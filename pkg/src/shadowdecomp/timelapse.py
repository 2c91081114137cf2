"""Pseudo ground truth from static-scene timelapses.

The per-pixel temporal maximum of a clip approximates the shadow-free
scene; pixels whose max-min gap is large were crossed by a moving shadow.
"""
from __future__ import annotations

import glob
import os

import numpy as np

from .imagecore import as_image, check_same_hw, load_image

EPSILON_8BIT = 80
EPSILON = EPSILON_8BIT / 255.0


def temporal_extrema(frames):
    """Per-pixel, per-channel max and min over a frame sequence.

    ``frames`` may be any iterable (e.g. a generator reading from disk);
    only the two running extrema are held in memory.
    """
    v_max = v_min = None
    for frame in frames:
        frame = as_image(frame, "frame")
        if v_max is None:
            v_max, v_min = frame.copy(), frame.copy()
            continue
        check_same_hw(v_max, frame, names=("first frame", "frame"))
        np.maximum(v_max, frame, out=v_max)
        np.minimum(v_min, frame, out=v_min)
    if v_max is None:
        raise ValueError("empty frame sequence")
    return v_max, v_min


def moving_shadow_mask(v_max, v_min, epsilon=EPSILON) -> np.ndarray:
    """Pixels whose channel-mean temporal gap strictly exceeds ``epsilon``."""
    if epsilon <= 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    v_max = as_image(v_max, "v_max")
    v_min = as_image(v_min, "v_min")
    check_same_hw(v_max, v_min, names=("v_max", "v_min"))
    return (v_max - v_min).mean(axis=2) > epsilon


def build_pseudo_gt(frames, epsilon=EPSILON):
    """Return ``(v_max, moving_mask)``: the pseudo shadow-free frame and where it applies."""
    v_max, v_min = temporal_extrema(frames)
    return v_max, moving_shadow_mask(v_max, v_min, epsilon)


def frame_paths(directory) -> list[str]:
    paths = sorted(glob.glob(os.path.join(os.fspath(directory), "*.png")))
    if not paths:
        raise FileNotFoundError(f"no PNG frames in {directory}")
    return paths


def iter_frames(directory):
    """Yield the PNG frames of a directory in lexicographic order."""
    for p in frame_paths(directory):
        yield load_image(p, "color")
