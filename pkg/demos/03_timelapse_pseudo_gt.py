"""
Pseudo ground truth from a timelapse
====================================

With a static camera a moving shadow uncovers every pixel at some point, so
the per-pixel temporal maximum approximates the shadow-free frame.  Pixels
whose max-min gap is large are the ones the shadow actually crossed.
"""
import numpy as np

from shadowdecomp.illum import ShadowParams, darken
from shadowdecomp.timelapse import build_pseudo_gt

rng = np.random.default_rng(2)
h, w, n = 60, 90, 24
scene = rng.uniform(0.6, 1.0, (h, w, 3))
dark = darken(scene, ShadowParams([2.2, 2.0, 1.8], [0.0, 0.0, 0.0]))


def frames():
    # a disc crossing the frame diagonally; generated lazily like a video reader
    yy, xx = np.mgrid[0:h, 0:w]
    for t in range(n):
        cy, cx = 10 + t * (h - 20) / n, 5 + t * (w - 10) / n
        m = (yy - cy) ** 2 + (xx - cx) ** 2 < 64
        yield np.where(m[..., None], dark, scene)


v_max, moving = build_pseudo_gt(frames())
print(f"moving-shadow pixels: {moving.sum()} of {moving.size}")
print("v_max equals the clean scene on them:", np.array_equal(v_max[moving], scene[moving]))
print("pixels never shadowed stay as they were:",
      np.array_equal(v_max[~moving], scene[~moving]))
