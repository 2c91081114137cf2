"""Overlapping patch grids and the patch <-> image bookkeeping of weak supervision.

Patches are labelled non-shadow (``N``), boundary (``B``) or full-shadow
(``F``) from the shadow mask.  Boundary patches carry the per-patch
estimates that are pooled back into whole-image parameters and mattes.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field

import numpy as np

from .illum import ShadowParams
from .imagecore import as_mask, check_same_hw, save_image
from .matting import enforce_matte_constraints
from .morphmask import PenumbraMasks

NONSHADOW, BOUNDARY, FULLSHADOW = "N", "B", "F"


@dataclass
class PatchGrid:
    patch_size: int = 128
    step: int = 32
    origins: list = field(default_factory=list)  # (x, y) top-left, row-major

    def __len__(self):
        return len(self.origins)


@dataclass
class PatchSet:
    labels: list = field(default_factory=list)

    def indices(self, label) -> list[int]:
        return [i for i, lab in enumerate(self.labels) if lab == label]

    def counts(self) -> dict:
        return {lab: self.labels.count(lab) for lab in (NONSHADOW, BOUNDARY, FULLSHADOW)}


def patch_grid(width, height, patch_size=128, step=32) -> PatchGrid:
    if step < 1:
        raise ValueError(f"step must be >= 1, got {step}")
    if patch_size < 1 or patch_size > min(width, height):
        raise ValueError(f"patch size {patch_size} does not fit a {width}x{height} image")
    ys = range(0, height - patch_size + 1, step)
    xs = range(0, width - patch_size + 1, step)
    return PatchGrid(patch_size, step, [(x, y) for y in ys for x in xs])


def _classify(mask, grid: PatchGrid) -> PatchSet:
    # integral image gives the shadow count of each window in O(1)
    s = grid.patch_size
    ii = np.zeros((mask.shape[0] + 1, mask.shape[1] + 1), dtype=np.int64)
    ii[1:, 1:] = mask.cumsum(0).cumsum(1)
    full = s * s
    labels = []
    for x, y in grid.origins:
        n = ii[y + s, x + s] - ii[y, x + s] - ii[y + s, x] + ii[y, x]
        labels.append(NONSHADOW if n == 0 else FULLSHADOW if n == full else BOUNDARY)
    return PatchSet(labels)


def extract_and_classify(image, mask, patch_size=128, step=32):
    """Tile the frame with overlapping patches and label each from the mask.

    Returns ``(grid, patch_set)``.  Origins follow ``0, step, 2*step, ...``
    along each axis; any right/bottom slack narrower than a step is not
    covered.
    """
    mask = as_mask(mask)
    image = np.asarray(image)
    check_same_hw(image, mask, names=("image", "mask"))
    h, w = mask.shape
    grid = patch_grid(w, h, patch_size, step)
    return grid, _classify(mask, grid)


def crop(image, grid: PatchGrid, index) -> np.ndarray:
    x, y = grid.origins[index]
    s = grid.patch_size
    return np.asarray(image)[y:y + s, x:x + s]


def aggregate_params(patch_params) -> ShadowParams:
    """Uniform average of per-patch shadow parameters, clamped to the box."""
    patch_params = list(patch_params)
    if not patch_params:
        raise ValueError("no boundary patches to aggregate")
    w = np.mean(np.stack([p.w for p in patch_params]), axis=0)
    b = np.mean(np.stack([p.b for p in patch_params]), axis=0)
    return ShadowParams(w, b, patch_params[0].box).clamped()


def assemble_matte(grid: PatchGrid, pset: PatchSet, patch_mattes, pen: PenumbraMasks,
                   out_w, out_h) -> np.ndarray:
    """Average overlapping boundary-patch mattes into a full-frame matte.

    ``patch_mattes`` holds one matte per boundary patch, in grid order.
    Uncovered pixels start at 0; the umbra / exterior constraints are then
    applied.
    """
    b_idx = pset.indices(BOUNDARY)
    patch_mattes = list(patch_mattes)
    if len(patch_mattes) != len(b_idx):
        raise ValueError(f"expected {len(b_idx)} boundary-patch mattes, got {len(patch_mattes)}")
    if pen.shape != (out_h, out_w):
        raise ValueError(f"penumbra masks are {pen.shape}, output is {(out_h, out_w)}")
    s = grid.patch_size
    acc = np.zeros((out_h, out_w))
    cnt = np.zeros((out_h, out_w))
    for i, m in zip(b_idx, patch_mattes):
        m = np.asarray(m, dtype=np.float64)
        if m.shape != (s, s):
            raise ValueError(f"patch matte {i} has shape {m.shape}, expected {(s, s)}")
        x, y = grid.origins[i]
        acc[y:y + s, x:x + s] += m
        cnt[y:y + s, x:x + s] += 1
    alpha = np.divide(acc, cnt, out=np.zeros_like(acc), where=cnt > 0)
    return enforce_matte_constraints(alpha, pen)


def manifest(grid: PatchGrid, pset: PatchSet) -> dict:
    return {
        "size": grid.patch_size,
        "step": grid.step,
        "patches": [{"x": x, "y": y, "label": lab} for (x, y), lab in zip(grid.origins, pset.labels)],
    }


def write_manifest(path, grid: PatchGrid, pset: PatchSet) -> None:
    with open(path, "w") as fh:
        json.dump(manifest(grid, pset), fh)


def read_manifest(path):
    with open(path) as fh:
        d = json.load(fh)
    grid = PatchGrid(d["size"], d["step"], [(p["x"], p["y"]) for p in d["patches"]])
    return grid, PatchSet([p["label"] for p in d["patches"]])


def dump_patches(image, grid: PatchGrid, pset: PatchSet, directory) -> list[str]:
    """Write every patch as ``{label}_{x}_{y}.png`` and return the paths."""
    os.makedirs(directory, exist_ok=True)
    paths = []
    for i, ((x, y), lab) in enumerate(zip(grid.origins, pset.labels)):
        p = os.path.join(directory, f"{lab}_{x:04d}_{y:04d}.png")
        save_image(crop(image, grid, i), p)
        paths.append(p)
    return paths
