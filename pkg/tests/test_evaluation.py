import json

import numpy as np
import pytest

from shadowdecomp.evaluation import (color_correct_gt, color_correction_coeffs, mae_report,
                                     mean_reports)
from shadowdecomp.imagecore import rgb_to_lab


def _lstar(g):
    # reference CIE L* for an sRGB gray level
    return 116 * (((g + 0.055) / 1.055) ** 2.4) ** (1 / 3) - 16


def test_identical_images(rng):
    img = rng.random((40, 30, 3))
    m = rng.random((40, 30)) > 0.5
    rep = mae_report(img, img, m)
    assert rep.mae_shadow == rep.mae_nonshadow == rep.mae_all == 0
    assert rep.n_shadow + rep.n_nonshadow == 256 * 256


def test_gray_offset():
    gt = np.full((20, 20, 3), 0.5)
    res = np.full((20, 20, 3), 0.6)
    rep = mae_report(res, gt, np.ones((20, 20), bool))
    expected = (_lstar(0.6) - _lstar(0.5)) / 3
    assert abs(expected - 3.2778766037482825) < 1e-9
    assert abs(rep.mae_shadow - expected) < 0.05
    assert rep.mae_nonshadow is None
    assert rep.n_shadow == 256 * 256


def test_symmetry_and_weighted_mean(rng):
    a, b = rng.random((50, 60, 3)), rng.random((50, 60, 3))
    m = np.zeros((50, 60), bool)
    m[10:30, 5:40] = True
    r1, r2 = mae_report(a, b, m), mae_report(b, a, m)
    assert (r1.mae_shadow, r1.mae_nonshadow, r1.mae_all) == (r2.mae_shadow, r2.mae_nonshadow, r2.mae_all)
    mixed = (r1.mae_shadow * r1.n_shadow + r1.mae_nonshadow * r1.n_nonshadow) / (256 * 256)
    assert abs(r1.mae_all - mixed) < 1e-9


def test_against_direct_lab_at_native_size(rng):
    a, b = rng.random((16, 16, 3)), rng.random((16, 16, 3))
    m = rng.random((16, 16)) > 0.5
    rep = mae_report(a, b, m, eval_size=(16, 16))
    err = np.abs(rgb_to_lab(a) - rgb_to_lab(b)).mean(axis=2)
    assert abs(rep.mae_shadow - err[m].mean()) < 1e-12
    assert rep.eval_size == (16, 16)


def test_report_json(rng):
    img = rng.random((8, 8, 3))
    d = json.loads(mae_report(img, img * 0.9, np.zeros((8, 8), bool)).to_json())
    assert d["mae"]["shadow"] is None
    assert d["pixels"] == {"shadow": 0, "non_shadow": 65536}
    assert d["eval_size"] == [256, 256]


def test_mean_reports(rng):
    img = rng.random((8, 8, 3))
    m = np.zeros((8, 8), bool)
    m[:4] = True
    reps = [mae_report(img, img * k, m) for k in (0.8, 0.9)]
    agg = mean_reports(reps)
    assert agg["n_images"] == 2
    assert abs(agg["mae"]["all"] - (reps[0].mae_all + reps[1].mae_all) / 2) < 1e-12


def test_color_correct_identity(rng):
    img = rng.random((12, 12, 3))
    m = np.zeros((12, 12), bool)
    m[3:8, 3:8] = True
    a, c, deg = color_correction_coeffs(img, img, m)
    np.testing.assert_allclose(a, 1, atol=1e-12)
    np.testing.assert_allclose(c, 0, atol=1e-12)
    np.testing.assert_allclose(color_correct_gt(img, img, m), img, atol=1e-12)


def test_color_correct_recovers_affine(rng):
    shadow = rng.uniform(0.2, 0.6, (12, 12, 3))
    m = np.zeros((12, 12), bool)
    m[2:6, 2:6] = True
    gt = (shadow - 0.1) / 0.5
    a, c, _ = color_correction_coeffs(shadow, gt, m)
    np.testing.assert_allclose(a, 0.5, atol=1e-6)
    np.testing.assert_allclose(c, 0.1, atol=1e-6)


def test_color_correct_never_worse(rng):
    shadow = rng.random((20, 20, 3))
    gt = np.clip(shadow * 1.1 + 0.05 + rng.normal(0, 0.05, shadow.shape), 0, 1)
    m = rng.random((20, 20)) > 0.7
    out = color_correct_gt(shadow, gt, m)
    for k in range(3):
        before = ((gt[..., k] - shadow[..., k])[~m] ** 2).mean()
        after = ((out[..., k] - shadow[..., k])[~m] ** 2).mean()
        assert after <= before + 1e-15


def test_color_correct_degenerate_channel(rng):
    shadow = rng.random((6, 6, 3))
    gt = rng.random((6, 6, 3))
    gt[..., 1] = 0.4
    a, c, deg = color_correction_coeffs(shadow, gt, np.zeros((6, 6), bool))
    assert deg == [False, True, False]
    assert a[1] == 1 and c[1] == 0


def test_color_correct_needs_lit_pixels(rng):
    img = rng.random((3, 3, 3))
    with pytest.raises(ValueError):
        color_correct_gt(img, img, np.ones((3, 3), bool))
