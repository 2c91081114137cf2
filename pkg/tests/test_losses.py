import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shadowdecomp.illum import ShadowParams
from shadowdecomp.losses import (LossWeights, boundary_loss, gan_loss, l1_reconstruction,
                                 matting_loss, regression_loss, smoothness_loss, total_fully,
                                 total_weakly)
from shadowdecomp.matting import enforce_matte_constraints
from shadowdecomp.morphmask import PenumbraMasks, penumbra_masks

TOL = 1e-9


def test_l1_examples(rng):
    gt = rng.random((4, 6, 3)) * 0.5
    assert l1_reconstruction(gt, gt) == 0
    assert abs(l1_reconstruction(gt + 0.1, gt) - 0.1) < TOL
    out = gt.copy()
    out[:, :3] += 0.2
    region = np.zeros((4, 6), bool)
    region[:, :3] = True
    assert abs(l1_reconstruction(out, gt, region) - 0.2) < TOL


def test_l1_empty_region(rng):
    x = rng.random((2, 2, 3))
    with pytest.raises(ValueError):
        l1_reconstruction(x, x, np.zeros((2, 2), bool))


@settings(max_examples=50)
@given(seed=st.integers(0, 2 ** 32 - 1))
def test_l1_symmetric_and_triangle(seed):
    r = np.random.default_rng(seed)
    a, b, c = (r.random((5, 5, 3)) for _ in range(3))
    region = r.random((5, 5)) > 0.3
    region[0, 0] = True
    assert l1_reconstruction(a, b, region) == l1_reconstruction(b, a, region)
    assert l1_reconstruction(a, c, region) <= (l1_reconstruction(a, b, region)
                                               + l1_reconstruction(b, c, region) + 1e-12)


def test_smoothness_examples():
    assert smoothness_loss(np.full((4, 4), 0.3)) == 0
    assert abs(smoothness_loss(np.array([[0.0, 1.0], [0.0, 1.0]])) - 0.5) < TOL
    for n in (3, 10, 50):
        ramp = np.tile(np.linspace(0, 1, n), (n, 1))
        assert abs(smoothness_loss(ramp) - 1 / (2 * (n - 1))) < TOL


def test_smoothness_one_dimensional():
    assert abs(smoothness_loss(np.array([[0.0, 0.5, 1.0]])) - 0.5) < TOL
    assert abs(smoothness_loss(np.array([[0.0], [1.0]])) - 1.0) < TOL


@settings(max_examples=50)
@given(seed=st.integers(0, 2 ** 32 - 1))
def test_smoothness_negation_invariant(seed):
    a = np.random.default_rng(seed).random((6, 7))
    assert abs(smoothness_loss(a) - smoothness_loss(1 - a)) < 1e-12


def _pen_with_counts(n_umbra, n_exterior, shape=(8, 8)):
    """Hand-built masks: umbra = first n_umbra pixels, exterior = last n_exterior."""
    flat = np.zeros(shape[0] * shape[1], bool)
    eroded = flat.copy()
    eroded[:n_umbra] = True
    dilated = ~flat
    dilated[-n_exterior:] = False
    z = flat.reshape(shape)
    return PenumbraMasks(inner=z.copy(), outer=z.copy(), dilated=dilated.reshape(shape),
                         eroded=eroded.reshape(shape))


def test_matting_loss_examples():
    pen = _pen_with_counts(10, 30)
    conforming = np.where(pen.umbra, 1.0, 0.0)
    assert matting_loss(conforming, pen) == 0
    assert abs(matting_loss(np.zeros((8, 8)), pen) - 1.0) < TOL
    assert abs(matting_loss(np.full((8, 8), 0.25), pen) - 1.0) < TOL
    # 0.75 from the 10-pixel umbra + 0.25 from the 30-pixel exterior
    assert abs(matting_loss(np.where(pen.dilated, 0.25, 0.0), pen) - 0.75) < TOL


def test_matting_loss_zero_iff_enforcement_is_noop(rng):
    for _ in range(20):
        pen = penumbra_masks(rng.random((12, 12)) > 0.5, 1, 2)
        matte = rng.random((12, 12))
        fixed = enforce_matte_constraints(matte, pen)
        assert matting_loss(fixed, pen) == 0
        unchanged = np.array_equal(fixed, matte)
        assert (matting_loss(matte, pen) == 0) == unchanged


def _band_pen():
    m = np.zeros((8, 8), bool)
    m[2:6, 2:6] = True
    return penumbra_masks(m, 1, 1)


def test_boundary_loss_examples():
    pen = _band_pen()
    assert boundary_loss(np.full((8, 8, 3), 0.7), pen) < TOL
    out = np.full((8, 8, 3), 0.9)
    out[pen.inner] = 0.2
    out[pen.outer] = 0.5
    assert abs(boundary_loss(out, pen) - 0.3) < TOL
    swapped = out.copy()
    swapped[pen.inner], swapped[pen.outer] = 0.5, 0.2
    assert abs(boundary_loss(swapped, pen) - boundary_loss(out, pen)) < TOL


def test_boundary_loss_empty_band():
    pen = penumbra_masks(np.zeros((5, 5), bool))
    with pytest.raises(ValueError):
        boundary_loss(np.zeros((5, 5, 3)), pen)


def test_gan_loss_examples():
    assert gan_loss(0) == 0
    assert abs(gan_loss(0.5) - (-0.693147)) < 1e-6
    assert abs(gan_loss(1) - math.log(1e-7)) < TOL
    assert abs(gan_loss(1) - (-16.11809565095832)) < TOL
    for bad in (-0.1, 1.1):
        with pytest.raises(ValueError):
            gan_loss(bad)


@given(st.floats(0, 1))
def test_gan_loss_nonpositive(d):
    assert gan_loss(d) <= 0


def test_regression_loss_examples():
    t = ShadowParams([1.5, 2.0, 2.5], [0.1, 0.2, 0.3])
    assert regression_loss(t, t) == 0
    p = ShadowParams(t.w + 0.6, t.b)
    assert abs(regression_loss(p, t) - 0.3) < TOL
    assert regression_loss(p, t) == regression_loss(t, p)


def _fully(v):
    return dict.fromkeys(("regression", "smoothness", "penumbra", "rec_mat", "rec_final"), v)


def _weakly(v):
    return dict.fromkeys(("smoothness", "matting", "boundary", "gan"), v)


def test_default_weights():
    w = LossWeights()
    assert list(w.fully().values()) == [1, 1, 10, 1, 1]
    assert [w.bd, w.mat, w.sm_w, w.adv] == [0.5, 100, 10, 0.5]


def test_total_fully_examples():
    assert total_fully(_fully(0.0)).total == 0
    assert abs(total_fully(_fully(1.0)).total - 14) < TOL
    doubled = LossWeights(2, 2, 20, 2, 2)
    terms = dict(zip(_fully(0).keys(), (0.3, 0.1, 0.02, 0.5, 0.4)))
    assert abs(total_fully(terms, doubled).total - 2 * total_fully(terms).total) < TOL


def test_total_weakly_examples():
    assert total_weakly(_weakly(0.0)).total == 0
    assert abs(total_weakly(_weakly(1.0)).total - 111.0) < TOL
    zero = LossWeights(bd=0, mat=0, sm_w=0, adv=0)
    assert total_weakly(_weakly(3.7), zero).total == 0


def test_totals_missing_term():
    terms = _fully(1.0)
    del terms["penumbra"]
    with pytest.raises(ValueError, match="penumbra"):
        total_fully(terms)
    with pytest.raises(ValueError, match="gan"):
        total_weakly({"smoothness": 1, "matting": 1, "boundary": 1})


def test_negative_weight_rejected():
    with pytest.raises(ValueError):
        LossWeights(reg=-1)


@settings(max_examples=50)
@given(st.lists(st.floats(0, 10), min_size=5, max_size=5),
       st.lists(st.floats(0, 10), min_size=5, max_size=5))
def test_report_total_is_weighted_sum(vals, ws):
    terms = dict(zip(_fully(0).keys(), vals))
    rep = total_fully(terms, LossWeights(*ws))
    assert abs(rep.total - sum(a * b for a, b in zip(vals, ws))) < 1e-9
    d = json.loads(rep.to_json())
    assert set(d) == {"terms", "total", "weights"}
