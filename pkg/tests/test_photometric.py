import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

import oracles
from freqloss.errors import ArgumentError, DimensionError, DomainError
from freqloss.photometric import LossConfig, masked_mean_loss, photometric_loss_map, ssim_map, supervised_l1


def test_self_similarity(rng):
    img = rng.random((7, 9, 3))
    assert np.allclose(ssim_map(img, img), 1.0)
    assert not photometric_loss_map(img, img).any()


def test_constant_black_vs_white():
    a, b = np.zeros((5, 5, 1)), np.ones((5, 5, 1))
    c1 = 1e-4
    assert np.allclose(ssim_map(a, b), c1 / (1 + c1))
    expected = 0.85 / 2 * (1 - c1 / (1 + c1)) + 0.15
    assert np.allclose(photometric_loss_map(a, b), expected)
    assert np.allclose(photometric_loss_map(a, b), 0.575, atol=1e-4)


def test_shifted_image_matches_scalar_ssim(rng):
    img = rng.random((12, 13, 3))
    shifted = np.roll(img, 1, axis=1)
    assert np.abs(ssim_map(img, shifted) - oracles.ssim(img, shifted)).max() < 1e-6


def test_alpha_zero_is_l1(rng):
    a, b = rng.random((6, 6, 3)), rng.random((6, 6, 3))
    assert np.array_equal(photometric_loss_map(a, b, LossConfig(alpha=0)), np.abs(a - b).mean(axis=2))


@given(arrays(np.float64, (5, 5, 3), elements=st.floats(0, 1)),
       arrays(np.float64, (5, 5, 3), elements=st.floats(0, 1)), st.floats(0, 1))
def test_loss_nonnegative_and_symmetric(a, b, alpha):
    cfg = LossConfig(alpha=alpha)
    la = photometric_loss_map(a, b, cfg)
    assert (la >= 0).all()
    assert np.allclose(la, photometric_loss_map(b, a, cfg))
    s = ssim_map(a, b)
    assert (s <= 1 + 1e-9).all() and (s >= -1 - 1e-9).all()


def test_masked_mean():
    loss = np.array([[1.0, 3.0]])
    assert masked_mean_loss(loss, np.ones((1, 2))) == (2.0, False)
    assert masked_mean_loss(loss, np.zeros((1, 2))) == (0.0, True)
    assert masked_mean_loss(loss, np.array([[1.0, 0.0]])) == (1.0, False)
    with pytest.raises(DomainError):
        masked_mean_loss(loss, np.array([[1.5, 0.0]]))
    with pytest.raises(DimensionError):
        masked_mean_loss(loss, np.ones((2, 2)))


def test_supervised_l1():
    gt = np.random.default_rng(3).random((4, 4))
    assert supervised_l1(gt, gt) == 0
    assert supervised_l1(gt + 0.5, gt) == pytest.approx(0.5)
    assert supervised_l1(np.array([0.0, 2.0]), np.array([1.0, 1.0])) == 1.0


def test_config_and_shape_errors():
    with pytest.raises(ArgumentError):
        LossConfig(alpha=1.5)
    with pytest.raises(ArgumentError):
        LossConfig(c1=0)
    with pytest.raises(DimensionError):
        photometric_loss_map(np.zeros((3, 3, 3)), np.zeros((3, 4, 3)))
