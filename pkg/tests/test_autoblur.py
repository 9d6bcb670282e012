import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles
from freqloss.autoblur import (AutoBlurConfig, auto_blur, blur_plan, gaussian_blur, gaussian_kernel,
                               hf_area_mask, hf_pixel_mask)
from freqloss.errors import ArgumentError, DomainError
from freqloss.frequency import channel_frequency


def checkerboard(h, w):
    return (np.indices((h, w)).sum(axis=0) % 2).astype(float)


def test_hf_pixel_thresholds():
    assert not hf_pixel_mask(np.zeros((4, 4)), 0.2).any()
    assert hf_pixel_mask(np.full((2, 2), 0.2), 0.2).sum() == 0
    freq = channel_frequency(checkerboard(8, 8)[..., None])
    assert np.allclose(freq[:-1, :-1], np.sqrt(2))  # |du| = |dv| = 1 inside
    assert (hf_pixel_mask(freq)[:-1, :-1] == 1).all()
    with pytest.raises(DomainError):
        hf_pixel_mask(-np.ones((2, 2)))


def test_hf_area_examples():
    avg, area = hf_area_mask(np.ones((20, 20)), 9, 60)
    assert (avg[4:-4, 4:-4] == 1).all() and (area[4:-4, 4:-4] == 1).all()
    one = np.zeros((20, 20))
    one[10, 10] = 1
    avg, area = hf_area_mask(one)
    assert avg.max() == pytest.approx(1 / 81) and not area.any()
    half = np.zeros((20, 20))
    half[:, 10:] = 1
    avg, area = hf_area_mask(half)
    assert avg[10, 14] == 1 and area[10, 14] == 1
    assert avg[10, 10] == pytest.approx(45 / 81) and area[10, 10] == 0
    with pytest.raises(DomainError):
        hf_area_mask(np.full((5, 5), 0.5))


def test_area_vote_strict_tie():
    # 5x5 window, exactly 15 of 25 hot = 60% -> not an area under strict ">"
    m = np.zeros((5, 5))
    m[:3, :] = 1
    avg, area = hf_area_mask(m, 5, 60)
    assert avg[2, 2] == pytest.approx(0.6) and area[2, 2] == 0


@given(st.sampled_from([1, 3, 5, 9, 13]), st.floats(0.3, 5))
def test_kernel_normalised(size, sigma):
    k = gaussian_kernel(size, sigma)
    assert abs(k.sum() - 1) < 1e-12 and k.shape == (size, size)
    assert np.allclose(k, k.T) and np.allclose(k, k[::-1, ::-1])


def test_flat_gaussian_limit():
    assert np.allclose(gaussian_kernel(3, 1e4), 1 / 9, atol=1e-8)
    with pytest.raises(ArgumentError):
        gaussian_kernel(4, 1.0)
    with pytest.raises(ArgumentError):
        gaussian_kernel(3, 0.0)


@pytest.mark.parametrize("l", [1, 2, 3, 4, 5])
def test_block_preset_weights(l):
    cfg = AutoBlurConfig.block_preset(l)
    assert cfg.kernel_size == 4 * l + 1 and cfg.border == "zero"
    f = lambda x: math.exp(-x * x / (2 * cfg.sigma ** 2))
    assert f(l) / f(0) == pytest.approx(0.25, rel=1e-12)
    k1 = gaussian_kernel(cfg.kernel_size, cfg.sigma).sum(axis=0)
    # one tap per block centre: exactly 1 : 1/4 : 1/256 before normalising
    taps = k1[[2 * l, 3 * l, 4 * l]]
    taps = taps / (taps[0] + 2 * taps[1] + 2 * taps[2])
    assert taps[0] == pytest.approx(2 / 3, abs=0.005)
    assert taps[1] == pytest.approx(1 / 6, abs=0.005)
    assert taps[2] < 0.005
    # all kernel mass binned by block (a tap on a block boundary is split evenly)
    agg = np.zeros(5)
    for off, wt in zip(np.arange(cfg.kernel_size) - 2 * l, k1):
        pos = off / l + 2
        if l % 2 == 0 and off % l == l // 2:
            agg[int(pos)] += wt / 2
            agg[int(pos) + 1] += wt / 2
        else:
            agg[int(np.rint(pos))] += wt
    assert agg.sum() == pytest.approx(1)
    assert abs(agg[2] - 2 / 3) < 0.1 and abs(agg[1] - 1 / 6) < 0.05 and agg[0] < 0.01
    assert agg[1] == pytest.approx(agg[3])


def test_gaussian_blur_fixed_point_and_impulse():
    k = gaussian_kernel(5, 1.0)
    assert np.allclose(gaussian_blur(np.full((8, 8), 0.5), k, "replicate"), 0.5)
    imp = np.zeros((11, 11))
    imp[5, 5] = 1
    out = gaussian_blur(imp, k, "zero")[:, :, 0]
    assert np.allclose(out[3:8, 3:8], k) and out.sum() == pytest.approx(1)


@pytest.mark.parametrize("border", ["zero", "replicate"])
def test_gaussian_blur_matches_loop_oracle(rng, border):
    img = rng.random((16, 16))
    k = oracles.gaussian_weights(7, 1.3)
    out = gaussian_blur(img, gaussian_kernel(7, 1.3), border)[:, :, 0]
    assert np.abs(out - oracles.correlate(img, k, border)).max() < 1e-6


def test_auto_blur_constant_image_untouched():
    img = np.full((20, 20, 3), 0.4)
    out, plan = auto_blur(img)
    assert np.array_equal(out, img) and not plan.w_blur.any()


def test_auto_blur_full_checkerboard():
    img = checkerboard(30, 30)[..., None]
    out, plan = auto_blur(img)
    inner = (slice(5, -5), slice(5, -5))
    assert (plan.w_blur[inner] == 1).all()
    pure = gaussian_blur(img, gaussian_kernel(9, 1.5), "replicate")
    assert np.array_equal(out[inner], pure[inner])


def test_auto_blur_half_and_half():
    img = np.full((30, 40, 1), 0.5)
    img[:, 20:, 0] = checkerboard(30, 20)
    out, plan = auto_blur(img)
    untouched = plan.w_blur == 0
    assert np.array_equal(out[untouched], img[untouched])
    assert untouched[:, :12].all()
    assert (plan.w_blur[5:-5, 26:-5] == 1).all()
    assert not np.array_equal(out[5:-5, 26:-5], img[5:-5, 26:-5])


def test_plan_fields_consistent(rng):
    img = rng.random((24, 24, 3))
    plan = blur_plan(img)
    assert np.array_equal(plan.w_blur, plan.hf_avg * plan.hf_area)
    assert ((plan.w_blur == 0) | (plan.w_blur > 0.6)).all()


def test_config_validation():
    with pytest.raises(ArgumentError):
        AutoBlurConfig(s=4)
    with pytest.raises(ArgumentError):
        AutoBlurConfig(eta_pct=100)
    with pytest.raises(ArgumentError):
        AutoBlurConfig(border="reflect")
    with pytest.raises(ArgumentError):
        auto_blur(np.zeros((5, 5)))
