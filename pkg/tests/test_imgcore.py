import warnings

import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays
from PIL import Image

import oracles
from freqloss.errors import DimensionError, FormatError
from freqloss.imgcore import (as_image, bilinear_sample, false_color, identity_sampler, load_image,
                              save_image)


def test_png_gray_bytes_scaled(tmp_path):
    p = tmp_path / "g.png"
    Image.fromarray(np.array([[0, 255], [128, 64]], dtype=np.uint8)).save(p)
    img = load_image(p)
    assert img.shape == (2, 2, 1)
    assert img[:, :, 0].tolist() == [[0.0, 1.0], [128 / 255, 64 / 255]]


def test_png_half_rounds_up(tmp_path):
    p = tmp_path / "h.png"
    save_image(np.full((3, 3), 0.5), p)
    assert np.asarray(Image.open(p)).max() == 128


def test_png_rgb_channel_order(tmp_path):
    p = tmp_path / "c.png"
    img = np.zeros((4, 5, 3))
    img[..., 0] = 1.0
    img[..., 2] = 0.2
    save_image(img, p)
    raw = np.asarray(Image.open(p))
    assert raw.shape == (4, 5, 3)
    assert (raw[..., 0] == 255).all() and (raw[..., 1] == 0).all() and (raw[..., 2] == 51).all()
    assert np.array_equal(load_image(p), np.round(img * 255) / 255)


def test_png_16bit_rejected(tmp_path):
    p = tmp_path / "d.png"
    Image.fromarray(np.zeros((3, 3), dtype=np.uint16)).save(p)
    with pytest.raises(FormatError):
        load_image(p)


def test_pfm_constant_round_trip(tmp_path):
    p = tmp_path / "c.pfm"
    save_image(np.full((5, 7, 3), 0.5), p)
    out = load_image(p)
    assert out.shape == (5, 7, 3) and (out == 0.5).all()


@given(arrays(np.float32, st.tuples(st.integers(1, 9), st.integers(1, 9), st.sampled_from([1, 3])),
              elements=st.floats(0, 1, width=32)))
def test_pfm_round_trip_bit_exact(tmp_path_factory, data):
    p = tmp_path_factory.mktemp("pfm") / "x.pfm"
    save_image(data.astype(np.float64), p)
    out = load_image(p)
    assert out.dtype == np.float64
    assert np.array_equal(out, data.astype(np.float64))


def test_pfm_clamps_with_warning(tmp_path):
    p = tmp_path / "big.pfm"
    save_image(np.full((3, 3), 1.5), p)
    with pytest.warns(UserWarning, match="clamped"):
        out = load_image(p)
    assert (out == 1.0).all()
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        assert (load_image(p, clamp=False) == 1.5).all()


def test_pfm_big_endian_bottom_up(tmp_path):
    p = tmp_path / "be.pfm"
    rows = np.array([[0.25, 0.5], [0.75, 1.0]], dtype=">f4")  # top row first in memory order
    with open(p, "wb") as fh:
        fh.write(b"Pf\n2 2\n1.0\n")
        fh.write(rows[::-1].tobytes())
    assert load_image(p)[:, :, 0].tolist() == [[0.25, 0.5], [0.75, 1.0]]


def test_bad_files(tmp_path):
    bad = tmp_path / "bad.pfm"
    bad.write_bytes(b"P6\n1 1\n255\n\x00\x00\x00")
    with pytest.raises(FormatError):
        load_image(bad)
    short = tmp_path / "short.pfm"
    short.write_bytes(b"Pf\n4 4\n-1.0\n" + b"\x00" * 12)
    with pytest.raises(FormatError):
        load_image(short)
    with pytest.raises(OSError):
        load_image(tmp_path / "missing.png")
    with pytest.raises(FormatError):
        save_image(np.zeros((2, 2)), tmp_path / "x.bmp")


def test_as_image_rejects_bad_channels():
    with pytest.raises(DimensionError):
        as_image(np.zeros((3, 3, 2)))
    with pytest.raises(DimensionError):
        as_image(np.zeros(5))


def test_identity_sampler_exact(rng):
    src = rng.random((6, 9, 3))
    out, valid = bilinear_sample(src, identity_sampler(6, 9))
    assert np.array_equal(out, src)
    assert (valid == 1).all()


def test_linear_interpolation_quarter():
    src = np.array([[0.0, 1.0], [0.0, 1.0]])
    out, valid = bilinear_sample(src, np.array([[[0.25, 0.0]]]))
    assert out[0, 0] == pytest.approx(0.25)
    assert valid[0, 0] == 1


@pytest.mark.parametrize("border", ["clamp", "zero"])
def test_integer_shift_matches_index_oracle(rng, border):
    src = rng.random((8, 8))
    smp = identity_sampler(8, 8)
    smp[..., 0] -= 2  # every pixel reads two columns left
    out, valid = bilinear_sample(src, smp, border=border)
    assert np.array_equal(out[:, 2:], src[:, :-2])
    assert (valid[:, :2] == 0).all() and (valid[:, 2:] == 1).all()
    expected_fill = src[:, :1] if border == "clamp" else 0.0
    assert np.allclose(out[:, :2], expected_fill)


def test_nonfinite_coordinates_invalid():
    src = np.ones((3, 3))
    smp = np.array([[[np.nan, 0.0], [np.inf, 1.0], [0.0, -np.inf]]])
    out, valid = bilinear_sample(src, smp)
    assert (valid == 0).all() and (out == 0).all()


@given(st.integers(2, 7), st.integers(2, 7), st.floats(-3, 10), st.floats(-3, 10),
       st.sampled_from(["clamp", "zero"]), st.integers(0, 2**32 - 1))
def test_bilinear_matches_oracle(h, w, u, v, border, seed):
    src = np.random.default_rng(seed).random((h, w))
    out, valid = bilinear_sample(src, np.array([[[u, v]]]), border=border)
    ref, ref_valid = oracles.bilinear(src, u, v, border)
    assert out[0, 0] == pytest.approx(ref, abs=1e-12)
    assert valid[0, 0] == ref_valid


@given(st.floats(-2, 2), st.floats(0, 1))
def test_interpolation_of_affine_field_is_exact(a, b):
    h, w = 6, 7
    rows, cols = np.mgrid[0:h, 0:w].astype(float)
    src = a * cols + b * rows
    pts = np.random.default_rng(0).uniform(0, [w - 1, h - 1], size=(4, 5, 2))
    out, _ = bilinear_sample(src, pts)
    assert np.allclose(out, a * pts[..., 0] + b * pts[..., 1], atol=1e-12)


def test_false_color_ramp():
    rgb = false_color(np.array([[0.0, 1 / 3, 2 / 3, 1.0]]), 0.0, 1.0)
    assert np.allclose(rgb[0], [[0, 0, 0], [1, 0, 0], [1, 1, 0], [1, 1, 1]])
    assert (false_color(np.zeros((2, 2)), 0.0, 0.0) == 0).all()
