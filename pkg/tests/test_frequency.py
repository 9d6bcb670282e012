import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from freqloss.errors import ArgumentError, DimensionError
from freqloss.frequency import (channel_frequency, directional_gradients, freq_map_centered,
                                freq_map_one_sided, to_luminance)


def row(*vals):
    return np.array([list(vals)] * 3, dtype=float)


def test_luminance():
    assert to_luminance(np.array([[[0.2, 0.4, 0.6]]]))[0, 0, 0] == pytest.approx(0.4)
    gray = np.random.default_rng(0).random((4, 4, 1))
    assert np.array_equal(to_luminance(gray), gray)
    assert np.allclose(to_luminance(np.full((3, 3, 3), 0.7)), 0.7)


def test_constant_image_has_no_gradients():
    g = directional_gradients(np.full((5, 5), 0.3))
    for m in (g.du_plus, g.du_minus, g.dv_plus, g.dv_minus):
        assert not m.any()
    assert not freq_map_one_sided(g).any() and not freq_map_centered(g).any()


def test_ramp_and_peak_centre_values():
    g = directional_gradients(row(0, 0.5, 1))
    assert g.du_plus[1, 1] == pytest.approx(-0.5) and g.du_minus[1, 1] == pytest.approx(0.5)
    assert freq_map_centered(g)[1, 1] == pytest.approx(0.5)
    g = directional_gradients(row(0, 1, 0))
    assert g.du_plus[1, 1] == 1 and g.du_minus[1, 1] == 1
    assert freq_map_centered(g)[1, 1] == 0


def test_three_four_five_norm():
    img = np.zeros((3, 3))
    img[1, 2] = -0.3
    img[2, 1] = -0.4
    assert freq_map_one_sided(directional_gradients(img), "plus")[1, 1] == pytest.approx(0.5)


def test_step_edge_left_pixel():
    g = directional_gradients(row(0, 0, 1, 1))
    assert g.du_plus[1, 1] == -1 and g.dv_plus[1, 1] == 0
    assert freq_map_one_sided(g, "plus")[1, 1] == 1.0


def test_borders_zero_and_errors():
    g = directional_gradients(np.random.default_rng(1).random((4, 5)))
    assert not g.du_plus[:, -1].any() and not g.du_minus[:, 0].any()
    assert not g.dv_plus[-1].any() and not g.dv_minus[0].any()
    with pytest.raises(DimensionError):
        directional_gradients(np.zeros((2, 5)))
    with pytest.raises(DimensionError):
        directional_gradients(np.zeros((4, 4, 3)))
    with pytest.raises(ArgumentError):
        freq_map_one_sided(g, "up")
    with pytest.raises(ArgumentError):
        channel_frequency(np.zeros((4, 4, 3)), reduce="median")


@given(arrays(np.float64, (6, 7), elements=st.floats(0, 1)))
def test_frequency_ranges(img):
    g = directional_gradients(img)
    for d in ("plus", "minus"):
        f = freq_map_one_sided(g, d)
        assert (f >= 0).all() and (f <= np.sqrt(2) + 1e-12).all()
    c = freq_map_centered(g)
    assert (c >= 0).all() and (c <= np.sqrt(2) + 1e-12).all()


@given(arrays(np.float64, (5, 5), elements=st.floats(0, 1)))
def test_minus_is_plus_of_flipped_image(img):
    plus_flipped = freq_map_one_sided(directional_gradients(img[::-1, ::-1]), "plus")[::-1, ::-1]
    assert np.allclose(freq_map_one_sided(directional_gradients(img), "minus"), plus_flipped)


def test_channel_frequency_sees_isoluminant_edges():
    img = np.zeros((4, 6, 3))
    img[:, :3, 0] = 1.0
    img[:, 3:, 1] = 1.0
    assert channel_frequency(img, reduce="max")[1, 2] == 1.0
    assert channel_frequency(img, reduce="mean")[1, 2] == 0.0
