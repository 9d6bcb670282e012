"""Directional pixel differences and spatial-frequency maps.

All differences are signed, in intensity units, and zero wherever the
neighbour would fall outside the image.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ArgumentError, DimensionError
from .imgcore import as_image, as_map, require_min_size


@dataclass(frozen=True)
class GradientField:
    """One-sided differences of a single-channel image.

    ``du_plus[r, c] = I[r, c] - I[r, c + 1]`` (horizontal, towards the right),
    ``du_minus[r, c] = I[r, c] - I[r, c - 1]``, and likewise ``dv_*`` along rows.
    """

    du_plus: np.ndarray
    du_minus: np.ndarray
    dv_plus: np.ndarray
    dv_minus: np.ndarray


def to_luminance(img) -> np.ndarray:
    """Unweighted channel mean, returned as a one-channel image."""
    arr = as_image(img)
    if arr.shape[2] == 1:
        return arr
    return arr.mean(axis=2, keepdims=True)


def directional_gradients(img) -> GradientField:
    arr = np.asarray(img, dtype=np.float64)
    if arr.ndim == 3:
        if arr.shape[2] != 1:
            raise DimensionError("directional_gradients needs a single-channel image; call to_luminance first")
        arr = arr[:, :, 0]
    arr = as_map(arr)
    require_min_size(arr)
    return _differences(arr)


def _differences(arr):
    # works on (H, W) or (H, W, C); borders stay 0
    du_p = np.zeros_like(arr)
    du_m = np.zeros_like(arr)
    dv_p = np.zeros_like(arr)
    dv_m = np.zeros_like(arr)
    du_p[:, :-1] = arr[:, :-1] - arr[:, 1:]
    du_m[:, 1:] = arr[:, 1:] - arr[:, :-1]
    dv_p[:-1] = arr[:-1] - arr[1:]
    dv_m[1:] = arr[1:] - arr[:-1]
    return GradientField(du_p, du_m, dv_p, dv_m)


def freq_map_one_sided(g: GradientField, direction: str = "plus") -> np.ndarray:
    """Per-pixel L2 norm of the one-sided (du, dv) pair; values in [0, sqrt(2)]."""
    if direction == "plus":
        return np.hypot(g.du_plus, g.dv_plus)
    if direction == "minus":
        return np.hypot(g.du_minus, g.dv_minus)
    raise ArgumentError(f"direction must be 'plus' or 'minus', got {direction!r}")


def freq_map_centered(g: GradientField) -> np.ndarray:
    """Norm of the centred half-differences ``((du+ - du-)/2, (dv+ - dv-)/2)``."""
    return np.hypot((g.du_plus - g.du_minus) / 2.0, (g.dv_plus - g.dv_minus) / 2.0)


def channel_frequency(img, direction: str = "plus", reduce: str = "max") -> np.ndarray:
    """One-sided frequency map for a colour image.

    ``reduce="max"`` computes the frequency per channel and keeps the largest,
    so chromatic edges between equal-luminance colours still register.
    ``reduce="mean"`` computes it once on the channel-mean image.
    """
    arr = as_image(img)
    require_min_size(arr)
    if reduce == "mean":
        return freq_map_one_sided(_differences(to_luminance(arr)[:, :, 0]), direction)
    if reduce != "max":
        raise ArgumentError(f"reduce must be 'max' or 'mean', got {reduce!r}")
    return freq_map_one_sided(_differences(arr), direction).max(axis=2)
