"""Auto-Blur: Gaussian low-pass filtering applied only inside high-frequency areas.

The blurred image is meant for the photometric loss only; depth/pose
predictors should keep seeing the original frames.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _backend
from .errors import ArgumentError, DomainError
from .frequency import channel_frequency
from .imgcore import as_image, as_map

BLUR_BORDERS = ("replicate", "zero")


@dataclass(frozen=True)
class AutoBlurConfig:
    lam: float = 0.2
    s: int = 9
    eta_pct: float = 60.0
    kernel_size: int = 9
    sigma: float = 1.5
    border: str = "replicate"
    channel_reduce: str = "max"

    def __post_init__(self):
        if not self.lam > 0:
            raise ArgumentError(f"lambda must be > 0, got {self.lam}")
        if not 0 < self.eta_pct < 100:
            raise ArgumentError(f"eta_pct must lie in (0, 100), got {self.eta_pct}")
        for name in ("s", "kernel_size"):
            v = getattr(self, name)
            if int(v) != v or v < 3 or v % 2 == 0:
                raise ArgumentError(f"{name} must be an odd integer >= 3, got {v}")
        if not self.sigma > 0:
            raise ArgumentError(f"sigma must be > 0, got {self.sigma}")
        if self.border not in BLUR_BORDERS:
            raise ArgumentError(f"border must be one of {BLUR_BORDERS}, got {self.border!r}")
        if self.channel_reduce not in ("max", "mean"):
            raise ArgumentError(f"channel_reduce must be 'max' or 'mean', got {self.channel_reduce!r}")

    @classmethod
    def block_preset(cls, l: int, **overrides) -> "AutoBlurConfig":
        """Kernel ``4l+1`` with f(l)/f(0) = 1/4, zero-padded borders.

        With blocks of width ``l`` the normalised weights land near 2/3 on the
        centre block, 1/6 on each neighbour and almost nothing two blocks out.
        """
        if l < 1:
            raise ArgumentError(f"block width must be >= 1, got {l}")
        params = dict(kernel_size=4 * l + 1, sigma=l / math.sqrt(2.0 * math.log(4.0)), border="zero")
        params.update(overrides)
        return cls(**params)


@dataclass(frozen=True)
class BlurPlan:
    hf_pixel: np.ndarray
    hf_avg: np.ndarray
    hf_area: np.ndarray
    w_blur: np.ndarray


def hf_pixel_mask(freq, lam: float = 0.2) -> np.ndarray:
    f = as_map(freq)
    if (f < 0).any():
        raise DomainError("frequency values must be non-negative")
    return (f > lam).astype(np.float64)


def hf_area_mask(hf_pixel, s: int = 9, eta_pct: float = 60.0):
    """Average-pool the pixel mask (stride 1, zero padding) and threshold the vote.

    Returns ``(hf_avg, hf_area)`` with ``hf_area = [hf_avg > eta_pct / 100]``.
    """
    if int(s) != s or s < 1 or s % 2 == 0:
        raise ArgumentError(f"pooling window must be a positive odd integer, got {s}")
    mask = as_map(hf_pixel)
    if not np.isin(mask, (0.0, 1.0)).all():
        raise DomainError("hf_pixel must be a binary mask")
    hf_avg = _backend.box_mean(mask, int(s), "zero")
    # the summed-area fallback can leave ~1e-16 residue on empty windows
    hf_avg = np.clip(np.round(hf_avg * s * s) / (s * s), 0.0, 1.0)
    return hf_avg, (hf_avg > eta_pct / 100.0).astype(np.float64)


def gaussian_kernel(kernel_size: int = 9, sigma: float = 1.5) -> np.ndarray:
    """Isotropic Gaussian sampled at integer offsets, normalised to sum to 1."""
    if int(kernel_size) != kernel_size or kernel_size < 1 or kernel_size % 2 == 0:
        raise ArgumentError(f"kernel_size must be a positive odd integer, got {kernel_size}")
    if not sigma > 0:
        raise ArgumentError(f"sigma must be > 0, got {sigma}")
    offsets = np.arange(kernel_size, dtype=np.float64) - kernel_size // 2
    d2 = offsets[:, None] ** 2 + offsets[None, :] ** 2
    k = np.exp(-d2 / (2.0 * sigma * sigma)) / (math.sqrt(2.0 * math.pi) * sigma)
    return k / k.sum()


def gaussian_blur(img, kernel, border: str = "replicate") -> np.ndarray:
    """Per-channel 2-D correlation with ``kernel``."""
    arr = as_image(img)
    if border not in BLUR_BORDERS:
        raise ArgumentError(f"border must be one of {BLUR_BORDERS}, got {border!r}")
    kernel = np.asarray(kernel, dtype=np.float64)
    out = np.empty_like(arr)
    for ch in range(arr.shape[2]):
        out[:, :, ch] = _backend.correlate2d(arr[:, :, ch], kernel, border)
    return out


def blur_plan(img, cfg: AutoBlurConfig = AutoBlurConfig()) -> BlurPlan:
    freq = channel_frequency(img, "plus", reduce=cfg.channel_reduce)
    hf_pixel = hf_pixel_mask(freq, cfg.lam)
    hf_avg, hf_area = hf_area_mask(hf_pixel, cfg.s, cfg.eta_pct)
    return BlurPlan(hf_pixel, hf_avg, hf_area, hf_avg * hf_area)


def auto_blur(img, cfg: AutoBlurConfig = AutoBlurConfig()):
    """Blend the Gaussian-blurred image in where high-frequency areas were found.

    Returns ``(blurred, plan)``.  Pixels with ``w_blur == 0`` are copied from
    the input unchanged.
    """
    arr = as_image(img)
    if arr.shape[0] < cfg.kernel_size or arr.shape[1] < cfg.kernel_size:
        raise ArgumentError(f"image {arr.shape[0]}x{arr.shape[1]} is smaller than the {cfg.kernel_size}px kernel")
    plan = blur_plan(arr, cfg)
    out = arr.copy()
    hit = plan.w_blur > 0
    if hit.any():
        blurred = gaussian_blur(arr, gaussian_kernel(cfg.kernel_size, cfg.sigma), cfg.border)
        w = plan.w_blur[hit][:, None]
        out[hit] = w * blurred[hit] + (1.0 - w) * arr[hit]
    return out, plan
