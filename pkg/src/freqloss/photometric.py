"""L1 + SSIM photometric loss, masked reductions and the supervised L1 baseline."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _backend
from .errors import ArgumentError, DomainError
from .imgcore import as_image, as_map, require_same_shape


@dataclass(frozen=True)
class LossConfig:
    alpha: float = 0.85
    c1: float = 0.01 ** 2
    c2: float = 0.03 ** 2

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ArgumentError(f"alpha must lie in [0, 1], got {self.alpha}")
        if not (self.c1 > 0 and self.c2 > 0):
            raise ArgumentError("SSIM constants c1, c2 must be positive")


def _box3(x):
    return _backend.box_mean(x, 3, "replicate")


def ssim_map(a, b, cfg: LossConfig = LossConfig()) -> np.ndarray:
    """SSIM from 3x3 uniform-window statistics, replicate padding, channel-averaged."""
    a = as_image(a)
    b = as_image(b)
    require_same_shape(a, b, "SSIM inputs")
    acc = np.zeros(a.shape[:2])
    for ch in range(a.shape[2]):
        x = a[:, :, ch]
        y = b[:, :, ch]
        mx, my = _box3(x), _box3(y)
        vx = _box3(x * x) - mx * mx
        vy = _box3(y * y) - my * my
        cxy = _box3(x * y) - mx * my
        num = (2 * mx * my + cfg.c1) * (2 * cxy + cfg.c2)
        den = (mx * mx + my * my + cfg.c1) * (vx + vy + cfg.c2)
        acc += num / den
    return acc / a.shape[2]


def photometric_loss_map(target, recon, cfg: LossConfig = LossConfig()) -> np.ndarray:
    """``alpha/2 * (1 - SSIM) + (1 - alpha) * |target - recon|`` per pixel, clamped at 0."""
    target = as_image(target)
    recon = as_image(recon)
    require_same_shape(target, recon, "loss inputs")
    l1 = np.abs(target - recon).mean(axis=2)
    if cfg.alpha == 0.0:
        return l1
    loss = cfg.alpha / 2.0 * (1.0 - ssim_map(target, recon, cfg)) + (1.0 - cfg.alpha) * l1
    return np.maximum(loss, 0.0)


def masked_mean_loss(loss, weight):
    """Weighted mean ``sum(loss * w) / sum(w)``.

    Returns ``(value, empty)``; ``empty`` is True (and value 0.0) when the
    weights sum to zero.
    """
    loss = as_map(loss)
    weight = as_map(weight)
    require_same_shape(loss, weight, "loss and weight")
    if (weight < 0).any() or (weight > 1).any():
        raise DomainError("weights must lie in [0, 1]")
    total = weight.sum()
    if total == 0:
        return 0.0, True
    return float((loss * weight).sum() / total), False


def supervised_l1(pred, gt) -> float:
    pred = np.asarray(pred, dtype=np.float64)
    gt = np.asarray(gt, dtype=np.float64)
    require_same_shape(pred, gt, "prediction and ground truth")
    return float(np.abs(pred - gt).mean())
