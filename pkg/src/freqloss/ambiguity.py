"""Ambiguity-Masking: find anti-aliased boundary pixels and down-weight their loss.

An anti-aliased pixel blends the colours on both sides of an edge, so its
one-sided differences towards the two neighbours have opposite signs.  The
ambiguity score is that indicator times the centred frequency; scores from
the target and from every warped source frame are fused with a pixel-wise
max and turned into a weight mask (1 = keep, 0 = exclude).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ArgumentError, DomainError
from .frequency import GradientField, directional_gradients, freq_map_centered, to_luminance
from .imgcore import as_image, as_map, bilinear_sample, require_min_size, require_same_shape

MASK_MODES = ("hard", "exponential")


@dataclass(frozen=True)
class AmbiguityConfig:
    delta: float = 0.3
    mode: str = "hard"
    gamma: float = 3.0

    def __post_init__(self):
        if not self.delta > 0:
            raise ArgumentError(f"delta must be > 0, got {self.delta}")
        if not self.gamma > 0:
            raise ArgumentError(f"gamma must be > 0, got {self.gamma}")
        if self.mode not in MASK_MODES:
            raise ArgumentError(f"mode must be one of {MASK_MODES}, got {self.mode!r}")


def opposite_sign_mask(g: GradientField) -> np.ndarray:
    """1 where either axis has one-sided differences of strictly opposite sign."""
    horiz = g.du_plus * g.du_minus < 0
    vert = g.dv_plus * g.dv_minus < 0
    return (horiz | vert).astype(np.float64)


def ambiguity_map(img) -> np.ndarray:
    """Opposite-sign mask times centred frequency, on the channel-mean image."""
    lum = to_luminance(as_image(img))
    require_min_size(lum)
    g = directional_gradients(lum)
    return opposite_sign_mask(g) * freq_map_centered(g)


def warp_ambiguity(a_source, sampler) -> np.ndarray:
    """Carry a source-frame ambiguity map into the target frame.

    Clamp-border bilinear sampling; pixels whose sample falls outside the
    source frame get 0.
    """
    a = as_map(a_source)
    warped, valid = bilinear_sample(a, sampler, border="clamp")
    return warped * valid


def fuse_ambiguity(maps) -> np.ndarray:
    """Pixel-wise maximum over one or more ambiguity maps."""
    maps = [as_map(m) for m in maps]
    if not maps:
        raise ArgumentError("fuse_ambiguity needs at least one map")
    out = maps[0].copy()
    for m in maps[1:]:
        require_same_shape(out, m, "ambiguity maps")
        np.maximum(out, m, out=out)
    return out


def ambiguity_weight_mask(a_max, cfg: AmbiguityConfig = AmbiguityConfig()) -> np.ndarray:
    """Loss weights from fused ambiguity.

    hard: ``[a_max < delta]``; exponential: ``exp(-gamma * a_max)``.
    """
    a = as_map(a_max)
    if (a < 0).any():
        raise DomainError("ambiguity values must be non-negative")
    if cfg.mode == "hard":
        return (a < cfg.delta).astype(np.float64)
    return np.exp(-cfg.gamma * a)


def pair_weight_mask(target, sources, samplers, cfg: AmbiguityConfig = AmbiguityConfig()):
    """Full masking pipeline for one target and its source frames.

    Returns ``(a_max, weights)``.  ``sources`` and ``samplers`` are parallel
    sequences; each source's ambiguity is warped by its sampler before fusing.
    """
    if len(sources) != len(samplers):
        raise ArgumentError("need exactly one sampler per source frame")
    maps = [ambiguity_map(target)]
    for src, smp in zip(sources, samplers):
        maps.append(warp_ambiguity(ambiguity_map(src), smp))
    a_max = fuse_ambiguity(maps)
    return a_max, ambiguity_weight_mask(a_max, cfg)
