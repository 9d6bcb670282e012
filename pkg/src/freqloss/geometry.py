"""Samplers from depth + pose (pinhole reprojection) or from stereo disparity."""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field

import numpy as np

from .errors import ArgumentError, DomainError, FormatError
from .imgcore import as_map, bilinear_sample

# coordinates given to pixels that land behind the camera; bilinear validity is 0 there
BEHIND_CAMERA = -1.0e6


@dataclass(frozen=True)
class Intrinsics:
    fx: float
    fy: float
    cx: float
    cy: float

    def __post_init__(self):
        if not (self.fx > 0 and self.fy > 0):
            raise DomainError("focal lengths must be positive")

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.fx, 0.0, self.cx], [0.0, self.fy, self.cy], [0.0, 0.0, 1.0]])


@dataclass(frozen=True)
class Pose:
    """Rigid transform from target-camera to source-camera coordinates."""

    rotation: np.ndarray = field(default_factory=lambda: np.eye(3))
    translation: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def __post_init__(self):
        r = np.asarray(self.rotation, dtype=np.float64).reshape(3, 3)
        t = np.asarray(self.translation, dtype=np.float64).reshape(3)
        if not np.allclose(r.T @ r, np.eye(3), atol=1e-9, rtol=0):
            raise DomainError("rotation is not orthonormal")
        if abs(np.linalg.det(r) - 1.0) > 1e-9:
            raise DomainError("rotation must have determinant +1")
        object.__setattr__(self, "rotation", r)
        object.__setattr__(self, "translation", t)

    def inverse(self) -> "Pose":
        rt = self.rotation.T
        return Pose(rt, -rt @ self.translation)

    def compose(self, other: "Pose") -> "Pose":
        """``self`` applied after ``other``."""
        return Pose(self.rotation @ other.rotation, self.rotation @ other.translation + self.translation)


def load_calibration(path):
    """Read ``{fx, fy, cx, cy, rotation: [9], translation: [3]}`` from JSON."""
    with open(os.fspath(path)) as fh:
        doc = json.load(fh)
    try:
        k = Intrinsics(float(doc["fx"]), float(doc["fy"]), float(doc["cx"]), float(doc["cy"]))
        rot = doc.get("rotation", [1, 0, 0, 0, 1, 0, 0, 0, 1])
        trans = doc.get("translation", [0, 0, 0])
        if len(rot) != 9 or len(trans) != 3:
            raise FormatError(f"{path}: rotation needs 9 numbers and translation 3")
        pose = Pose(np.array(rot, dtype=np.float64).reshape(3, 3), np.array(trans, dtype=np.float64))
    except KeyError as exc:
        raise FormatError(f"{path}: missing calibration key {exc.args[0]!r}") from None
    return k, pose


def reprojection_sampler(depth, pose: Pose, k: Intrinsics, valid=None) -> np.ndarray:
    """For every target pixel, the source-image coordinate it projects to.

    Back-projects with ``K^-1`` and ``depth``, moves the point by ``pose`` and
    projects with ``K``.  Points that end up at or behind the source camera
    get coordinates ``(-1e6, -1e6)``; so do pixels flagged invalid in ``valid``.
    """
    depth = as_map(depth)
    h, w = depth.shape
    mask = np.ones((h, w), dtype=bool) if valid is None else as_map(valid) > 0
    if (depth[mask] <= 0).any() or not np.isfinite(depth[mask]).all():
        raise DomainError("depth must be finite and positive at every valid pixel")
    rows, cols = np.mgrid[0:h, 0:w].astype(np.float64)
    z = np.where(mask, depth, 1.0)
    x = (cols - k.cx) / k.fx * z
    y = (rows - k.cy) / k.fy * z
    pts = np.stack([x, y, z], axis=-1) @ pose.rotation.T + pose.translation
    zs = pts[..., 2]
    front = mask & (zs > 0)
    safe_z = np.where(front, zs, 1.0)
    u = k.fx * pts[..., 0] / safe_z + k.cx
    v = k.fy * pts[..., 1] / safe_z + k.cy
    u = np.where(front, u, BEHIND_CAMERA)
    v = np.where(front, v, BEHIND_CAMERA)
    # with an identity pose the round trip is exact by construction
    if np.array_equal(pose.rotation, np.eye(3)) and not pose.translation.any():
        u = np.where(front, cols, BEHIND_CAMERA)
        v = np.where(front, rows, BEHIND_CAMERA)
    return np.stack([u, v], axis=-1)


def disparity_sampler(disparity, sign: int = 1, shape=None) -> np.ndarray:
    """Rectified-stereo sampler ``(u - sign * d, v)``.

    ``disparity`` is a map or a scalar; a scalar needs ``shape=(H, W)``.
    """
    if sign not in (1, -1):
        raise ArgumentError(f"sign must be +1 or -1, got {sign}")
    if np.ndim(disparity) == 0:
        if shape is None:
            raise ArgumentError("a scalar disparity needs an explicit shape")
        d = np.full(shape, float(disparity))
    else:
        d = as_map(disparity)
    if (d < 0).any() or not np.isfinite(d).all():
        raise DomainError("disparity must be finite and non-negative")
    h, w = d.shape
    rows, cols = np.mgrid[0:h, 0:w].astype(np.float64)
    return np.stack([cols - sign * d, rows], axis=-1)


def reconstruct(source, sampler, border: str = "clamp"):
    """Synthesize the target view from ``source``; returns ``(image, validity)``."""
    return bilinear_sample(source, sampler, border=border)
