"""Image containers, PNG/PFM I/O and bilinear sampling.

Conventions used everywhere in the package:

* an image is a float64 array of shape ``(H, W, C)`` with ``C`` in {1, 3};
* a scalar map (frequency, mask, weight, loss) is a float64 array ``(H, W)``;
* a sampler is a float64 array ``(H, W, 2)`` holding ``(u, v)`` =
  (column, row) source coordinates; pixel centres sit on integer coordinates
  and the origin is the top-left pixel.
"""
from __future__ import annotations

import os
import warnings

import numpy as np
from PIL import Image as PILImage

from . import _backend
from .errors import DimensionError, FormatError

BORDERS = ("clamp", "zero")


def as_image(img) -> np.ndarray:
    """Return ``img`` as a float64 ``(H, W, C)`` array; 2-D input gets one channel."""
    arr = np.asarray(img, dtype=np.float64)
    if arr.ndim == 2:
        arr = arr[:, :, None]
    if arr.ndim != 3 or arr.shape[2] not in (1, 3):
        raise DimensionError(f"expected an (H, W, 1|3) image, got shape {arr.shape}")
    if arr.shape[0] == 0 or arr.shape[1] == 0:
        raise DimensionError("image has no pixels")
    return arr


def as_map(m) -> np.ndarray:
    """Return ``m`` as a float64 ``(H, W)`` scalar map (squeezes a single channel)."""
    arr = np.asarray(m, dtype=np.float64)
    if arr.ndim == 3 and arr.shape[2] == 1:
        arr = arr[:, :, 0]
    if arr.ndim != 2:
        raise DimensionError(f"expected an (H, W) scalar map, got shape {arr.shape}")
    return arr


def require_min_size(arr, min_h=3, min_w=3):
    if arr.shape[0] < min_h or arr.shape[1] < min_w:
        raise DimensionError(f"need at least {min_h}x{min_w} pixels, got {arr.shape[0]}x{arr.shape[1]}")


def require_same_shape(a, b, what="inputs"):
    if a.shape != b.shape:
        raise DimensionError(f"{what} differ in shape: {a.shape} vs {b.shape}")


def identity_sampler(height: int, width: int) -> np.ndarray:
    """Sampler whose every pixel reads its own location."""
    v, u = np.mgrid[0:height, 0:width].astype(np.float64)
    return np.stack([u, v], axis=-1)


# ---------------------------------------------------------------------------
# file I/O

def load_image(path, clamp: bool = True) -> np.ndarray:
    """Load an 8-bit PNG (gray or RGB) or a PFM file into an ``(H, W, C)`` array.

    PNG bytes are divided by 255.  PFM values are clamped to [0, 1] with a
    ``UserWarning`` when anything was out of range; pass ``clamp=False`` for
    maps that legitimately exceed the unit range (disparity, depth).
    """
    path = os.fspath(path)
    if path.lower().endswith(".pfm"):
        data = _read_pfm(path)
        if clamp:
            finite = np.isfinite(data)
            if not finite.all() or (data < 0).any() or (data > 1).any():
                warnings.warn(f"{path}: values outside [0, 1] were clamped", UserWarning, stacklevel=2)
                data = np.clip(np.nan_to_num(data, nan=0.0), 0.0, 1.0)
        return data
    return _read_png(path)


def save_image(img, path) -> None:
    """Write ``img`` as PNG (8-bit, round-half-up) or PFM (float32), chosen by suffix."""
    path = os.fspath(path)
    arr = as_image(img)
    if path.lower().endswith(".pfm"):
        _write_pfm(arr, path)
    elif path.lower().endswith(".png"):
        _write_png(arr, path)
    else:
        raise FormatError(f"{path}: unsupported extension (use .png or .pfm)")


def _read_png(path):
    with PILImage.open(path) as im:
        if im.format != "PNG":
            raise FormatError(f"{path}: not a PNG file (got {im.format})")
        if im.mode not in ("L", "RGB"):
            raise FormatError(f"{path}: unsupported PNG mode {im.mode!r}; need 8-bit gray or RGB")
        data = np.asarray(im, dtype=np.uint8)
    return as_image(data.astype(np.float64) / 255.0)


def _write_png(arr, path):
    q = np.floor(np.clip(arr, 0.0, 1.0) * 255.0 + 0.5).astype(np.uint8)
    if q.shape[2] == 1:
        im = PILImage.fromarray(q[:, :, 0])
    else:
        im = PILImage.fromarray(q)
    im.save(path, format="PNG")


def _read_pfm(path):
    with open(path, "rb") as fh:
        header = fh.readline().strip()
        if header == b"PF":
            channels = 3
        elif header == b"Pf":
            channels = 1
        else:
            raise FormatError(f"{path}: not a PFM file")
        dims = fh.readline().split()
        while not dims:  # tolerate blank lines
            dims = fh.readline().split()
        try:
            width, height = int(dims[0]), int(dims[1])
            scale = float(fh.readline().strip())
        except (ValueError, IndexError):
            raise FormatError(f"{path}: malformed PFM header") from None
        dtype = "<f4" if scale < 0 else ">f4"
        raw = np.frombuffer(fh.read(), dtype=dtype)
    expected = width * height * channels
    if raw.size != expected:
        raise FormatError(f"{path}: expected {expected} floats, found {raw.size}")
    data = raw.reshape(height, width, channels)[::-1]
    return data.astype(np.float64)


def _write_pfm(arr, path):
    h, w, c = arr.shape
    header = b"PF\n" if c == 3 else b"Pf\n"
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(f"{w} {h}\n".encode("ascii"))
        fh.write(b"-1.0\n")
        fh.write(np.ascontiguousarray(arr[::-1], dtype="<f4").tobytes())


# ---------------------------------------------------------------------------
# sampling

def bilinear_sample(source, sampler, border: str = "clamp"):
    """Bilinearly sample ``source`` at every coordinate of ``sampler``.

    Returns ``(image, validity)``.  Validity is 1 where the coordinate lies
    inside ``[0, W-1] x [0, H-1]`` (all neighbours with non-zero weight exist)
    and 0 elsewhere.  Out-of-range neighbours read the edge pixel with
    ``border="clamp"`` and 0 with ``border="zero"``.
    """
    src = np.asarray(source, dtype=np.float64)
    squeeze = src.ndim == 2
    src = as_image(src)
    if src.shape[0] < 2 or src.shape[1] < 2:
        raise DimensionError("bilinear sampling needs a source of at least 2x2 pixels")
    smp = np.asarray(sampler, dtype=np.float64)
    if smp.ndim != 3 or smp.shape[2] != 2:
        raise DimensionError(f"sampler must have shape (H, W, 2), got {smp.shape}")
    if border not in BORDERS:
        raise ValueError(f"border must be one of {BORDERS}, got {border!r}")
    out, valid = _backend.bilinear_sample(src, smp[..., 0], smp[..., 1], border)
    if squeeze:
        out = out[:, :, 0]
    return out, valid


# ---------------------------------------------------------------------------
# visualisation

def false_color(m, vmin: float = 0.0, vmax: float | None = None) -> np.ndarray:
    """Map a scalar map to RGB with a black-red-yellow-white ramp.

    ``t = (m - vmin) / (vmax - vmin)`` clipped to [0, 1]; red rises over
    t in [0, 1/3], green over [1/3, 2/3], blue over [2/3, 1].
    """
    m = as_map(m)
    if vmax is None:
        vmax = float(m.max()) if m.size else 1.0
    span = vmax - vmin
    t = np.zeros_like(m) if span <= 0 else np.clip((m - vmin) / span, 0.0, 1.0)
    rgb = np.stack([np.clip(3 * t, 0, 1), np.clip(3 * t - 1, 0, 1), np.clip(3 * t - 2, 0, 1)], axis=-1)
    return rgb
