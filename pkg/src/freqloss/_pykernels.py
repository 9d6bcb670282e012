"""Pure-numpy versions of the compiled kernels in ``_kernels.pyx``.

Same signatures and border codes (0 = zero, 1 = replicate).  Used when the
extension is not built or when ``FREQLOSS_BACKEND=python``.
"""
import numpy as np


def _pad(img, ph, pw, border):
    mode = "constant" if border == 0 else "edge"
    return np.pad(img, ((ph, ph), (pw, pw)), mode=mode)


def correlate2d(img, kernel, border):
    h, w = img.shape
    kh, kw = kernel.shape
    padded = _pad(img, kh // 2, kw // 2, border)
    out = np.zeros((h, w), dtype=np.float64)
    for i in range(kh):
        for j in range(kw):
            out += kernel[i, j] * padded[i:i + h, j:j + w]
    return out


def box_mean(img, size, border):
    # summed-area table over the padded image
    h, w = img.shape
    half = size // 2
    padded = _pad(img, half, half, border)
    sat = np.zeros((padded.shape[0] + 1, padded.shape[1] + 1), dtype=np.float64)
    sat[1:, 1:] = padded.cumsum(axis=0).cumsum(axis=1)
    total = (sat[size:size + h, size:size + w] - sat[:h, size:size + w]
             - sat[size:size + h, :w] + sat[:h, :w])
    return total / float(size * size)


def bilinear_sample(src, u, v, border):
    h, w, _ = src.shape
    finite = np.isfinite(u) & np.isfinite(v)
    uu = np.where(finite, u, 0.0)
    vv = np.where(finite, v, 0.0)
    valid = finite & (uu >= 0) & (uu <= w - 1) & (vv >= 0) & (vv <= h - 1)
    uu = np.clip(uu, -2.0, w + 1.0)
    vv = np.clip(vv, -2.0, h + 1.0)
    x0 = np.floor(uu).astype(np.int64)
    y0 = np.floor(vv).astype(np.int64)
    fx = (uu - x0)[..., None]
    fy = (vv - y0)[..., None]
    x1 = x0 + 1
    y1 = y0 + 1

    def fetch(yy, xx):
        vals = src[np.clip(yy, 0, h - 1), np.clip(xx, 0, w - 1)]
        if border == 0:
            inside = (xx >= 0) & (xx < w) & (yy >= 0) & (yy < h)
            vals = np.where(inside[..., None], vals, 0.0)
        return vals

    out = ((1.0 - fx) * (1.0 - fy) * fetch(y0, x0)
           + fx * (1.0 - fy) * fetch(y0, x1)
           + (1.0 - fx) * fy * fetch(y1, x0)
           + fx * fy * fetch(y1, x1))
    out = np.where(finite[..., None], out, 0.0)
    return out, valid.astype(np.float64)
