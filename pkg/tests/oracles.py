"""Slow, independent reference implementations used as test oracles.

Plain Python loops on purpose: nothing here shares code with the package.
"""
import math
from fractions import Fraction

import numpy as np


def _read(img, r, c, border):
    h, w = img.shape
    if 0 <= r < h and 0 <= c < w:
        return img[r, c]
    if border == "zero":
        return 0.0
    return img[min(max(r, 0), h - 1), min(max(c, 0), w - 1)]


def correlate(img, kernel, border):
    """out[r, c] = sum_ij k[i, j] * img[r + i - kh//2, c + j - kw//2]."""
    img = np.asarray(img, dtype=float)
    kh, kw = kernel.shape
    h, w = img.shape
    out = np.zeros((h, w))
    for r in range(h):
        for c in range(w):
            acc = 0.0
            for i in range(kh):
                for j in range(kw):
                    acc += kernel[i, j] * _read(img, r + i - kh // 2, c + j - kw // 2, border)
            out[r, c] = acc
    return out


def gaussian_weights(size, sigma):
    half = size // 2
    k = np.array([[math.exp(-((i - half) ** 2 + (j - half) ** 2) / (2 * sigma * sigma))
                   for j in range(size)] for i in range(size)])
    return k / k.sum()


def ssim(a, b, c1=1e-4, c2=9e-4):
    """Per-pixel SSIM, 3x3 window, replicate padding, channel mean; (H, W, C) inputs."""
    h, w, ch = a.shape
    out = np.zeros((h, w))
    for r in range(h):
        for c in range(w):
            total = 0.0
            for k in range(ch):
                xs, ys = [], []
                for i in (-1, 0, 1):
                    for j in (-1, 0, 1):
                        rr = min(max(r + i, 0), h - 1)
                        cc = min(max(c + j, 0), w - 1)
                        xs.append(a[rr, cc, k])
                        ys.append(b[rr, cc, k])
                mx = sum(xs) / 9
                my = sum(ys) / 9
                vx = sum((x - mx) ** 2 for x in xs) / 9
                vy = sum((y - my) ** 2 for y in ys) / 9
                cov = sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / 9
                total += ((2 * mx * my + c1) * (2 * cov + c2)) / ((mx * mx + my * my + c1) * (vx + vy + c2))
            out[r, c] = total / ch
    return out


def bilinear(src, u, v, border):
    """Sample an (H, W) array at (u, v); returns (value, valid)."""
    h, w = src.shape
    if not (math.isfinite(u) and math.isfinite(v)):
        return 0.0, 0.0
    valid = 1.0 if (0 <= u <= w - 1 and 0 <= v <= h - 1) else 0.0
    x0, y0 = math.floor(u), math.floor(v)
    fx, fy = u - x0, v - y0
    val = ((1 - fx) * (1 - fy) * _read(src, y0, x0, border)
           + fx * (1 - fy) * _read(src, y0, x0 + 1, border)
           + (1 - fx) * fy * _read(src, y0 + 1, x0, border)
           + fx * fy * _read(src, y0 + 1, x0 + 1, border))
    return val, valid


def fairness(xs, losses, gt):
    """Exact fairness degree with Fractions: length-weighted midpoint sign test."""
    xs = [Fraction(x) for x in xs]
    gt = Fraction(gt)
    passed = Fraction(0)
    total = Fraction(0)
    for i in range(len(xs) - 1):
        width = xs[i + 1] - xs[i]
        total += width
        slope = losses[i + 1] - losses[i]
        mid = (xs[i] + xs[i + 1]) / 2
        if (slope > 0 and mid > gt) or (slope < 0 and mid < gt):
            passed += width
    return passed / total


def monotone_radius(xs, losses, gt):
    """Largest r such that |x1-gt| < |x2-gt| <= r implies L(x1) < L(x2)."""
    dists = sorted({abs(x - gt) for x in xs})
    best = dists[0]
    for r in dists:
        ok = True
        for x1, l1 in zip(xs, losses):
            for x2, l2 in zip(xs, losses):
                d1, d2 = abs(x1 - gt), abs(x2 - gt)
                if d1 < d2 <= r and not l1 < l2:
                    ok = False
        if not ok:
            break
        best = r
    return best


def opposite_sign_set(img2d):
    """Pixels whose left/right or up/down one-sided differences have opposite signs."""
    h, w = img2d.shape
    hits = set()
    for r in range(h):
        for c in range(w):
            if 0 < c < w - 1:
                a = img2d[r, c] - img2d[r, c + 1]
                b = img2d[r, c] - img2d[r, c - 1]
                if a * b < 0:
                    hits.add((r, c))
            if 0 < r < h - 1:
                a = img2d[r, c] - img2d[r + 1, c]
                b = img2d[r, c] - img2d[r - 1, c]
                if a * b < 0:
                    hits.add((r, c))
    return hits
