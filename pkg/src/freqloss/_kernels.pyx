# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled inner loops.

Every function here has a numpy twin in ``_pykernels`` with the same
signature; ``_backend`` picks one at import time.  Border codes:
0 = zero padding, 1 = replicate (clamp to edge).
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport floor, isfinite

cnp.import_array()


cdef inline Py_ssize_t _clampi(Py_ssize_t i, Py_ssize_t n) nogil:
    if i < 0:
        return 0
    if i >= n:
        return n - 1
    return i


def correlate2d(const double[:, ::1] img, const double[:, ::1] kernel, int border):
    """out[r, c] = sum_{i,j} kernel[i, j] * img[r + i - kh//2, c + j - kw//2]."""
    cdef Py_ssize_t h = img.shape[0], w = img.shape[1]
    cdef Py_ssize_t kh = kernel.shape[0], kw = kernel.shape[1]
    cdef Py_ssize_t oy = kh // 2, ox = kw // 2
    cdef Py_ssize_t r, c, i, j, rr, cc
    cdef double acc, px
    out_arr = np.empty((h, w), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    with nogil:
        for r in range(h):
            for c in range(w):
                acc = 0.0
                for i in range(kh):
                    rr = r + i - oy
                    if rr < 0 or rr >= h:
                        if border == 0:
                            continue
                        rr = _clampi(rr, h)
                    for j in range(kw):
                        cc = c + j - ox
                        if cc < 0 or cc >= w:
                            if border == 0:
                                continue
                            cc = _clampi(cc, w)
                        px = img[rr, cc]
                        acc = acc + kernel[i, j] * px
                out[r, c] = acc
    return out_arr


def box_mean(const double[:, ::1] img, Py_ssize_t size, int border):
    """Mean over the size x size window centred at each pixel (stride 1)."""
    cdef Py_ssize_t h = img.shape[0], w = img.shape[1]
    cdef Py_ssize_t half = size // 2
    cdef Py_ssize_t r, c, k, idx
    cdef double acc
    cdef double norm = 1.0 / (<double>size * <double>size)
    rows_arr = np.empty((h, w), dtype=np.float64)
    out_arr = np.empty((h, w), dtype=np.float64)
    cdef double[:, ::1] rows = rows_arr
    cdef double[:, ::1] out = out_arr
    with nogil:
        # horizontal pass
        for r in range(h):
            for c in range(w):
                acc = 0.0
                for k in range(-half, half + 1):
                    idx = c + k
                    if idx < 0 or idx >= w:
                        if border == 0:
                            continue
                        idx = _clampi(idx, w)
                    acc = acc + img[r, idx]
                rows[r, c] = acc
        # vertical pass
        for r in range(h):
            for c in range(w):
                acc = 0.0
                for k in range(-half, half + 1):
                    idx = r + k
                    if idx < 0 or idx >= h:
                        if border == 0:
                            continue
                        idx = _clampi(idx, h)
                    acc = acc + rows[idx, c]
                out[r, c] = acc * norm
    return out_arr


def bilinear_sample(const double[:, :, ::1] src, const double[:, ::1] u,
                    const double[:, ::1] v, int border):
    """Bilinear lookup of ``src`` at (u, v) = (column, row) coordinates.

    Returns (values, validity); validity is 1 where the coordinate lies in
    [0, w-1] x [0, h-1], i.e. every neighbour with non-zero weight exists.
    """
    cdef Py_ssize_t h = src.shape[0], w = src.shape[1], nch = src.shape[2]
    cdef Py_ssize_t oh = u.shape[0], ow = u.shape[1]
    cdef Py_ssize_t r, c, ch, x0, y0, x1, y1
    cdef double uu, vv, fx, fy, w00, w01, w10, w11, p00, p01, p10, p11
    cdef bint in00, in01, in10, in11
    out_arr = np.empty((oh, ow, nch), dtype=np.float64)
    valid_arr = np.empty((oh, ow), dtype=np.float64)
    cdef double[:, :, ::1] out = out_arr
    cdef double[:, ::1] valid = valid_arr
    with nogil:
        for r in range(oh):
            for c in range(ow):
                uu = u[r, c]
                vv = v[r, c]
                if not (isfinite(uu) and isfinite(vv)):
                    valid[r, c] = 0.0
                    for ch in range(nch):
                        out[r, c, ch] = 0.0
                    continue
                if uu >= 0.0 and uu <= w - 1 and vv >= 0.0 and vv <= h - 1:
                    valid[r, c] = 1.0
                else:
                    valid[r, c] = 0.0
                # keep far-away coordinates in a range floor() can index
                if uu < -2.0:
                    uu = -2.0
                elif uu > w + 1.0:
                    uu = w + 1.0
                if vv < -2.0:
                    vv = -2.0
                elif vv > h + 1.0:
                    vv = h + 1.0
                x0 = <Py_ssize_t>floor(uu)
                y0 = <Py_ssize_t>floor(vv)
                fx = uu - x0
                fy = vv - y0
                x1 = x0 + 1
                y1 = y0 + 1
                w00 = (1.0 - fx) * (1.0 - fy)
                w01 = fx * (1.0 - fy)
                w10 = (1.0 - fx) * fy
                w11 = fx * fy
                in00 = 0 <= x0 < w and 0 <= y0 < h
                in01 = 0 <= x1 < w and 0 <= y0 < h
                in10 = 0 <= x0 < w and 0 <= y1 < h
                in11 = 0 <= x1 < w and 0 <= y1 < h
                for ch in range(nch):
                    if border == 0:
                        p00 = src[y0, x0, ch] if in00 else 0.0
                        p01 = src[y0, x1, ch] if in01 else 0.0
                        p10 = src[y1, x0, ch] if in10 else 0.0
                        p11 = src[y1, x1, ch] if in11 else 0.0
                    else:
                        p00 = src[_clampi(y0, h), _clampi(x0, w), ch]
                        p01 = src[_clampi(y0, h), _clampi(x1, w), ch]
                        p10 = src[_clampi(y1, h), _clampi(x0, w), ch]
                        p11 = src[_clampi(y1, h), _clampi(x1, w), ch]
                    out[r, c, ch] = w00 * p00 + w01 * p01 + w10 * p10 + w11 * p11
    return out_arr, valid_arr
