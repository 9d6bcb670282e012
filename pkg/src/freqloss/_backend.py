"""Kernel backend selection.

The compiled ``_kernels`` extension is used when importable; otherwise the
numpy twins in ``_pykernels``.  ``FREQLOSS_BACKEND=python`` forces the
fallback (handy for benchmarks and for cross-checking the two).
"""
import os

import numpy as np

from . import _pykernels

BORDER_CODES = {"zero": 0, "replicate": 1, "clamp": 1}

_compiled = None
if os.environ.get("FREQLOSS_BACKEND", "").lower() != "python":
    try:
        from . import _kernels as _compiled
    except ImportError:  # extension not built
        _compiled = None

BACKEND = "cython" if _compiled is not None else "python"


def get_kernels(name=None):
    """Return the kernel module for ``name`` ('cython', 'python' or None = active)."""
    name = name or BACKEND
    if name == "python":
        return _pykernels
    if name == "cython":
        if _compiled is None:
            raise RuntimeError("compiled kernels are not available")
        return _compiled
    raise ValueError(f"unknown backend {name!r}")


def border_code(border):
    try:
        return BORDER_CODES[border]
    except KeyError:
        raise ValueError(f"unknown border mode {border!r}; expected one of {sorted(BORDER_CODES)}") from None


def correlate2d(img, kernel, border, backend=None):
    k = get_kernels(backend)
    return k.correlate2d(np.ascontiguousarray(img, dtype=np.float64),
                         np.ascontiguousarray(kernel, dtype=np.float64),
                         border_code(border))


def box_mean(img, size, border, backend=None):
    k = get_kernels(backend)
    return k.box_mean(np.ascontiguousarray(img, dtype=np.float64), int(size), border_code(border))


def bilinear_sample(src, u, v, border, backend=None):
    k = get_kernels(backend)
    return k.bilinear_sample(np.ascontiguousarray(src, dtype=np.float64),
                             np.ascontiguousarray(u, dtype=np.float64),
                             np.ascontiguousarray(v, dtype=np.float64),
                             border_code(border))
