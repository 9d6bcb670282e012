"""Time the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--size 256] [--repeat 5]

Prints one JSON line per kernel with the best wall time of each backend.
"""
import argparse
import json
import timeit

import numpy as np

from freqloss import _backend
from freqloss.autoblur import gaussian_kernel


def cases(size, rng):
    img = rng.random((size, size))
    u = rng.uniform(-2, size + 1, (size, size))
    v = rng.uniform(-2, size + 1, (size, size))
    src = rng.random((size, size, 3))
    k9 = gaussian_kernel(9, 1.5)
    return {
        "correlate2d_9x9": lambda b: _backend.correlate2d(img, k9, "replicate", backend=b),
        "box_mean_9": lambda b: _backend.box_mean(img, 9, "zero", backend=b),
        "box_mean_3": lambda b: _backend.box_mean(img, 3, "replicate", backend=b),
        "bilinear_rgb": lambda b: _backend.bilinear_sample(src, u, v, "clamp", backend=b),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--size", type=int, default=256)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    backends = ["python"] + (["cython"] if _backend._compiled is not None else [])
    rng = np.random.default_rng(0)
    for name, fn in cases(args.size, rng).items():
        row = {"kernel": name, "size": args.size}
        for b in backends:
            row[f"{b}_ms"] = round(1e3 * min(timeit.repeat(lambda: fn(b), number=1, repeat=args.repeat)), 3)
        if len(backends) == 2:
            row["speedup"] = round(row["python_ms"] / row["cython_ms"], 2)
        print(json.dumps(row))


if __name__ == "__main__":
    main()
