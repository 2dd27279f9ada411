"""Time the compiled min-plus kernels against the numpy fallback.

Usage: python benchmarks/bench_minplus.py [--sizes 32 64 128] [--repeat 3]
"""

import argparse
import time

import numpy as np

from holokam.kam import _minplus_py as py

try:
    from holokam.kam import _minplus_ext as ext
except ImportError:
    ext = None


def _best(fn, *args, repeat=3):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", type=int, nargs="+", default=[32, 64, 128, 256])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    if ext is None:
        print("compiled extension not built; only the fallback is available")
    rng = np.random.default_rng(args.seed)
    print(f"{'kernel':8s} {'n':>5s} {'numpy [s]':>11s} {'cython [s]':>11s} {'speedup':>8s} agree")
    for n in args.sizes:
        A = rng.uniform(0, 10, (n, n))
        B = rng.uniform(0, 10, (n, n))
        u = rng.uniform(0, 10, n)
        cases = [("product", (A, B)), ("vecmat", (u, A)), ("closure", (A - py.karp(A),)), ("karp", (A,))]
        for name, a in cases:
            tp, op = _best(getattr(py, name), *a, repeat=args.repeat)
            if ext is None:
                print(f"{name:8s} {n:5d} {tp:11.5f} {'-':>11s} {'-':>8s} -")
                continue
            te, oe = _best(getattr(ext, name), *a, repeat=args.repeat)
            agree = bool(np.allclose(op, oe, rtol=1e-12, atol=1e-9))
            print(f"{name:8s} {n:5d} {tp:11.5f} {te:11.5f} {tp / te:8.1f} {agree}")


if __name__ == "__main__":
    main()
