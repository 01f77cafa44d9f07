"""Time the compiled kernels against the numpy fallback on representative sizes.

    python benchmarks/bench_kernels.py [--repeat 3]
"""
import argparse
import timeit

import numpy as np

from parabolic_lab import _pykernels

try:
    from parabolic_lab import _ckernels
except ImportError:
    _ckernels = None


def shell_case(n=96, reach=6, seed=0):
    rng = np.random.default_rng(seed)
    pad = reach
    P = rng.standard_normal((n + 2 * pad, n + 2 * pad))
    stride = P.shape[1]
    offs, w, shell = [], [], []
    for dx in range(-reach, reach + 1):
        for dt in range(0, reach + 1):
            if dt == 0 and dx <= 0:
                continue
            offs.append(dx * stride + dt)
            w.append(1.0 / (1 + dx * dx + dt))
            shell.append(max(abs(dx), dt) - 1)
    gx, gt = np.meshgrid(np.arange(n) + pad, np.arange(n) + pad, indexing="ij")
    centers = (gx * stride + gt).ravel().astype(np.intp)
    return (P.ravel(), centers, np.asarray(offs, np.intp), np.asarray(w), np.asarray(shell, np.intp), reach)


def cone_case(n0=32, nx=64, nt=64, seed=0):
    rng = np.random.default_rng(seed)
    W = rng.random((n0, nx, nt))
    R = np.arange(n0, dtype=float)
    return W, R


def bench(repeat):
    sargs = shell_case()
    W, R = cone_case()
    cases = {
        "shell_accumulate": lambda m: m.shell_accumulate(*sargs),
        "cone_reduce(sum)": lambda m: m.cone_reduce(W, R, True, False),
        "cone_reduce(max)": lambda m: m.cone_reduce(W, R, True, True),
    }
    print(f"{'kernel':<20}{'python [s]':>12}{'cython [s]':>12}{'speedup':>10}  max|diff|")
    for name, fn in cases.items():
        tp = min(timeit.repeat(lambda: fn(_pykernels), number=1, repeat=repeat))
        if _ckernels is None:
            print(f"{name:<20}{tp:>12.4f}{'n/a':>12}")
            continue
        tc = min(timeit.repeat(lambda: fn(_ckernels), number=1, repeat=repeat))
        diff = float(np.max(np.abs(fn(_pykernels) - fn(_ckernels))))
        print(f"{name:<20}{tp:>12.4f}{tc:>12.4f}{tp / tc:>10.1f}  {diff:.1e}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    bench(ap.parse_args().repeat)
