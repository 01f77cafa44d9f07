"""Pure numpy versions of the compiled kernels; same signatures and results."""
import math

import numpy as np
from scipy import ndimage


def shell_accumulate(P, centers, offs, w, shell, n_shells):
    P = np.asarray(P, dtype=float)
    centers = np.asarray(centers)
    out = np.zeros((n_shells, centers.size))
    mid = P[centers]
    for d, wk, s in zip(offs, w, shell):
        v = P[centers + d] - 2.0 * mid + P[centers - d]
        out[s] += wk * v * v
    return out


def cone_reduce(W, R, periodic_x, use_max):
    W = np.asarray(W, dtype=float)
    n0, nx, nt = W.shape
    out = np.zeros((nx, nt))
    k = np.arange(nt)
    for i in range(n0):
        r = float(R[i])
        if r <= 0:
            continue
        layer = W[i]
        if not use_max:
            C = np.concatenate([np.zeros((nx, 1)), np.cumsum(layer, axis=1)], axis=1)
        cache = {}
        dymax = int(math.ceil(r)) - 1
        for dy in range(-dymax, dymax + 1):
            rem = r - abs(dy)
            w = int(math.ceil(rem * rem)) - 1
            if w < 0:
                continue
            if w not in cache:
                if use_max:
                    cache[w] = ndimage.maximum_filter1d(layer, size=2 * w + 1, axis=1,
                                                        mode="constant", cval=0.0)
                else:
                    lo = np.maximum(k - w, 0)
                    hi = np.minimum(k + w, nt - 1)
                    cache[w] = C[:, hi + 1] - C[:, lo]
            S = cache[w]
            if periodic_x:
                shifted = np.roll(S, -dy, axis=0)
            else:
                shifted = np.zeros_like(S)
                if abs(dy) >= nx:
                    continue
                if dy >= 0:
                    shifted[: nx - dy] = S[dy:]
                else:
                    shifted[-dy:] = S[: nx + dy]
            if use_max:
                np.maximum(out, shifted, out=out)
            else:
                out += shifted
    return out
