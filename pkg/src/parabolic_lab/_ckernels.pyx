# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled loops for the shell and cone reductions (see _pykernels for the reference)."""
import numpy as np
from libc.math cimport ceil


def shell_accumulate(const double[::1] P, const Py_ssize_t[::1] centers,
                     const Py_ssize_t[::1] offs, const double[::1] w,
                     const Py_ssize_t[::1] shell, Py_ssize_t n_shells):
    cdef Py_ssize_t nc = centers.shape[0]
    cdef Py_ssize_t no = offs.shape[0]
    out = np.zeros((n_shells, nc))
    cdef double[:, ::1] o = out
    cdef Py_ssize_t a, k, c, d, s
    cdef double v, wk
    for k in range(no):
        d = offs[k]
        wk = w[k]
        s = shell[k]
        for a in range(nc):
            c = centers[a]
            v = P[c + d] - 2.0 * P[c] + P[c - d]
            o[s, a] += wk * v * v
    return out


def cone_reduce(const double[:, :, ::1] W, const double[::1] R, bint periodic_x, bint use_max):
    cdef Py_ssize_t n0 = W.shape[0], nx = W.shape[1], nt = W.shape[2]
    out = np.zeros((nx, nt))
    cdef double[:, ::1] o = out
    cdef Py_ssize_t nlev = 1
    while (1 << nlev) <= nt:
        nlev += 1
    table = np.zeros((nlev, nx, nt))
    cdef double[:, :, ::1] T = table
    pref = np.zeros((nx, nt + 1))
    cdef double[:, ::1] C = pref
    lg_arr = np.zeros(nt + 2, dtype=np.intp)
    cdef Py_ssize_t[::1] lg = lg_arr
    cdef Py_ssize_t i, j, k, p, jj, dy, dymax, w, lo, hi, L
    cdef double r, rem, a, b, acc
    for L in range(2, nt + 2):
        lg[L] = lg[L // 2] + 1
    for i in range(n0):
        r = R[i]
        if r <= 0:
            continue
        if use_max:
            for j in range(nx):
                for k in range(nt):
                    T[0, j, k] = W[i, j, k]
            for p in range(1, nlev):
                for j in range(nx):
                    for k in range(nt - (1 << p) + 1):
                        a = T[p - 1, j, k]
                        b = T[p - 1, j, k + (1 << (p - 1))]
                        T[p, j, k] = a if a > b else b
        else:
            for j in range(nx):
                acc = 0.0
                C[j, 0] = 0.0
                for k in range(nt):
                    acc += W[i, j, k]
                    C[j, k + 1] = acc
        dymax = <Py_ssize_t>ceil(r) - 1
        for dy in range(-dymax, dymax + 1):
            rem = r - (dy if dy >= 0 else -dy)
            w = <Py_ssize_t>ceil(rem * rem) - 1
            if w < 0:
                continue
            for j in range(nx):
                jj = j + dy
                if periodic_x:
                    jj = jj % nx
                    if jj < 0:
                        jj += nx
                elif jj < 0 or jj >= nx:
                    continue
                for k in range(nt):
                    lo = k - w
                    if lo < 0:
                        lo = 0
                    hi = k + w
                    if hi > nt - 1:
                        hi = nt - 1
                    if use_max:
                        p = lg[hi - lo + 1]
                        a = T[p, jj, lo]
                        b = T[p, jj, hi - (1 << p) + 1]
                        if b > a:
                            a = b
                        if a > o[j, k]:
                            o[j, k] = a
                    else:
                        o[j, k] += C[jj, hi + 1] - C[jj, lo]
    return out
