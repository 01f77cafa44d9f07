"""Lewis-Murray condition functionals and their equivalence report.

Every functional is a sup over sliding cubes Q_r (r = m*h, m dyadic) of a
cube average of a pointwise quantity.  Periodic fields are wrapped; for other
fields only cubes whose whole stencil stays inside the box are used.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy import signal

from . import kernels
from .bmo import bmo_norm, box_sums, sup_cube_means
from .fracops import MultiplierSpec, apply_multiplier, taper_window
from .grid import GridSpec, ScalarField


class MarginError(ValueError):
    pass


@dataclass
class LmReport:
    B_iv: float = 0.0
    B_v_grad: float = 0.0
    B_v_time: float = 0.0
    B_vi_grad: float = 0.0
    B_vi_grad_alt: float = math.nan
    D_bmo_sq: float = 0.0
    failures: dict = field(default_factory=dict)

    def combined(self) -> dict:
        return {
            "D_bmo_sq": self.D_bmo_sq,
            "B_iv": self.B_iv,
            "B_v": self.B_v_grad + self.B_v_time,
            "B_vi": self.B_vi_grad + self.B_v_time,
        }

    def ratio_matrix(self) -> dict:
        c = self.combined()
        out = {}
        for a, va in c.items():
            for b, vb in c.items():
                if a != b:
                    out[f"{a}/{b}"] = va / vb if vb > 0 else math.nan
        return out

    def trivial(self) -> bool:
        return all(v == 0 for v in self.combined().values())

    def max_ratio(self) -> float:
        vals = [v for v in self.ratio_matrix().values() if not math.isnan(v)]
        return max(vals) if vals else math.nan

    def to_json(self) -> str:
        d = asdict(self)
        d["ratios"] = self.ratio_matrix()
        return json.dumps(d, sort_keys=True, default=float)


def dyadic_cells(spec: GridSpec, r_max: float | None, r_min: float | None = None) -> list:
    """Cube radii in cells, ascending: r_max/h, r_max/2h, ... down to r_min."""
    top = spec.max_cells() if r_max is None else int(round(r_max / spec.h))
    top = min(top, spec.max_cells())
    low = 1 if r_min is None else max(1, int(round(r_min / spec.h)))
    out = []
    m = top
    while m >= low:
        out.append(m)
        if m % 2:
            break
        m //= 2
    if not out:
        raise MarginError("no admissible cube radius")
    return sorted(out)


def _pad_field(f: ScalarField, pads: tuple) -> np.ndarray:
    if f.periodic:
        return np.pad(f.values, [(p, p) for p in pads], mode="wrap")
    return np.pad(f.values, [(p, p) for p in pads], constant_values=np.nan)


def _finish(per_radius: dict, spec: GridSpec, name: str, pads: tuple) -> float:
    v = sup_cube_means(per_radius, spec)
    if math.isnan(v):
        raise MarginError(f"{name}: no cube keeps its stencil inside the box; "
                          f"needs a margin of {pads} cells per axis")
    return v


def _shell_functional(phi: ScalarField, offsets: list, weights: list, radii_of: list,
                      cells: list, name: str) -> float:
    """Shared driver for the second-difference functionals.

    ``radii_of[k]`` is the smallest index into ``cells`` whose cube radius admits offset k.
    """
    spec = phi.spec
    nd = len(spec.counts)
    if len(offsets) == 0:
        return 0.0
    off = np.asarray(offsets, dtype=np.intp)
    pads = tuple(int(np.abs(off[:, a]).max()) for a in range(nd))
    P = _pad_field(phi, pads)
    strides = np.cumprod((1,) + P.shape[::-1][:-1])[::-1]
    lin = (off * strides).sum(1).astype(np.intp)
    grid = np.meshgrid(*[np.arange(n) + p for n, p in zip(spec.counts, pads)], indexing="ij")
    centers = sum(g * s for g, s in zip(grid, strides)).ravel().astype(np.intp)
    shells = kernels.shell_accumulate(np.ascontiguousarray(P.ravel()), np.ascontiguousarray(centers),
                                      np.ascontiguousarray(lin),
                                      np.ascontiguousarray(weights, dtype=float),
                                      np.ascontiguousarray(radii_of, dtype=np.intp), len(cells))
    cum = np.cumsum(shells, axis=0)
    per_radius = {m: cum[i].reshape(spec.counts) for i, m in enumerate(cells)}
    return _finish(per_radius, spec, name, pads)


_NODES, _NODE_W = np.polynomial.legendre.leggauss(5)


def _half_space_offsets(ns: int, reach_x: int, reach_t: int | None) -> np.ndarray:
    """One offset of every +-pair, centre excluded; last column is the time lag."""
    ax = [np.arange(-reach_x, reach_x + 1)] * ns
    ax.append(np.arange(0, (reach_t or 0) + 1))
    off = np.stack([g.ravel() for g in np.meshgrid(*ax, indexing="ij")], axis=1)
    keep = off[:, -1] > 0
    y = off[:, :-1]
    # b = 0: keep y whose first nonzero entry is positive
    nz = np.argmax(y != 0, axis=1)
    first = y[np.arange(len(y)), nz]
    keep |= (off[:, -1] == 0) & (first > 0)
    return off[keep]


def _cell_kernel_shells(off: np.ndarray, spec: GridSpec, power: int, cells: list,
                        with_time: bool) -> tuple:
    """Kernel weight of each offset cell, split by cube-radius shell.

    Space is sampled at the cell centre.  With a time lag the kernel is integrated
    over the time cell in sigma = sqrt(|s|), where it is smooth.  A spatial offset
    lying exactly on a shell edge is shared half and half with the next shell.
    Returns (offset index, shell index, weight); weights carry the factor 2 of the
    mirrored offset.
    """
    h, ns = spec.h, spec.n_minus_1
    K = len(off)
    ynorm = np.sqrt((off[:, :ns].astype(float) ** 2).sum(1))[:, None] * h
    edges = np.asarray(cells, float) * h
    if with_time:
        g, gw = 0.5 * _NODES, 0.5 * _NODE_W
        b = off[:, -1:].astype(float)
        lo = np.where(b > 0, np.sqrt(np.maximum(b - 0.5, 0) * spec.dt), 0.0)
        hi = np.sqrt((b + 0.5) * spec.dt)
        mult = np.where(b > 0, 1.0, 2.0)
        sig = 0.5 * (hi + lo) + (hi - lo) * g[None, :]
        w = h ** ns * (hi - lo) * gw[None, :] * 2 * sig * mult
        norm = ynorm + sig
        shell = np.searchsorted(edges, norm, side="right")
    else:
        w = np.full((K, 2), 0.5 * h ** ns)
        norm = np.repeat(ynorm, 2, axis=1)
        on_edge = np.isclose(ynorm[:, 0, None], edges[None, :], rtol=0, atol=1e-9 * h).any(1)
        shell = np.searchsorted(edges, norm, side="right")
        shell[:, 0] -= on_edge  # the lower half stays in the shell that ends on the edge
    kern = 2.0 * w / norm ** power
    S = len(cells)
    W = np.zeros((K, S + 1))
    np.add.at(W, (np.repeat(np.arange(K), norm.shape[1]), shell.ravel()), kern.ravel())
    W = W[:, :S]
    ks, ss = np.nonzero(W > 0)
    return ks, ss, W[ks, ss]


def functional_second_diff_spacetime(phi: ScalarField, r_max: float | None = None,
                                     r_min: float | None = None) -> float:
    spec = phi.spec
    cells = dyadic_cells(spec, r_max, r_min)
    top = cells[-1]
    off = _half_space_offsets(spec.n_minus_1, top, top * top)
    bound = np.sqrt((off[:, :-1] ** 2).sum(1)) + np.sqrt(off[:, -1])
    off = off[bound < top + 1.5]
    ks, ss, w = _cell_kernel_shells(off, spec, spec.n_minus_1 + 4, cells, True)
    return _shell_functional(phi, off[ks], w, ss, cells, "second_diff_spacetime")


def functional_second_diff_space(phi: ScalarField, r_max: float | None = None,
                                 r_min: float | None = None) -> float:
    spec = phi.spec
    cells = dyadic_cells(spec, r_max, r_min)
    top = cells[-1]
    off = _half_space_offsets(spec.n_minus_1, top, None)
    off = off[np.sqrt((off[:, :-1] ** 2).sum(1)) < top + 1.5]
    ks, ss, w = _cell_kernel_shells(off[:, :-1], spec, spec.n_minus_1 + 2, cells, False)
    return _shell_functional(phi, off[ks], w, ss, cells, "second_diff_space")


def _window_pair_sums(v: np.ndarray, starts: np.ndarray, w: int) -> np.ndarray:
    """sum over ordered pairs t != s in each time window of (v_t - v_s)^2 / (t - s)^2.

    Short windows use an explicit lag loop; long ones expand the square and use an
    FFT convolution for the cross term.
    """
    if w <= 64:
        out = np.zeros(v.shape[:-1] + (starts.size,))
        for L in range(1, w):
            g = (v[..., L:] - v[..., :-L]) ** 2 / float(L * L)
            C = np.concatenate([np.zeros(g.shape[:-1] + (1,)), np.cumsum(g, axis=-1)], axis=-1)
            out += C[..., starts + w - L] - C[..., starts]
        return 2.0 * out
    idx = starts[:, None] + np.arange(w)[None, :]
    win = v[..., idx]
    win = win - win[..., :1]
    lag = np.arange(1, w, dtype=float)
    K = 1.0 / (lag * lag)
    S = np.concatenate([[0.0], np.cumsum(K)])
    pos = np.arange(w)
    row = S[pos] + S[w - 1 - pos]
    kern = np.concatenate([K[::-1], [0.0], K])
    cross = signal.fftconvolve(win, kern.reshape((1,) * (win.ndim - 1) + (-1,)), mode="full",
                               axes=-1)[..., w - 1:2 * w - 1]
    return 2.0 * ((row * win * win).sum(-1) - (win * cross).sum(-1))


def functional_time_quotient(phi: ScalarField, r_cap: float | None = None,
                             r_min: float | None = None) -> float:
    """sup over cubes of the time-difference quotient integrated over I_r x Q_r."""
    spec = phi.spec
    ns = spec.n_minus_1
    nt = spec.counts[-1]
    cells = dyadic_cells(spec, r_cap, r_min)
    best = 0.0
    for m in cells:
        tw = 2 * m * m
        kt = np.arange(0, nt - tw + 1, m * m)
        if kt.size == 0:
            continue
        acc = _window_pair_sums(phi.values, kt, tw)
        # spatial windows of 2m cells, lower corners on multiples of m
        win = box_sums(acc, (2 * m,) * ns + (1,))
        sel = tuple(slice(0, None, m) for _ in range(ns)) + (slice(None),)
        vol = (2 * m) ** ns * tw * spec.dt
        best = max(best, float(win[sel].max()) / vol)
    return best


# ---------------------------------------------------------------- averaged gradient forms

def spatial_gradient(phi: ScalarField, axis: int = 0) -> np.ndarray:
    v = phi.values
    if phi.periodic:
        return (np.roll(v, -1, axis) - np.roll(v, 1, axis)) / (2 * phi.spec.h)
    return np.gradient(v, phi.spec.h, axis=axis)


def _require_1d(phi: ScalarField, name: str):
    if phi.spec.n_minus_1 != 1:
        raise NotImplementedError(f"{name} is implemented for one spatial dimension")


def _at(G: np.ndarray, start: float, n: int) -> np.ndarray:
    """Rows start, start+1, ... of G (n of them), linear in the fractional part of start."""
    fl = math.floor(start)
    fr = start - fl
    a = G[fl:fl + n]
    if fr == 0:
        return a
    return (1 - fr) * a + fr * G[fl + 1:fl + 1 + n]


def functional_avg_gradient(phi: ScalarField, r_max: float | None = None, n_theta: int = 16,
                            n_gauss: int = 8) -> float:
    """Averaged-gradient functional.

    The box attached to (x, t) at scale rho has its upper corner at the cell (x, t).
    Directions are equispaced on the unit circle, lambda uses Gauss-Legendre nodes
    and rho runs over dyadic levels with weight log 2.
    """
    _require_1d(phi, "functional_avg_gradient")
    spec = phi.spec
    cells = dyadic_cells(spec, r_max)
    top = cells[-1]
    nx, nt = spec.counts
    gx = spatial_gradient(phi)
    lam, lw = np.polynomial.legendre.leggauss(n_gauss)
    lam, lw = 0.5 * (lam + 1), 0.5 * lw
    cos = np.cos((np.arange(n_theta) + 0.5) * 2 * np.pi / n_theta)
    dtheta = 2 * np.pi / n_theta
    acc = np.zeros(spec.counts)
    per_radius = {}
    q = 1
    while q <= top:
        px, pt = 4 * q + 1, 3 * q * q
        side = (2 * q, 2 * q * q)
        pads = [(px, px), (pt, 0)]
        if phi.periodic:
            S = box_sums(np.pad(gx, pads, mode="wrap"), side) / float(4 * q ** 3)
        else:
            S = box_sums(np.pad(gx, pads), side) / float(4 * q ** 3)
            full = box_sums(np.pad(np.ones_like(gx), pads), side) > 4 * q ** 3 - 0.5
            S = np.where(full, S, np.nan)
        # E[p, k]: mean over the window whose last cell is padded (p, k + pt)
        E = np.full((nx + 2 * px, nt), np.nan)
        E[2 * q - 1:] = S[:, pt - 2 * q * q + 1:pt - 2 * q * q + 1 + nt]
        Eb = np.full_like(E, np.nan)
        Eb[2 * q - 1:] = S[:, pt - 3 * q * q + 1:pt - 3 * q * q + 1 + nt]
        G1 = E[q:] - E[:-q]          # row p - q holds E[p] - E[p - q]
        Gn = E - Eb
        rho = q * spec.h
        integrand = np.zeros(spec.counts)
        for c in cos:
            A1 = np.zeros(spec.counts)
            An = np.zeros(spec.counts)
            for lm, wl in zip(lam, lw):
                s = lm * q * c
                A1 += wl * _at(G1, px + s - q, nx)
                An += wl * _at(Gn, px + s, nx)
            integrand += dtheta * (rho * c) ** 2 * (A1 * A1 + An * An)
        acc = acc + math.log(2.0) * integrand / rho ** 2
        if q in cells:
            per_radius[q] = acc.copy()
        q *= 2
    return _finish(per_radius, spec, "avg_gradient", (4 * top + 1, 3 * top * top))


def _cumulative_integral(v: np.ndarray) -> np.ndarray:
    c = np.cumsum(np.cumsum(v, axis=0), axis=1)
    return np.pad(c, [(1, 0), (1, 0)])


def _bilinear(S: np.ndarray, xi: np.ndarray, ti: np.ndarray) -> np.ndarray:
    x0 = np.floor(xi).astype(int)
    t0 = np.floor(ti).astype(int)
    fx = xi - x0
    ft = ti - t0
    x1 = np.minimum(x0 + 1, S.shape[0] - 1)
    t1 = np.minimum(t0 + 1, S.shape[1] - 1)
    return ((1 - fx) * (1 - ft) * S[x0, t0] + fx * (1 - ft) * S[x1, t0]
            + (1 - fx) * ft * S[x0, t1] + fx * ft * S[x1, t1])


def functional_avg_gradient_alt(phi: ScalarField, r_max: float | None = None) -> float:
    """Four-corner form: no gradient, boxes of radius ||(y,s)|| anchored at their upper corner."""
    _require_1d(phi, "functional_avg_gradient_alt")
    spec = phi.spec
    n = 2
    cells = dyadic_cells(spec, r_max)
    top = cells[-1]
    nx, nt = spec.counts
    px = 4 * top + 2
    pt = 3 * top * top + 2
    if phi.periodic:
        P = np.pad(phi.values, [(px, px), (pt, 1)], mode="wrap")
        bad = None
    else:
        P = np.pad(phi.values, [(px, px), (pt, 1)])
        bad = np.pad(np.zeros(phi.values.shape), [(px, px), (pt, 1)], constant_values=1.0)
    S = _cumulative_integral(P)
    Sbad = None if bad is None else _cumulative_integral(bad)
    # upper-corner faces of the cells of the original grid, in padded face coordinates
    I, K = np.meshgrid(np.arange(nx) + px + 1.0, np.arange(nt) + pt + 1.0, indexing="ij")

    def mean_box(xc, tc, rho):
        w, d = 2 * rho, 2 * rho * rho
        tot = (_bilinear(S, xc, tc) - _bilinear(S, xc - w, tc) - _bilinear(S, xc, tc - d)
               + _bilinear(S, xc - w, tc - d))
        out = tot / (w * d)
        if Sbad is not None:
            nb = (_bilinear(Sbad, xc, tc) - _bilinear(Sbad, xc - w, tc)
                  - _bilinear(Sbad, xc, tc - d) + _bilinear(Sbad, xc - w, tc - d))
            out = np.where(nb > 1e-9, np.nan, out)
        return out

    contrib = {m: np.zeros(spec.counts) for m in cells}
    tiny = 1e-9 * max(float(np.abs(phi.values).max()), 1e-300)
    vol = spec.h * spec.dt
    for a in range(-top, top + 1):
        for b in range(0, top * top + 1):
            rho = abs(a) + math.sqrt(b)
            if rho == 0 or rho >= top:
                continue
            mult = 1.0 if b == 0 else 2.0
            M_y = mean_box(I + a, K, rho)
            M_0 = mean_box(I, K, rho)
            A1 = M_y - M_0 - mean_box(I + a - rho, K, rho) + mean_box(I - rho, K, rho)
            An = M_y - M_0 - mean_box(I + a, K - rho * rho, rho) + mean_box(I, K - rho * rho, rho)
            # cumulative-sum round-off would leave ~1e-13 residues on affine input
            A1 = np.where(np.abs(A1) < tiny, 0.0, A1)
            An = np.where(np.abs(An) < tiny, 0.0, An)
            val = mult * vol * (A1 * A1 + An * An) / (rho * spec.h) ** (n + 3)
            for m in cells:
                if rho < m:
                    contrib[m] += val
    return _finish(contrib, spec, "avg_gradient_alt", (4 * top, 3 * top * top))


# ---------------------------------------------------------------- report

def parabolic_derivative_bmo_sq(phi: ScalarField, r_max: float | None = None) -> float:
    src = phi if phi.periodic else taper_window(phi)
    Dphi = apply_multiplier(src, MultiplierSpec("D_parabolic"))
    vals = Dphi.values
    if not phi.periodic:
        scale = max(float(np.abs(phi.values).max()), 1.0)
        vals = np.where(np.abs(vals) < 64 * np.finfo(float).eps * scale, 0.0, vals)
    cells = dyadic_cells(phi.spec, r_max)
    rep = bmo_norm(Dphi.replace(vals), r_max=cells[-1] * phi.spec.h, r_min=cells[0] * phi.spec.h)
    return rep.norm ** 2


def equivalence_report(phi: ScalarField, r_max: float | None = None, with_alt: bool = False) -> LmReport:
    rep = LmReport()
    legs = {
        "D_bmo_sq": lambda: parabolic_derivative_bmo_sq(phi, r_max),
        "B_iv": lambda: functional_second_diff_spacetime(phi, r_max),
        "B_v_grad": lambda: functional_second_diff_space(phi, r_max),
        "B_v_time": lambda: functional_time_quotient(phi, r_max),
        "B_vi_grad": lambda: functional_avg_gradient(phi, r_max),
    }
    if with_alt:
        legs["B_vi_grad_alt"] = lambda: functional_avg_gradient_alt(phi, r_max)
    for name, fn in legs.items():
        try:
            setattr(rep, name, float(fn()))
        except Exception as exc:  # a failing leg is reported, not raised
            rep.failures[name] = f"{type(exc).__name__}: {exc}"
            setattr(rep, name, math.nan)
    return rep


def measure_eta(phi: ScalarField, r1: float | None = None) -> float:
    """Smallness parameter: max of sqrt(localized time quotient) and BMO of the gradient."""
    tq = functional_time_quotient(phi, r1)
    grads = [phi.replace(spatial_gradient(phi, k)) for k in range(phi.spec.n_minus_1)]
    g = max(bmo_norm(gk, r_max=r1).norm for gk in grads)
    return max(math.sqrt(tq), g)
