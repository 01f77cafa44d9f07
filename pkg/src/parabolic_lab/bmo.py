"""Parabolic BMO functionals over dyadic and sliding cube families."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from .grid import (GridSpec, ParabolicCube, ScalarField, OutOfDomainError, block_view,
                   cube_from_index, cube_index_box, cube_radii, iter_block_tilings,
                   parabolic_dist, ParabolicPoint)


class DegenerateDomainError(ValueError):
    pass


@dataclass
class BmoReport:
    norm: float
    argmax_cube: ParabolicCube | None
    scale_profile: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "norm": self.norm,
            "argmax_cube": None if self.argmax_cube is None else self.argmax_cube.to_dict(),
            "profile": [[r, v] for r, v in sorted(self.scale_profile.items())],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def side_cells(spec: GridSpec, m: int) -> tuple:
    return (2 * m,) * spec.n_minus_1 + (2 * m * m,)


def _nd(spec):
    return spec.n_minus_1 + 1


def subfield(f: ScalarField, Q: ParabolicCube) -> ScalarField:
    sl = cube_index_box(f.spec, Q)
    origin = tuple(o + s.start * st for o, s, st in zip(f.spec.origin, sl, f.spec.steps()))
    counts = tuple(s.stop - s.start for s in sl)
    return ScalarField(GridSpec(f.spec.n_minus_1, f.spec.h, origin, counts), f.values[sl], False)


def level_statistics(values: np.ndarray, spec: GridSpec, mode: str, m: int, stat: str = "osc"):
    """Yield (offset, counts, array) where array holds the per-cube statistic.

    ``stat`` is ``"osc"`` for the mean oscillation or ``"mean"`` for averages.
    """
    side = side_cells(spec, m)
    nd = _nd(spec)
    axes = tuple(range(nd, 2 * nd))
    for off, k in iter_block_tilings(spec, mode, m):
        blk = block_view(values, off, k, side)
        mean = blk.mean(axis=axes, keepdims=True)
        if stat == "mean":
            yield off, k, mean.reshape(k)
        else:
            yield off, k, np.abs(blk - mean).mean(axis=axes)


def _scan(f: ScalarField, mode: str, r_min, r_max) -> BmoReport:
    spec = f.spec
    r_max = spec.box_radius() if r_max is None else r_max
    r_min = spec.h if r_min is None else r_min
    radii = cube_radii(spec, mode, r_min, r_max)
    if not radii:
        raise DegenerateDomainError("no cube of the requested size fits in the box")
    best, best_cube, profile = -1.0, None, {}
    for m in radii:
        lvl = -1.0
        for off, k, osc in level_statistics(f.values, spec, mode, m):
            i = int(np.argmax(osc))
            v = float(osc.flat[i])
            if v > lvl:
                lvl = v
            if v > best:
                side = side_cells(spec, m)
                idx = np.unravel_index(i, k)
                lower = [o + j * s for o, j, s in zip(off, idx, side)]
                best, best_cube = v, cube_from_index(spec, lower, m)
        profile[m * spec.h] = lvl
    return BmoReport(best, best_cube, profile)


def bmo_norm(f: ScalarField, restrict: ParabolicCube | None = None, r_max: float | None = None,
             r_min: float | None = None) -> BmoReport:
    """Sup of the mean oscillation over sliding cubes (dyadic plus half-step shifts)."""
    g = subfield(f, restrict) if restrict is not None else f
    return _scan(g, "sliding", r_min, r_max)


def dyadic_bmo_norm(f: ScalarField, r_min: float | None = None) -> BmoReport:
    return _scan(f, "dyadic", r_min, None)


def adjacent_average_gap(f: ScalarField, r_min: float | None = None) -> float:
    """Largest difference of averages over face-adjacent dyadic cubes of equal size."""
    spec = f.spec
    radii = cube_radii(spec, "dyadic", spec.h if r_min is None else r_min, spec.box_radius())
    best = 0.0
    for m in radii:
        for _, _, means in level_statistics(f.values, spec, "dyadic", m, stat="mean"):
            for ax in range(means.ndim):
                if means.shape[ax] > 1:
                    best = max(best, float(np.abs(np.diff(means, axis=ax)).max()))
    return best


# ---------------------------------------------------------------- box sums

def box_sums(v: np.ndarray, size: tuple) -> np.ndarray:
    """Sums over all windows of the given size; entry j covers [j, j + size)."""
    c = v
    for ax in range(v.ndim):
        pad = [(0, 0)] * v.ndim
        pad[ax] = (1, 0)
        c = np.pad(np.cumsum(c, axis=ax), pad)
    out = 0
    nd = v.ndim
    for corner in np.ndindex(*(2,) * nd):
        sl = []
        for ax, bit in enumerate(corner):
            n = c.shape[ax] - size[ax]
            sl.append(slice(size[ax], size[ax] + n) if bit else slice(0, n))
        sign = (-1) ** (nd - sum(corner))
        out = out + sign * c[tuple(sl)]
    return out


def corner_means(v: np.ndarray, side: tuple, before: tuple, periodic: bool) -> np.ndarray:
    """Means of windows of the given size after padding ``before`` cells in front.

    Windows touching padding are NaN unless the field is periodic.
    """
    pad = [(b, 0) for b in before]
    n = float(np.prod(side))
    if periodic:
        return box_sums(np.pad(v, pad, mode="wrap"), side) / n
    sums = box_sums(np.pad(v, pad), side)
    count = box_sums(np.pad(np.ones_like(v), pad), side)
    return np.where(count > n - 0.5, sums / n, np.nan)


def strichartz_functional(f: ScalarField, r_max: float | None = None) -> float:
    """Sup over cubes of the averaged squared differences of corner-anchored cube means.

    The rho integral with measure drho/rho is a sum over dyadic levels rho = 2^j h
    with weight log 2.  The shift in the time direction is rho^2.
    """
    spec = f.spec
    nd = _nd(spec)
    top = spec.max_cells() if r_max is None else int(round(r_max / spec.h))
    levels = []
    m = 1
    while m <= top:
        levels.append(m)
        m *= 2
    acc = np.zeros(spec.counts)
    G = {}
    for m in levels:
        side = side_cells(spec, m)
        shift = (m,) * spec.n_minus_1 + (m * m,)
        before = tuple(s - 1 + sh for s, sh in zip(side, shift))
        means = corner_means(f.values, side, before, f.periodic)
        # means[j] is the mean of the window ending at padded index j + side - 1
        base = tuple(slice(sh, sh + n) for sh, n in zip(shift, spec.counts))
        g = np.zeros(spec.counts)
        for ax in range(nd):
            moved = list(base)
            moved[ax] = slice(0, spec.counts[ax])
            g = g + (means[base] - means[tuple(moved)]) ** 2
        acc = acc + math.log(2.0) * g
        G[m] = acc.copy()
    return sup_cube_means(G, spec)


def sup_cube_means(per_radius: dict, spec: GridSpec) -> float:
    """max over sliding cubes of radius m of the mean of per_radius[m].

    Cubes touching a NaN entry are skipped; NaN is returned if none is left.
    """
    best = math.nan
    for m, arr in per_radius.items():
        vals = np.where(np.isnan(arr), np.inf, arr)
        for _, _, avg in level_statistics(vals, spec, "sliding", m, stat="mean"):
            finite = avg[np.isfinite(avg)]
            if finite.size:
                v = float(finite.max())
                best = v if math.isnan(best) else max(best, v)
    return best


# ---------------------------------------------------------------- equicontinuity distance

def modulus_ratio(g: np.ndarray, spec: GridSpec, delta) -> float:
    """max |g(z) - g(w)| / delta(dist(z, w)) over neighbour and dyadic-lag pairs."""
    nd = g.ndim
    best = 0.0
    lags = set()
    for k in range(nd):
        L = 1
        while L < g.shape[k]:
            lag = [0] * nd
            lag[k] = L
            lags.add(tuple(lag))
            L *= 2
    for lag in lags:
        sl_a = tuple(slice(0, n - L) for n, L in zip(g.shape, lag))
        sl_b = tuple(slice(L, n) for n, L in zip(g.shape, lag))
        diff = float(np.abs(g[sl_a] - g[sl_b]).max())
        dist = parabolic_dist(ParabolicPoint(tuple(l * spec.h for l in lag[:-1]), lag[-1] * spec.dt),
                              ParabolicPoint((0.0,) * (nd - 1), 0.0))
        dv = float(delta(dist))
        if dv <= 0:
            if diff > 0:
                return math.inf
            continue
        best = max(best, diff / dv)
    return best


def mollifier_candidates(f: ScalarField, trials: int) -> list:
    """Parabolic box averages of f at scales 0, h, 2h, 4h, ..."""
    out = [(0.0, np.array(f.values))]
    mode = "wrap" if f.periodic else "nearest"
    for j in range(trials - 1):
        m = 2 ** j
        size = (2 * m + 1,) * f.spec.n_minus_1 + (2 * m * m + 1,)
        out.append((m * f.spec.h, ndimage.uniform_filter(f.values, size=size, mode=mode)))
    return out


def dist_to_equicontinuous(f: ScalarField, delta, trials: int = 6) -> tuple:
    """Upper bound for the BMO distance from f to the class with modulus delta.

    Returns (value, used_fallback, best_scale).
    """
    base = bmo_norm(f).norm
    best, scale, fallback = base, None, True
    for lam, g in mollifier_candidates(f, trials):
        q = modulus_ratio(g, f.spec, delta)
        if not math.isfinite(q):
            continue
        if q > 1:
            mu = g.mean()
            g = mu + (g - mu) / q
        v = bmo_norm(f.replace(f.values - g)).norm
        if v < best:
            best, scale, fallback = v, lam, False
    return best, fallback, scale


# ---------------------------------------------------------------- appendix inequalities

def jones_gap_check(f: ScalarField, Q0: ParabolicCube, Q1: ParabolicCube) -> tuple:
    """Returns (ratio, trivial) for |f_Q0 - f_Q1| / (log(2 + l1/l0) ||f||_{*,Q1})."""
    if not Q1.contains_cube(Q0):
        raise OutOfDomainError("Q0 must lie inside Q1")
    local = bmo_norm(f, restrict=Q1).norm
    a0 = float(f.values[cube_index_box(f.spec, Q0)].mean())
    a1 = float(f.values[cube_index_box(f.spec, Q1)].mean())
    if local == 0:
        return 0.0, True
    return abs(a0 - a1) / (math.log(2 + Q1.side() / Q0.side()) * local), False


def stein_product_check(g: ScalarField, h: ScalarField, Q: ParabolicCube) -> float:
    """LHS - RHS of the product oscillation inequality on Q (nonpositive when it holds)."""
    sl = cube_index_box(g.spec, Q)
    gv, hv = g.values[sl], h.values[sl]
    gh = gv * hv
    lhs = np.abs(gh - gh.mean()).mean()
    hq = hv.mean()
    rhs = 2 * np.abs(gv * (hv - hq)).mean() + abs(hq) * np.abs(gv - gv.mean()).mean()
    return float(lhs - rhs)
