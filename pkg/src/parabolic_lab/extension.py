"""Global extension of a local graph: time reflection, then a cutoff blend to a plane.

The input surface is sampled on a box that contains the cube Q_r (radius r, centre c)
together with the spatial ball |x - c| <= 2R used by the cutoff.  The output lives
on a box of half-width 2R + r around c, is periodic in t with period 4 r^2 and is
stored over enough periods to hold a cube of radius R.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass

import numpy as np

from .bmo import bmo_norm
from .grid import GridSpec, ScalarField, lip_constant_estimate
from .lewis_murray import functional_time_quotient, measure_eta, spatial_gradient

EPS_REPORT = 0.1


class ExtensionConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ExtensionConfig:
    r: float
    eta: float
    center: tuple = (0.0, 0.0)
    k_max: int = 3

    @property
    def k(self) -> int:
        """Doubling count with R = 2^k r and R*eta/2 < r <= R*eta, capped at k_max."""
        if self.eta <= 0:
            return self.k_max
        return int(min(self.k_max, max(0, math.ceil(math.log2(1.0 / self.eta) - 1e-12))))

    @property
    def R(self) -> float:
        return self.r * 2 ** self.k

    def to_dict(self) -> dict:
        d = asdict(self)
        d.update(k=self.k, R=self.R)
        return d


def _cells(length: float, step: float, what: str) -> int:
    c = length / step
    if abs(c - round(c)) > 1e-9 * max(1.0, c):
        raise ExtensionConfigError(f"{what} = {length} is not a whole number of cells")
    return int(round(c))


def _locate(phi: ScalarField, cfg: ExtensionConfig) -> tuple:
    """Cell indices (ix0, it0) such that Q_r is [ix0, ix0 + 2m) x [it0, it0 + 2m^2)."""
    spec = phi.spec
    m = _cells(cfg.r, spec.h, "r")
    xc, tc = cfg.center
    ix0 = _cells(xc - cfg.r - spec.origin[0], spec.h, "cube x corner")
    it0 = _cells(tc - cfg.r ** 2 - spec.origin[1], spec.dt, "cube t corner")
    if ix0 < 0 or it0 < 0 or ix0 + 2 * m > spec.counts[0] or it0 + 2 * m * m > spec.counts[1]:
        raise ExtensionConfigError("Q_r does not lie inside the sampled box")
    return m, ix0, it0


def reflect_tile_time(phi: ScalarField, r: float, center: tuple = (0.0, 0.0), periods: int = 1) -> ScalarField:
    """Even reflection of the slab |t - t_c| < r^2 about t_c + r^2, repeated ``periods`` times."""
    if phi.spec.n_minus_1 != 1:
        raise NotImplementedError("extension is implemented for one spatial dimension")
    cfg = ExtensionConfig(r, 1.0, center)
    m, _, it0 = _locate(phi, cfg)
    slab = phi.values[:, it0:it0 + 2 * m * m]
    one = np.concatenate([slab, slab[:, ::-1]], axis=1)
    vals = np.tile(one, (1, periods))
    spec = phi.spec
    origin = (spec.origin[0], spec.origin[1] + it0 * spec.dt)
    return ScalarField(GridSpec(1, spec.h, origin, vals.shape), vals, periodic=False,
                       meta={"time_period_cells": 4 * m * m})


def smoothstep(s: np.ndarray) -> np.ndarray:
    s = np.clip(s, 0.0, 1.0)
    return s * s * s * (10.0 - 15.0 * s + 6.0 * s * s)


def build_cutoff(cfg: ExtensionConfig, x: np.ndarray) -> np.ndarray:
    """1 for |x - c| < r, 0 for |x - c| >= 2R, quintic smoothstep in between."""
    d = np.abs(x - cfg.center[0])
    out = smoothstep((2 * cfg.R - d) / (2 * cfg.R - cfg.r))
    out[d < cfg.r] = 1.0
    out[d >= 2 * cfg.R] = 0.0
    return out


def extend(phi: ScalarField, cfg: ExtensionConfig) -> ScalarField:
    spec = phi.spec
    m, ix0, it0 = _locate(phi, cfg)
    M = m * 2 ** cfg.k
    half = 2 * M + m
    lo = ix0 + m - half
    if lo < 0 or ix0 + m + half > spec.counts[0]:
        raise ExtensionConfigError(
            f"surface must be sampled {half} cells either side of the cube centre")
    periods = max(1, math.ceil(2 * M * M / (4 * m * m)))
    tiled = reflect_tile_time(phi, cfg.r, cfg.center, periods)
    sub = tiled.values[lo:lo + 2 * half]
    x = spec.axis(0)[lo:lo + 2 * half]

    grad = spatial_gradient(ScalarField(tiled.spec, tiled.values, False))[lo:lo + 2 * half]
    inner = slice(half - m, half + m)
    slope = float(grad[inner, :2 * m * m].mean())
    level = float(sub[inner, :2 * m * m].mean())
    plane = level + slope * (x - cfg.center[0])

    rho = build_cutoff(cfg, x)[:, None]
    blend = plane[:, None] + rho * (sub - plane[:, None])
    vals = np.where(rho == 1.0, sub, blend)
    out_spec = GridSpec(1, spec.h, (spec.origin[0] + lo * spec.h, tiled.spec.origin[1]), vals.shape)
    meta = {"time_period_cells": 4 * m * m, "slope": slope, "level": level, "cube_lower": (half - m, 0)}
    return ScalarField(out_spec, vals, periodic=False, meta=meta)


@dataclass
class ExtensionReport:
    exact_on_cube: bool
    lip_phi: float
    lip_Phi: float
    lip_ok: bool
    grad_bmo: float
    grad_ratio: float
    time_quotient: float
    time_ratio: float
    eta: float
    k: int

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)


def verify_extension(phi: ScalarField, Phi: ScalarField, cfg: ExtensionConfig, lip_tol: float = 0.1,
                     tq_cap: float | None = None) -> ExtensionReport:
    m, ix0, it0 = _locate(phi, cfg)
    cx, ct = Phi.meta["cube_lower"]
    exact = bool(np.array_equal(Phi.values[cx:cx + 2 * m, ct:ct + 2 * m * m],
                                phi.values[ix0:ix0 + 2 * m, it0:it0 + 2 * m * m]))
    lip_phi = lip_constant_estimate(phi)
    lip_Phi = lip_constant_estimate(Phi)
    g = bmo_norm(Phi.replace(spatial_gradient(Phi))).norm
    tq = functional_time_quotient(Phi, tq_cap)
    e = cfg.eta
    g_den = e ** (1 - EPS_REPORT) + e * lip_phi
    return ExtensionReport(
        exact_on_cube=exact,
        lip_phi=lip_phi,
        lip_Phi=lip_Phi,
        lip_ok=lip_Phi <= (1 + lip_tol) * lip_phi + 1e-12,
        grad_bmo=g,
        grad_ratio=g / g_den if g_den > 0 else (0.0 if g == 0 else math.inf),
        time_quotient=tq,
        time_ratio=tq / e ** 2 if e > 0 else (0.0 if tq == 0 else math.inf),
        eta=e,
        k=cfg.k,
    )


def config_for(phi: ScalarField, r: float, center: tuple, r1: float | None = None,
               k_max: int = 3) -> ExtensionConfig:
    """Config with eta measured on the input surface."""
    return ExtensionConfig(r, measure_eta(phi, r1), center, k_max)
