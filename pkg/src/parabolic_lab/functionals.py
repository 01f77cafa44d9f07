"""Cone functionals on the strip, Carleson norms, Whitney covers and boundary L^p norms.

Strip fields are node arrays u[i, j, k] at height x0 = i*h, lateral cell j and time
level k (the layout produced by ``solver.solve_dirichlet``).  With dt = h^2 the cone
|y - x| + |s - t|^(1/2) < a*y0 becomes |dj| + |dk|^(1/2) < a*i in index units, so
every cone functional is a per-level window reduction handled by ``kernels.cone_reduce``.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from . import kernels
from .grid import GridSpec, ScalarField
from .lewis_murray import spatial_gradient
from .solver import SolutionField

N_STRIP = 2          # dimension n of the strip variables (x0, x)
DEFAULT_APERTURES = (0.5, 1.0, 2.0)
DEFAULT_P = (1.1, 1.25, 1.5, 2.0, 4.0, 8.0)
EPS_REL = 1e-3       # floor of |u| in |u|^(p-2) for p < 2, relative to max|u|


@dataclass(frozen=True)
class ConeSpec:
    aperture: float
    truncation: float | None = None

    def __post_init__(self):
        if not self.aperture > 0:
            raise ValueError("aperture must be positive")
        if self.truncation is not None and not self.truncation > 0:
            raise ValueError("truncation height must be positive")

    def radii(self, n_levels: int, h: float) -> np.ndarray:
        """Cone half-width in cells per level; zero on levels above the truncation."""
        i = np.arange(n_levels, dtype=float)
        R = self.aperture * i
        if self.truncation is not None:
            if self.truncation > (n_levels - 1) * h * (1 + 1e-12):
                raise ValueError("truncation height exceeds the strip")
            R[i * h > self.truncation * (1 + 1e-12)] = 0.0
        return R


def _strip(u: SolutionField) -> np.ndarray:
    if u.u.ndim != 3:
        raise ValueError("expected a single solution; use SolutionField.member for batches")
    return u.u


def _boundary(u: SolutionField, vals: np.ndarray, **meta) -> ScalarField:
    return ScalarField(u.config.boundary_spec(), vals, periodic=False, meta=meta)


def _reduce(W: np.ndarray, cone: ConeSpec, h: float, use_max: bool) -> tuple:
    R = cone.radii(W.shape[0], h)
    empty = not np.any(R > 0)
    out = kernels.cone_reduce(np.ascontiguousarray(W, dtype=float), np.ascontiguousarray(R), True, use_max)
    return out, empty


def nontangential_max(u: SolutionField, cone: ConeSpec) -> ScalarField:
    U = _strip(u)
    out, empty = _reduce(np.abs(U), cone, u.config.h, True)
    return _boundary(u, out, empty_cone=empty, aperture=cone.aperture)


def strip_gradient(u: SolutionField) -> tuple:
    """Centred differences: (u_x0, u_x, u_t); one-sided at the top, bottom and time ends."""
    U = _strip(u)
    h = u.config.h
    g0 = np.gradient(U, h, axis=0)
    gx = (np.roll(U, -1, 1) - np.roll(U, 1, 1)) / (2 * h)
    gt = np.gradient(U, u.config.dt, axis=2)
    return g0, gx, gt


def _power_weight(U: np.ndarray, p: float, eps: float | None) -> np.ndarray:
    """|u|^(p-2), with |u| floored at eps when p < 2 (eps defaults to EPS_REL max|u|)."""
    a = np.abs(U)
    if p >= 2:
        return a ** (p - 2)
    if eps is None:
        eps = EPS_REL * float(a.max()) if a.size else 0.0
    if eps <= 0:
        eps = np.finfo(float).tiny
    return np.maximum(a, eps) ** (p - 2)


def _cone_integral(u: SolutionField, density: np.ndarray, cone: ConeSpec, p: float) -> ScalarField:
    h = u.config.h
    x0 = np.arange(density.shape[0]) * h
    w = np.zeros_like(x0)
    w[1:] = 1.0
    dens = density * w[:, None, None] * (h * h * u.config.dt)
    out, empty = _reduce(dens, cone, h, False)
    return _boundary(u, np.maximum(out, 0.0) ** (1.0 / p), empty_cone=empty, aperture=cone.aperture, p=p)


def _check_p(p: float):
    if not 1 < p < math.inf:
        raise ValueError("p must lie in (1, inf)")


def square_density(u: SolutionField, p: float, eps: float | None = None) -> np.ndarray:
    """|grad u|^2 |u|^(p-2) on the strip nodes (no distance weight)."""
    g0, gx, _ = strip_gradient(u)
    return (g0 * g0 + gx * gx) * _power_weight(_strip(u), p, eps)


def area_density(u: SolutionField, p: float, eps: float | None = None) -> np.ndarray:
    _, _, gt = strip_gradient(u)
    return gt * gt * _power_weight(_strip(u), p, eps)


def _height_power(n_levels: int, h: float, power: float) -> np.ndarray:
    x0 = np.arange(n_levels) * h
    out = np.zeros(n_levels)
    out[1:] = x0[1:] ** power
    return out[:, None, None]


def p_square_function(u: SolutionField, cone: ConeSpec, p: float, eps: float | None = None) -> ScalarField:
    _check_p(p)
    dens = square_density(u, p, eps)
    return _cone_integral(u, dens * _height_power(dens.shape[0], u.config.h, -N_STRIP), cone, p)


def p_area_function(u: SolutionField, cone: ConeSpec, p: float, eps: float | None = None) -> ScalarField:
    _check_p(p)
    dens = area_density(u, p, eps)
    return _cone_integral(u, dens * _height_power(dens.shape[0], u.config.h, 2 - N_STRIP), cone, p)


def strip_integral(u: SolutionField, density: np.ndarray, height_power: float = 0.0) -> float:
    """Node sum of density * x0^power * h h dt over levels i >= 1."""
    h = u.config.h
    w = _height_power(density.shape[0], h, height_power)
    return float((density * w).sum() * h * h * u.config.dt)


def cone_volume_factor(a: float) -> float:
    """Boundary measure of {(x, t): |x - y| + |t - s|^(1/2) < a y0} divided by y0^3."""
    return 4.0 * a ** 3 / 3.0


# ---------------------------------------------------------------- Carleson norms

@dataclass
class CarlesonReport:
    norm: float
    argmax: dict
    profile: list = field(default_factory=list)     # (r, sup over positions) per admissible radius

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)


def _box_sums(col: np.ndarray, mx: int, mt: int) -> np.ndarray:
    """Sums of col over windows of mx lateral cells (periodic) and mt time levels."""
    nx, nt = col.shape
    ext = np.concatenate([col, col[:mx - 1]], axis=0) if mx > 1 else col
    c = np.zeros((ext.shape[0] + 1, nt + 1))
    c[1:, 1:] = np.cumsum(np.cumsum(ext, 0), 1)
    return c[mx:mx + nx, mt:] - c[:nx, mt:] - c[mx:mx + nx, :nt + 1 - mt] + c[:nx, :nt + 1 - mt]


def carleson_norm_measure(density: np.ndarray, h: float, d: float) -> CarlesonReport:
    """sup over boundary cubes Q_r with r = m h <= d of mu(T(Q_r)) / r^(n+1).

    ``density`` is a node array (n0+1, nx, nt).  The box (0, r) x Q_r integrates
    the nodes 0..m in x0 by the trapezoid rule and 2m cells by 2m^2 levels laterally.
    """
    density = np.asarray(density, dtype=float)
    if density.ndim != 3:
        raise ValueError("density must be a strip node array")
    if np.any(density < 0):
        raise ValueError("density must be nonnegative")
    n0 = density.shape[0] - 1
    nx, nt = density.shape[1:]
    dt = h * h
    m_max = min(int(math.floor(d / h + 1e-9)), n0, nx // 2, int(math.floor(math.sqrt(nt / 2))))
    if m_max < 1:
        raise ValueError("no admissible cube radius")
    cum = np.cumsum(density, axis=0)
    best, arg, profile = 0.0, {}, []
    for m in range(1, m_max + 1):
        col = (cum[m] - 0.5 * density[0] - 0.5 * density[m]) * h
        mu = _box_sums(col, 2 * m, 2 * m * m) * h * dt
        r = m * h
        ratio = mu / r ** (N_STRIP + 1)
        j, k = np.unravel_index(int(np.argmax(ratio)), ratio.shape)
        val = float(ratio[j, k])
        profile.append((r, val))
        if val > best:
            best, arg = val, {"r": r, "m": m, "x_cell": int(j), "t_level": int(k)}
    return CarlesonReport(best, arg, profile)


@dataclass
class CarlesonCheck:
    ratio: float
    lhs: float
    carleson: float
    ntmax_pp: float
    flagged: bool = False


def weighted_lp(u: SolutionField, density: np.ndarray, p: float) -> float:
    """int_U |u|^p dmu with dmu = density dX dt (trapezoid in x0)."""
    h = u.config.h
    U = np.abs(_strip(u)) ** p * density
    w = np.ones(U.shape[0])
    w[0] = w[-1] = 0.5
    return float((U * w[:, None, None]).sum() * h * h * u.config.dt)


def carleson_vs_ntmax_check(density: np.ndarray, u: SolutionField, cone: ConeSpec, p: float,
                            d: float | None = None) -> CarlesonCheck:
    d = u.config.H if d is None else d
    lhs = weighted_lp(u, density, p)
    rep = carleson_norm_measure(density, u.config.h, d)
    N = nontangential_max(u, cone)
    npp = boundary_lp_norm(N, p) ** p
    den = rep.norm * npp
    if den == 0:
        return CarlesonCheck(0.0 if lhs == 0 else math.inf, lhs, rep.norm, npp, flagged=True)
    return CarlesonCheck(lhs / den, lhs, rep.norm, npp)


# ---------------------------------------------------------------- Whitney covers

@dataclass(frozen=True)
class WhitneyCube:
    r: float
    x0: float          # bottom face
    x: float           # lateral lower edge
    t: float           # time lower edge

    def bounds(self, dilation: float = 1.0) -> tuple:
        """((lo, hi) per coordinate) of the cube dilated about its centre."""
        r = self.r
        c0, cx, ct = self.x0 + r, self.x + r, self.t + r * r
        dr = dilation * r
        return ((c0 - dr, c0 + dr), (cx - dr, cx + dr), (ct - dr * dr, ct + dr * dr))


@dataclass
class WhitneyReport:
    cubes: list
    ratio: int
    covered: bool
    contained: bool
    inside_strip: bool
    max_overlap: int
    samples: int

    def ok(self) -> bool:
        return self.covered and self.contained and self.inside_strip


def whitney_ratio(a: float) -> int:
    """Smallest power of two c >= 4 with a*c >= 4a + 2 + sqrt(2).

    A cube of radius r moves the parabolic distance by at most (2 + sqrt 2) r and the
    height by 2r, so this keeps every cube meeting Gamma_a inside Gamma_2a.
    """
    need = 4.0 + (2.0 + math.sqrt(2.0)) / a
    return max(4, 2 ** math.ceil(math.log2(need)))


def _cone_gap(cone_a: float, vx: float, vt: float, lo_x, hi_x, lo_t, hi_t, nearest: bool):
    if nearest:
        dx = np.maximum(0.0, np.maximum(lo_x - vx, vx - hi_x))
        dt = np.maximum(0.0, np.maximum(lo_t - vt, vt - hi_t))
    else:
        dx = np.maximum(np.abs(lo_x - vx), np.abs(hi_x - vx))
        dt = np.maximum(np.abs(lo_t - vt), np.abs(hi_t - vt))
    return dx + np.sqrt(dt)


def whitney_cover(cone: ConeSpec, vertex: tuple = (0.0, 0.0), y_min: float = 0.125,
                  strip_height: float | None = None, r_top: float | None = None) -> list:
    """Dyadic cubes meeting Gamma_a(vertex) within y_min <= y0 <= truncation.

    Level r = r_top 2^-k takes the cubes whose bottom face lies in [c r, 2c r), c from
    ``whitney_ratio``; cubes are aligned to multiples of 2r laterally and 2r^2 in time.
    """
    a = cone.aperture
    top = cone.truncation if cone.truncation is not None else strip_height
    if top is None:
        raise ValueError("need a truncation height or a strip height")
    c = whitney_ratio(a)
    if r_top is None:
        r_top = 2.0 ** math.ceil(math.log2(top / (2 * c)) + 1e-12)
    vx, vt = vertex
    cubes = []
    k = 0
    while True:
        r = r_top * 2.0 ** -k
        if 2 * c * r <= y_min:
            break
        k += 1
        if c * r >= top:
            continue
        for q in range(c // 2):
            b = c * r + 2 * q * r
            if b >= top or b + 2 * r <= y_min:
                continue
            reach = a * min(b + 2 * r, top)
            ix = np.arange(math.floor((vx - reach) / (2 * r)) - 1, math.ceil((vx + reach) / (2 * r)) + 1)
            it = np.arange(math.floor((vt - reach * reach) / (2 * r * r)) - 1,
                           math.ceil((vt + reach * reach) / (2 * r * r)) + 1)
            X, T = np.meshgrid(ix * 2 * r, it * 2 * r * r, indexing="ij")
            gap = _cone_gap(a, vx, vt, X, X + 2 * r, T, T + 2 * r * r, True)
            y_hi = min(b + 2 * r, top)
            sel = gap < a * y_hi
            for xl, tl in zip(X[sel], T[sel]):
                cubes.append(WhitneyCube(r, b, float(xl), float(tl)))
    return cubes


def _in_cone(a, vertex, pts):
    y0, x, t = pts
    return np.abs(x - vertex[0]) + np.sqrt(np.abs(t - vertex[1])) < a * y0


def verify_whitney(cubes: list, cone: ConeSpec, vertex: tuple, y_min: float, strip_height: float,
                   n_samples: int = 20000, seed: int = 0) -> WhitneyReport:
    a = cone.aperture
    top = cone.truncation if cone.truncation is not None else strip_height
    if not cubes:
        return WhitneyReport([], whitney_ratio(a), False, True, True, 0, 0)
    lo = np.array([[q.x0, q.x, q.t] for q in cubes])
    r = np.array([q.r for q in cubes])
    hi = lo + np.stack([2 * r, 2 * r, 2 * r * r], 1)

    # union inside the doubled cone: the worst point of a box is a corner at the bottom face
    gap = _cone_gap(a, vertex[0], vertex[1], lo[:, 1], hi[:, 1], lo[:, 2], hi[:, 2], False)
    contained = bool(np.all(gap < 2 * a * lo[:, 0]))

    c0 = lo[:, 0] + r
    inside = bool(np.all((c0 - 4 * r >= 0) & (c0 + 4 * r <= strip_height + 1e-12)))

    # coverage of the truncated cone by rejection sampling
    rng = np.random.default_rng(seed)
    y = rng.uniform(y_min, top, 4 * n_samples)
    x = vertex[0] + rng.uniform(-a * top, a * top, y.size)
    t = vertex[1] + rng.uniform(-(a * top) ** 2, (a * top) ** 2, y.size)
    keep = _in_cone(a, vertex, (y, x, t))
    P = np.stack([y[keep], x[keep], t[keep]], 1)[:n_samples]
    covered = True
    for chunk in np.array_split(P, max(1, len(P) // 256)):
        inside_any = np.all((chunk[:, None, :] >= lo[None]) & (chunk[:, None, :] < hi[None]), axis=2).any(1)
        if not inside_any.all():
            covered = False
            break
    return WhitneyReport(cubes, whitney_ratio(a), covered, contained, inside, overlap_count(cubes), len(P))


def overlap_count(cubes: list, dilation: float = 2.0) -> int:
    """Largest number of dilated cubes meeting any one dilated cube (itself included)."""
    if not cubes:
        return 0
    B = np.array([q.bounds(dilation) for q in cubes])          # (N, 3, 2)
    lo, hi = B[:, :, 0], B[:, :, 1]
    best = 0
    step = max(1, 4_000_000 // (3 * len(cubes)))
    for s in range(0, len(cubes), step):
        a_lo, a_hi = lo[s:s + step, None], hi[s:s + step, None]
        meet = np.all((a_lo < hi[None]) & (lo[None] < a_hi), axis=2)
        best = max(best, int(meet.sum(1).max()))
    return best


# ---------------------------------------------------------------- boundary norms

def boundary_lp_norm(g: ScalarField, p: float, phi: ScalarField | None = None) -> float:
    """(sum |g|^p dsigma)^(1/p) with dsigma = h dt, times sqrt(1 + phi_x^2) on a graph."""
    if not 1 <= p < math.inf:
        raise ValueError("p must lie in [1, inf)")
    spec: GridSpec = g.spec
    w = np.full(g.values.shape, spec.cell_volume())
    if phi is not None:
        if phi.values.shape != g.values.shape:
            raise ValueError("graph and data grids differ")
        gx = spatial_gradient(phi, 0)
        w = w * np.sqrt(1.0 + gx * gx)
    return float((np.abs(g.values) ** p * w).sum() ** (1.0 / p))


def boundary_sup(g: ScalarField) -> float:
    return float(np.abs(g.values).max())
