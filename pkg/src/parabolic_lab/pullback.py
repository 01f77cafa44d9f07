"""Flattening map for a graph domain and the coefficients of the pulled-back equation.

The domain is {y0 > phi(y, t)}.  With psi(x0, x, t) = P_{gamma x0} phi(x, t) the map
F(x0, x, t) = (x0 + psi, x, t) sends the strip x0 > 0 onto it.  If u solves

    u_t = div(A grad u) + B . grad u

then v = u o F solves v_t = div(Av grad v) + Bv . grad v with J = dF/dX (spatial),
J0 = 1 + psi_{x0}:

    Av = J^-1 A J^-T
    Bv = J^-1 B + psi_t J^-1 e0 + Av^T grad log J0

(the last term comes from moving the factor J0 of the weak form inside the divergence).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .grid import GridSpec, ScalarField, lip_constant_estimate
from .bmo import sup_cube_means

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(64)


class MarginError(ValueError):
    pass


class NonInvertibleMapError(ValueError):
    pass


class EllipticityError(ValueError):
    pass


class HypothesisError(ValueError):
    pass


def _bump(u):
    u = np.asarray(u, dtype=float)
    out = np.zeros_like(u)
    inside = np.abs(u) < 1
    out[inside] = np.exp(-1.0 / (1.0 - u[inside] ** 2))
    return out


def _bump_integral(s) -> np.ndarray:
    s = np.clip(np.asarray(s, dtype=float), -1.0, 1.0)
    half = 0.5 * (s + 1.0)
    u = -1.0 + half[..., None] * (_GL_NODES + 1.0)
    return half * (_bump(u) * _GL_WEIGHTS).sum(-1)


_BUMP_MASS = float(_bump_integral(1.0))


def bump_cdf(s) -> np.ndarray:
    """Distribution function of the normalised one-dimensional bump on [-1, 1]."""
    out = _bump_integral(s) / _BUMP_MASS
    s = np.asarray(s, dtype=float)
    return np.where(s >= 1, 1.0, np.where(s <= -1, 0.0, out))


@dataclass(frozen=True)
class MollifierSpec:
    gamma: float

    def cell_weights(self, lam: float, step: float, scale_power: int) -> np.ndarray:
        """Cell integrals of the rescaled bump, for the axis with footprint lam**scale_power."""
        if lam <= 0:
            return np.ones(1)
        radius = lam ** scale_power
        reach = int(math.ceil(radius / step - 0.5))
        a = np.arange(-reach, reach + 1)
        w = bump_cdf((a + 0.5) * step / radius) - bump_cdf((a - 0.5) * step / radius)
        return 0.5 * (w + w[::-1])

    def reach(self, lam: float, spec: GridSpec) -> tuple:
        if lam <= 0:
            return (0, 0)
        return (int(math.ceil(lam / spec.h - 0.5)), int(math.ceil(lam * lam / spec.dt - 0.5)))


def mollifier_kernel(spec: GridSpec, lam: float = 1.0) -> ScalarField:
    """P_lam sampled as cell averages on a grid of spacing spec.h centred at the origin."""
    ms = MollifierSpec(1.0)
    wx = ms.cell_weights(lam, spec.h, 1)
    wt = ms.cell_weights(lam, spec.dt, 2)
    vals = np.outer(wx, wt) / (spec.h * spec.dt)
    nx, nt = vals.shape
    g = GridSpec(1, spec.h, (-nx * spec.h / 2, -nt * spec.dt / 2), (max(nx, 4), max(nt, 4)))
    if vals.shape != g.counts:
        pad = [((c - s) // 2, c - s - (c - s) // 2) for c, s in zip(g.counts, vals.shape)]
        vals = np.pad(vals, pad)
        g = GridSpec(1, spec.h, (-g.counts[0] * spec.h / 2, -g.counts[1] * spec.dt / 2), g.counts)
    return ScalarField(g, vals)


def vertical_mollify(phi: ScalarField, gamma: float, x0_levels, margin: tuple = (0, 0)) -> np.ndarray:
    """Stack of P_{gamma x0} phi, shape (levels, ...).

    Periodic fields wrap.  Otherwise the output drops ``margin`` cells on each side
    of each axis, and a footprint wider than the margin is refused.
    """
    if phi.spec.n_minus_1 != 1:
        raise NotImplementedError("the flattening map is implemented for one spatial dimension")
    ms = MollifierSpec(gamma)
    spec = phi.spec
    v = phi.values
    mx, mt = (0, 0) if phi.periodic else margin
    out = []
    for x0 in x0_levels:
        lam = gamma * float(x0)
        rx, rt = ms.reach(lam, spec)
        if not phi.periodic and (rx > mx or rt > mt):
            raise MarginError(f"level x0={x0} needs a margin of ({rx}, {rt}) cells")
        wx = ms.cell_weights(lam, spec.h, 1)
        wt = ms.cell_weights(lam, spec.dt, 2)
        mode = "wrap" if phi.periodic else "nearest"
        s = ndimage.correlate1d(v, wx, axis=0, mode=mode)
        s = ndimage.correlate1d(s, wt, axis=1, mode=mode)
        out.append(s[mx:spec.counts[0] - mx, mt:spec.counts[1] - mt])
    return np.stack(out)


def _diff(a: np.ndarray, step: float, axis: int, periodic: bool) -> np.ndarray:
    if periodic:
        return (np.roll(a, -1, axis) - np.roll(a, 1, axis)) / (2 * step)
    return np.gradient(a, step, axis=axis, edge_order=2)


@dataclass
class DknsMap:
    x0: np.ndarray            # level heights
    psi: np.ndarray           # (levels, nx, nt)
    psi_x0: np.ndarray
    psi_x: np.ndarray
    psi_t: np.ndarray
    spec: GridSpec            # boundary grid of the (x, t) samples
    gamma: float
    periodic: bool

    @property
    def certificate(self) -> float:
        return float((1.0 + self.psi_x0).min())

    def image_height(self) -> np.ndarray:
        return self.x0[:, None, None] + self.psi


def default_gamma(lip: float) -> float:
    return 1.0 / (8.0 * (1.0 + lip))


def dkns_map(phi: ScalarField, x0_levels, gamma: float | None = None, margin: tuple = (0, 0),
             lip: float | None = None) -> DknsMap:
    x0 = np.asarray(x0_levels, dtype=float)
    if gamma is None:
        gamma = default_gamma(lip_constant_estimate(phi) if lip is None else lip)
    psi = vertical_mollify(phi, gamma, x0, margin)
    mx, mt = (0, 0) if phi.periodic else margin
    spec = phi.spec
    sub = GridSpec(1, spec.h, (spec.origin[0] + mx * spec.h, spec.origin[1] + mt * spec.dt),
                   psi.shape[1:])
    p0 = np.gradient(psi, x0, axis=0, edge_order=2) if len(x0) > 2 else np.gradient(psi, x0, axis=0)
    px = _diff(psi, spec.h, 1, phi.periodic)
    pt = _diff(psi, spec.dt, 2, phi.periodic)
    mp = DknsMap(x0, psi, p0, px, pt, sub, gamma, phi.periodic)
    if mp.certificate <= 0:
        raise NonInvertibleMapError(f"map folds (min d/dx0 = {mp.certificate:.3g}); lower gamma")
    return mp


@dataclass
class PulledBackCoefficients:
    A_v: np.ndarray           # (..., 2, 2)
    B_v: np.ndarray           # (..., 2)
    lambda_v: float
    Lambda_v: float


def _as_field(val, shape, tail):
    arr = np.asarray(val, dtype=float)
    return np.broadcast_to(arr, shape + tail)


def pullback_coefficients(mp: DknsMap, A, B=None) -> PulledBackCoefficients:
    """A and B are constants or callables of (y0, y, t) on the domain side."""
    shape = mp.psi.shape
    Y0 = mp.image_height()
    Xs = mp.spec.axis(0)[None, :, None] + 0.0 * Y0
    Ts = mp.spec.axis(1)[None, None, :] + 0.0 * Y0
    Aval = _as_field(A(Y0, Xs, Ts) if callable(A) else A, shape, (2, 2))
    if B is None:
        Bval = np.zeros(shape + (2,))
    else:
        Bval = _as_field(B(Y0, Xs, Ts) if callable(B) else B, shape, (2,))
    J0 = 1.0 + mp.psi_x0
    Jinv = np.zeros(shape + (2, 2))
    Jinv[..., 0, 0] = 1.0 / J0
    Jinv[..., 0, 1] = -mp.psi_x / J0
    Jinv[..., 1, 1] = 1.0
    Av = np.einsum("...ij,...jk,...lk->...il", Jinv, Aval, Jinv)
    lnJ = np.log(J0)
    grad_ln = np.stack([np.gradient(lnJ, mp.x0, axis=0, edge_order=2) if len(mp.x0) > 2
                        else np.gradient(lnJ, mp.x0, axis=0),
                        _diff(lnJ, mp.spec.h, 1, mp.periodic)], axis=-1)
    Bv = (np.einsum("...ij,...j->...i", Jinv, Bval)
          + mp.psi_t[..., None] * Jinv[..., :, 0]
          + np.einsum("...ji,...j->...i", Av, grad_ln))
    sym = 0.5 * (Av + np.swapaxes(Av, -1, -2))
    eig = np.linalg.eigvalsh(sym)
    lam, Lam = float(eig[..., 0].min()), float(eig[..., -1].max())
    if lam <= 0:
        raise EllipticityError(f"pulled-back matrix lost ellipticity (min eigenvalue {lam:.3g})")
    return PulledBackCoefficients(Av, Bv, lam, Lam)


# ---------------------------------------------------------------- weak-residual certificate

@dataclass
class ResidualReport:
    h: float
    max_relative: float
    per_test: list


def weak_residual(mp: DknsMap, coeffs: PulledBackCoefficients, v: np.ndarray, tests: list) -> ResidualReport:
    """Relative weak residual of v_t - div(Av grad v) - Bv . grad v against smooth test functions.

    ``tests`` holds callables (x0, x, t) -> (eta, eta_x0, eta_x) that vanish near the
    edges of the sampled strip.
    """
    h0 = mp.x0[1] - mp.x0[0]
    vt = _diff(v, mp.spec.dt, 2, False)
    g0 = np.gradient(v, mp.x0, axis=0, edge_order=2)
    gx = _diff(v, mp.spec.h, 1, mp.periodic)
    grad = np.stack([g0, gx], axis=-1)
    flux = np.einsum("...ij,...j->...i", coeffs.A_v, grad)
    drift = np.einsum("...i,...i->...", coeffs.B_v, grad)
    X0 = mp.x0[:, None, None]
    X = mp.spec.axis(0)[None, :, None]
    T = mp.spec.axis(1)[None, None, :]
    vol = h0 * mp.spec.h * mp.spec.dt
    w0 = np.ones(len(mp.x0))
    w0[[0, -1]] = 0.5
    w0 = w0[:, None, None]
    out = []
    for test in tests:
        eta, e0, ex = test(X0, X, T)
        terms = [vt * eta, flux[..., 0] * e0 + flux[..., 1] * ex, -drift * eta]
        res = sum((w0 * t).sum() for t in terms) * vol
        scale = sum((w0 * np.abs(t)).sum() for t in terms) * vol
        out.append(float(abs(res) / scale) if scale > 0 else 0.0)
    return ResidualReport(mp.spec.h, max(out), out)


def bump_tests(n: int, seed: int, x0_range: tuple, x_range: tuple, t_range: tuple) -> list:
    """Deterministic smooth compactly supported test functions with analytic gradients."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        c0 = rng.uniform(*_shrink(x0_range, 0.35))
        cx = rng.uniform(*_shrink(x_range, 0.35))
        ct = rng.uniform(*_shrink(t_range, 0.35))
        s0 = 0.3 * (x0_range[1] - x0_range[0]) * rng.uniform(0.5, 1.0)
        sx = 0.3 * (x_range[1] - x_range[0]) * rng.uniform(0.5, 1.0)
        st = 0.3 * (t_range[1] - t_range[0]) * rng.uniform(0.5, 1.0)
        out.append(_make_bump(c0, cx, ct, s0, sx, st))
    return out


def _shrink(r, frac):
    span = r[1] - r[0]
    return (r[0] + frac * span, r[1] - frac * span)


def _smooth_bump(z):
    """(1 - z^2)^4 on |z| < 1 and its derivative."""
    inside = np.abs(z) < 1
    q = np.where(inside, 1 - z * z, 0.0)
    return q ** 4, np.where(inside, -8 * z * q ** 3, 0.0)


def _make_bump(c0, cx, ct, s0, sx, st):
    def f(X0, X, T):
        b0, d0 = _smooth_bump((X0 - c0) / s0)
        bx, dx = _smooth_bump((X - cx) / sx)
        bt, _ = _smooth_bump((T - ct) / st)
        return b0 * bx * bt, d0 / s0 * bx * bt, b0 * dx / sx * bt
    return f


# ---------------------------------------------------------------- mollifier derivative bounds

def _check_hypothesis(sigma, alpha, theta):
    if sigma + theta < 1 and alpha < 2:
        raise HypothesisError("needs sigma + theta >= 1 or at least two spatial derivatives")


def mollified_derivative(phi: ScalarField, gamma: float, sigma: int, alpha: int, theta: int,
                         levels: np.ndarray) -> np.ndarray:
    """d^sigma/dx0 d^alpha/dx d^theta/dt of P_{gamma x0} phi on the given levels (periodic phi)."""
    if not phi.periodic:
        raise ValueError("derivative bounds are computed on periodic surfaces")
    psi = vertical_mollify(phi, gamma, levels)
    for _ in range(sigma):
        psi = np.gradient(psi, levels, axis=0, edge_order=2)
    for _ in range(alpha):
        psi = _diff(psi, phi.spec.h, 1, True)
    for _ in range(theta):
        psi = _diff(psi, phi.spec.dt, 2, True)
    return psi


def _levels(spec: GridSpec, depth: float) -> np.ndarray:
    n = max(3, int(round(depth / spec.h)))
    return (np.arange(n) + 0.5) * spec.h


def lemmaA_carleson_norm(phi: ScalarField, sigma: int, alpha: int, theta: int, d: float,
                         gamma: float | None = None, lip: float | None = None) -> float:
    """sup over boundary cubes Q_r, r <= d/4, of the weighted derivative mass over (0, r) x Q_r per |Q_r|."""
    _check_hypothesis(sigma, alpha, theta)
    spec = phi.spec
    if gamma is None:
        gamma = default_gamma(lip_constant_estimate(phi) if lip is None else lip)
    top = min(int(math.floor(d / 4 / spec.h + 1e-9)), spec.max_cells())
    if top < 1:
        raise ValueError("d/4 is below one cell")
    levels = _levels(spec, top * spec.h)
    l = sigma + alpha + theta
    D = mollified_derivative(phi, gamma, sigma, alpha, theta, levels)
    dens = D * D * levels[:, None, None] ** (2 * l + 2 * theta - 3)
    cum = np.cumsum(dens, axis=0) * spec.h
    per_radius = {}
    m = top
    while m >= 1:
        per_radius[m] = cum[m - 1]
        if m % 2:
            break
        m //= 2
    return float(sup_cube_means(per_radius, spec))


def lemmaA_pointwise_bound(phi: ScalarField, sigma: int, alpha: int, theta: int, d: float, eta: float,
                           gamma: float | None = None, lip: float | None = None) -> float:
    """max over x0 <= d/4 of |derivative| / (eta (1 + lip) x0^(1 - l - theta))."""
    l = sigma + alpha + theta
    if l < 1:
        raise HypothesisError("needs at least one derivative")
    spec = phi.spec
    lip = lip_constant_estimate(phi) if lip is None else lip
    if gamma is None:
        gamma = default_gamma(lip)
    levels = _levels(spec, d / 4)
    D = mollified_derivative(phi, gamma, sigma, alpha, theta, levels)
    if eta <= 0:
        return 0.0 if np.abs(D).max() == 0 else math.inf
    bound = eta * (1 + lip) * levels ** (1.0 - l - theta)
    return float((np.abs(D).max(axis=(1, 2)) / bound).max())
