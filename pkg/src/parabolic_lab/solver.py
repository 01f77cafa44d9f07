"""Implicit finite differences for u_t = div(A grad u) + B . grad u on a strip.

Unknowns sit on the nodes x0 = i*h (i = 0..n0), on the lateral cell centres of a
periodic boundary grid, and on the time levels t0 + k*dt.  Data are imposed at
i = 0, the top row i = n0 is held at zero and the initial level is zero apart
from its boundary trace.

Spatial operator: conservative three-point flux differences for the diagonal of A,
the mixed part expanded as (a01 + a10) u_{x0 x} plus first-order terms absorbed in
the drift, the mixed derivative on the monotone seven-point stencil chosen by sign,
and the drift centred where the cell Peclet number allows it and upwinded otherwise.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import sparse
from scipy.sparse import linalg as spla

from .grid import GridSpec, OutOfDomainError


class CoefficientError(ValueError):
    def __init__(self, msg, points=None):
        super().__init__(msg)
        self.points = points or []


@dataclass(frozen=True)
class SolverConfig:
    h: float
    n0: int                   # number of node intervals in x0; top height H = n0*h
    nx: int
    nt: int                   # number of time levels, including the initial one
    x_origin: float = -1.0
    t0: float = 0.0
    theta: float = 1.0
    tol: float = 1e-12

    def __post_init__(self):
        if not 0.5 <= self.theta <= 1.0:
            raise ValueError("theta must lie in [1/2, 1]")
        if self.tol <= 0:
            raise ValueError("tolerance must be positive")
        if self.n0 < 2 or self.nx < 4 or self.nt < 2:
            raise ValueError("strip too small")

    @property
    def dt(self) -> float:
        return self.h * self.h

    @property
    def H(self) -> float:
        return self.n0 * self.h

    def strip_spec(self) -> GridSpec:
        return GridSpec(2, self.h, (-0.5 * self.h, self.x_origin, self.t0 - 0.5 * self.dt),
                        (self.n0 + 1, self.nx, self.nt))

    def boundary_spec(self) -> GridSpec:
        return GridSpec(1, self.h, (self.x_origin, self.t0 - 0.5 * self.dt), (self.nx, self.nt))

    def axes(self):
        x0 = np.arange(self.n0 + 1) * self.h
        x = self.x_origin + (np.arange(self.nx) + 0.5) * self.h
        t = self.t0 + np.arange(self.nt) * self.dt
        return x0, x, t


@dataclass
class CoefficientCertificate:
    lam: float
    Lam: float
    drift_bound: float
    offending: list = field(default_factory=list)


def validate_coefficients(A: np.ndarray, B: np.ndarray | None, lam: float, Lam: float,
                          x0: np.ndarray | None = None, tol: float = 1e-12) -> CoefficientCertificate:
    """Eigenvalue bounds of the symmetric part of A and the bound on x0 |B|."""
    A = np.asarray(A, dtype=float)
    sym = 0.5 * (A + np.swapaxes(A, -1, -2))
    eig = np.linalg.eigvalsh(sym)
    lo, hi = eig[..., 0], eig[..., -1]
    bad = np.argwhere((lo < lam - tol) | (hi > Lam + tol))
    drift = 0.0
    if B is not None and x0 is not None:
        B = np.asarray(B, dtype=float)
        xs = np.asarray(x0, float).reshape((-1,) + (1,) * (B.ndim - 2))
        drift = float((xs * np.sqrt((B * B).sum(-1))).max())
    cert = CoefficientCertificate(float(lo.min()), float(hi.max()), drift,
                                  [tuple(int(i) for i in p) for p in bad[:50]])
    if len(bad):
        raise CoefficientError(f"{len(bad)} points outside [{lam}, {Lam}]", cert.offending)
    return cert


def _expand(val, shape, tail):
    """Broadcast a constant or an (n0+1, nx[, nt]) field to (n0+1, nx, nt) + tail."""
    arr = np.asarray(val, dtype=float)
    if arr.ndim == len(tail):
        return np.broadcast_to(arr, shape + tail)
    if arr.ndim == len(tail) + 2:
        arr = arr[:, :, None]
    return np.broadcast_to(arr, shape + tail)


def _operator(a: np.ndarray, b: np.ndarray, h: float) -> sparse.csr_matrix:
    """Matrix of the spatial operator on all nodes of one time level (rows of i=0, n0 unused)."""
    n0p, nx = a.shape[:2]
    idx = np.arange(n0p * nx).reshape(n0p, nx)
    a00, a01, a10, a11 = a[..., 0, 0], a[..., 0, 1], a[..., 1, 0], a[..., 1, 1]
    c = a01 + a10
    d1a10 = (np.roll(a10, -1, 1) - np.roll(a10, 1, 1)) / (2 * h)
    d0a01 = np.gradient(a01, h, axis=0, edge_order=2)
    b0 = b[..., 0] + d1a10
    b1 = b[..., 1] + d0a01

    rows, cols, vals = [], [], []
    I = np.arange(1, n0p - 1)[:, None] * np.ones(nx, int)[None, :]
    J = np.ones(n0p - 2, int)[:, None] * np.arange(nx)[None, :]
    cen = idx[I, J]

    def add(di, dj, v):
        rows.append(cen.ravel())
        cols.append(idx[I + di, (J + dj) % nx].ravel())
        vals.append(np.broadcast_to(v, cen.shape).ravel())

    ii = slice(1, n0p - 1)
    h2 = h * h
    up = 0.5 * (a00[1:-1] + a00[2:])
    dn = 0.5 * (a00[1:-1] + a00[:-2])
    rt = 0.5 * (a11[ii] + np.roll(a11, -1, 1)[ii])
    lt = 0.5 * (a11[ii] + np.roll(a11, 1, 1)[ii])
    cc = c[ii]
    cp, cm = np.maximum(cc, 0), np.maximum(-cc, 0)
    # mixed derivative: c>0 uses the (++, --) diagonal, c<0 the (+-, -+) diagonal
    diag0 = -(up + dn + rt + lt) / h2 + (cp + cm) / h2
    n_up = up / h2 - 0.5 * (cp + cm) / h2
    n_dn = dn / h2 - 0.5 * (cp + cm) / h2
    n_rt = rt / h2 - 0.5 * (cp + cm) / h2
    n_lt = lt / h2 - 0.5 * (cp + cm) / h2
    # drift: centred when the neighbour weights stay nonnegative, upwind otherwise
    def drift(bb, wp, wn):
        centred = (wp >= np.abs(bb) / (2 * h)) & (wn >= np.abs(bb) / (2 * h))
        dp = np.where(centred, bb / (2 * h), np.maximum(bb, 0) / h)
        dm = np.where(centred, -bb / (2 * h), np.maximum(-bb, 0) / h)
        return wp + dp, wn + dm, np.where(centred, 0.0, -np.abs(bb) / h)

    n_up, n_dn, d_a = drift(b0[ii], n_up, n_dn)
    n_rt, n_lt, d_b = drift(b1[ii], n_rt, n_lt)
    diag0 = diag0 + d_a + d_b
    add(0, 0, diag0)
    add(1, 0, n_up)
    add(-1, 0, n_dn)
    add(0, 1, n_rt)
    add(0, -1, n_lt)
    add(1, 1, 0.5 * cp / h2)
    add(-1, -1, 0.5 * cp / h2)
    add(1, -1, 0.5 * cm / h2)
    add(-1, 1, 0.5 * cm / h2)
    N = n0p * nx
    return sparse.csr_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
                             shape=(N, N))


@dataclass
class SolutionField:
    u: np.ndarray             # (n0+1, nx, nt) or (batch, n0+1, nx, nt)
    f: np.ndarray
    config: SolverConfig
    residuals: list = field(default_factory=list)

    @property
    def spec(self) -> GridSpec:
        return self.config.strip_spec()

    def member(self, b: int) -> "SolutionField":
        return SolutionField(self.u[b], self.f[b], self.config, self.residuals)


def solve_dirichlet(cfg: SolverConfig, f: np.ndarray, A=None, B=None, source=None,
                    u_init: np.ndarray | None = None, lam: float | None = None,
                    Lam: float | None = None) -> SolutionField:
    """Time-march the theta scheme.

    f has shape (nx, nt) or (batch, nx, nt).  A, B are constants or fields of shape
    (n0+1, nx[, nt]) + (2, 2) / (2,).  ``source`` is an optional callable of the time
    index returning (n0+1, nx) [or batched] values.
    """
    f = np.asarray(f, dtype=float)
    batched = f.ndim == 3
    F = f if batched else f[None]
    nb = F.shape[0]
    n0p, nx, nt = cfg.n0 + 1, cfg.nx, cfg.nt
    shape = (n0p, nx, nt)
    Af = _expand(np.eye(2) if A is None else A, shape, (2, 2))
    Bf = _expand(np.zeros(2) if B is None else B, shape, (2,))
    if lam is not None:
        validate_coefficients(Af, None, lam, np.inf if Lam is None else Lam)
    const = A is None or np.asarray(A).ndim in (2, 4)
    const = const and (B is None or np.asarray(B).ndim in (1, 3))
    interior = np.zeros((n0p, nx), bool)
    interior[1:-1] = True
    inn = np.flatnonzero(interior.ravel())
    bnd = np.flatnonzero(~interior.ravel())
    N = n0p * nx
    U = np.zeros((nb, n0p, nx, nt))
    if u_init is not None:
        U[..., 0] = u_init
    U[:, 0, :, :] = F
    U[:, -1, :, :] = 0.0
    th, dt = cfg.theta, cfg.dt
    cache = {}

    def op(k):
        key = 0 if const else k
        if key not in cache:
            if not const:
                cache.clear()
            cache[key] = _operator(np.asarray(Af[:, :, k]), np.asarray(Bf[:, :, k]), cfg.h)
        return cache[key]

    lu_cache = {}
    residuals = []
    prev_L = op(0)
    for k in range(1, nt):
        Lk = op(k)
        key = 0 if const else k
        if key not in lu_cache:
            lu_cache.clear()
            M = (sparse.identity(N, format="csr") - th * dt * Lk)
            lu_cache[key] = (spla.splu(M[inn][:, inn].tocsc()), M[inn][:, bnd])
        lu, Mib = lu_cache[key]
        old = U[..., k - 1].reshape(nb, N)
        rhs = old[:, inn] + (1 - th) * dt * (prev_L @ old.T).T[:, inn]
        if source is not None:
            s_new = np.asarray(source(k), dtype=float).reshape(-1, N)
            s_old = np.asarray(source(k - 1), dtype=float).reshape(-1, N)
            rhs = rhs + dt * (th * s_new + (1 - th) * s_old)[:, inn]
        new_b = U[..., k].reshape(nb, N)[:, bnd]
        rhs = rhs - (Mib @ new_b.T).T
        sol = lu.solve(np.ascontiguousarray(rhs.T)).T
        full = U[..., k].reshape(nb, N).copy()
        full[:, inn] = sol
        U[..., k] = full.reshape(nb, n0p, nx)
        Mii = sparse.identity(len(inn), format="csr") - th * dt * Lk[inn][:, inn]
        r = rhs.T - Mii @ sol.T
        residuals.append(float(np.abs(r).max()))
        prev_L = Lk
    if not np.all(np.isfinite(U)):
        raise FloatingPointError("solver produced non-finite values")
    if max(residuals, default=0.0) > cfg.tol * max(1.0, float(np.abs(F).max())) * 1e3:
        raise RuntimeError("linear solve did not reach tolerance")
    return SolutionField(U if batched else U[0], F if batched else F[0], cfg, residuals)


# ---------------------------------------------------------------- diagnostics

def future_independence(cfg: SolverConfig, f: np.ndarray, k_cut: int, **kw) -> float:
    """max |u1 - u2| on levels < k_cut when f is altered only on levels >= k_cut."""
    g = np.array(f, dtype=float)
    g[:, k_cut:] += 1.0 + np.abs(g).max()
    u1 = solve_dirichlet(cfg, f, **kw).u
    u2 = solve_dirichlet(cfg, g, **kw).u
    return float(np.abs(u1[..., :k_cut] - u2[..., :k_cut]).max())


def cacciopoli_ratio(sol: SolutionField, center: tuple, m: int) -> tuple:
    """Both chained ratios of the energy inequality on cubes of radius r = m*h about a node.

    center = (i, j, k) node indices.  Q_2r must lie inside the strip after the initial
    level and 8r must stay below the depth of the centre.  Returns (left/middle, middle/right).
    """
    u = sol.u
    cfg = sol.config
    h, dt = cfg.h, cfg.dt
    i, j, k = center
    if m < 2 or m % 2:
        raise ValueError("radius must be an even number of cells, at least 2")
    if not (8 * m < i and i + 2 * m <= cfg.n0 and 4 * m * m < k < cfg.nt - 4 * m * m):
        raise OutOfDomainError("Q_2r must stay inside the strip with 8r below the centre depth")
    nx = cfg.nx

    def box(s):
        ii = np.arange(i - s, i + s + 1)
        jj = np.arange(j - s, j + s + 1) % nx
        kk = np.arange(k - s * s, k + s * s + 1)
        return ii, jj, kk

    ii, jj, kk = box(m // 2)
    left = (m * h) ** 2 * float(np.abs(u[np.ix_(ii, jj, kk)]).max()) ** 2
    ii, jj, kk = box(m)
    sub = u[np.ix_(ii, jj, kk)]
    slices = (sub ** 2).sum(axis=(0, 1)) * h * h
    g0 = np.gradient(sub, h, axis=0)
    g1 = np.gradient(sub, h, axis=1)
    middle = float(slices.max()) + float(((g0 ** 2 + g1 ** 2).sum()) * h * h * dt)
    ii, jj, kk = box(2 * m)
    right = float((u[np.ix_(ii, jj, kk)] ** 2).sum()) * h * h * dt / (m * h) ** 2
    r1 = left / middle if middle > 0 else 0.0
    r2 = middle / right if right > 0 else 0.0
    return r1, r2


# ---------------------------------------------------------------- manufactured solutions

@dataclass
class ManufacturedCase:
    name: str
    exact: object             # (x0, x, t) -> u
    A: object = None          # callable (x0, x) -> (..., 2, 2) or None
    B: object = None          # constant vector or None
    source: object = None     # (x0, x, t) -> F
    T: float = 0.05


def heat_case() -> ManufacturedCase:
    return ManufacturedCase(
        "heat", lambda x0, x, t: np.exp(-2 * math.pi ** 2 * t) * np.sin(math.pi * x0) * np.sin(math.pi * x))


def variable_case() -> ManufacturedCase:
    """u = e^-t sin(pi x0) sin(pi x), A = [[1 + x0/2, 0.2], [0.2, 1]], B = (0.3, 0.2)."""
    b = np.array([0.3, 0.2])

    def exact(x0, x, t):
        return np.exp(-t) * np.sin(math.pi * x0) * np.sin(math.pi * x)

    def A(x0, x):
        out = np.zeros(np.broadcast(x0, x).shape + (2, 2))
        out[..., 0, 0] = 1 + 0.5 * x0
        out[..., 1, 1] = 1.0
        out[..., 0, 1] = out[..., 1, 0] = 0.2
        return out

    def source(x0, x, t):
        u = exact(x0, x, t)
        u0 = np.exp(-t) * math.pi * np.cos(math.pi * x0) * np.sin(math.pi * x)
        u1 = np.exp(-t) * math.pi * np.sin(math.pi * x0) * np.cos(math.pi * x)
        u01 = np.exp(-t) * math.pi ** 2 * np.cos(math.pi * x0) * np.cos(math.pi * x)
        div = (1 + 0.5 * x0) * (-math.pi ** 2 * u) + 0.5 * u0 - math.pi ** 2 * u + 0.4 * u01
        return -u - div - (b[0] * u0 + b[1] * u1)

    return ManufacturedCase("variable", exact, A, b, source)


def zero_case() -> ManufacturedCase:
    return ManufacturedCase("zero", lambda x0, x, t: 0.0 * x0 * x * t)


def manufactured_error(case: ManufacturedCase, levels=(8, 16, 32), theta: float = 1.0) -> dict:
    """L-infinity and L2 errors at the final time on x0 in [0,1], x in [-1,1) for each level."""
    rows = []
    for n in levels:
        h = 1.0 / n
        nt = int(round(case.T / (h * h))) + 1
        cfg = SolverConfig(h, n, 2 * n, nt, -1.0, 0.0, theta)
        x0, x, t = cfg.axes()
        X0, X = np.meshgrid(x0, x, indexing="ij")
        exact = case.exact(X0[..., None], X[..., None], t[None, None, :]) + np.zeros((n + 1, 2 * n, nt))
        f = exact[0]
        A = None if case.A is None else case.A(X0, X)
        src = None
        if case.source is not None:
            def src(k, X0=X0, X=X, t=t):
                return case.source(X0, X, t[k])
        sol = solve_dirichlet(cfg, f, A=A, B=case.B, source=src, u_init=exact[..., 0])
        # the top row carries exact data as well
        err = sol.u[..., -1] - exact[..., -1]
        rows.append({"n": n, "h": h, "linf": float(np.abs(err).max()),
                     "l2": float(np.sqrt((err ** 2).sum() * h * h))})
    for a, b in zip(rows, rows[1:]):
        b["order_linf"] = math.log(a["linf"] / b["linf"], 2) if b["linf"] > 0 and a["linf"] > 0 else math.inf
    return {"case": case.name, "rows": rows,
            "min_order": min((r.get("order_linf", math.inf) for r in rows[1:]), default=math.inf)}
