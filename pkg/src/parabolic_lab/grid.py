"""Parabolic geometry, sampled fields, cube families and the PGRID file format.

Points are ``(x, t)`` with ``x`` a tuple of spatial coordinates.  A grid has
spatial step ``h`` and time step ``h**2`` so that a cube of radius ``m*h``
covers exactly ``2m`` cells per spatial axis and ``2m**2`` cells in time.
Samples sit at cell centres.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

_SNAP = 1e-7


class OutOfDomainError(ValueError):
    pass


class PgridError(ValueError):
    pass


class PgridHeaderError(PgridError):
    pass


class PgridDimensionError(PgridError):
    pass


class PgridTruncatedError(PgridError):
    pass


@dataclass(frozen=True)
class ParabolicPoint:
    x: tuple
    t: float

    def __post_init__(self):
        x = tuple(float(v) for v in np.atleast_1d(self.x))
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "t", float(self.t))
        if not all(math.isfinite(v) for v in x + (self.t,)):
            raise ValueError("coordinates must be finite")


def parabolic_norm(p: ParabolicPoint) -> float:
    return math.sqrt(sum(v * v for v in p.x)) + math.sqrt(abs(p.t))


def parabolic_dist(a: ParabolicPoint, b: ParabolicPoint) -> float:
    if len(a.x) != len(b.x):
        raise ValueError("dimension mismatch")
    return parabolic_norm(ParabolicPoint(tuple(u - v for u, v in zip(a.x, b.x)), a.t - b.t))


@dataclass(frozen=True)
class ParabolicCube:
    center: ParabolicPoint
    r: float

    def __post_init__(self):
        if not self.r > 0:
            raise ValueError("cube radius must be positive")

    @property
    def ndim(self) -> int:
        return len(self.center.x)

    def volume(self) -> float:
        return (2 * self.r) ** self.ndim * 2 * self.r ** 2

    def side(self) -> float:
        return 2 * self.r

    def contains_cube(self, other: "ParabolicCube", tol: float = 1e-12) -> bool:
        for a, b in zip(self.center.x, other.center.x):
            if abs(b - a) + other.r > self.r + tol:
                return False
        return abs(other.center.t - self.center.t) + other.r ** 2 <= self.r ** 2 + tol

    def to_dict(self) -> dict:
        return {"x": list(self.center.x), "t": self.center.t, "r": self.r}


@dataclass(frozen=True)
class GridSpec:
    """Uniform grid.  ``counts`` lists the spatial counts followed by the time count."""

    n_minus_1: int
    h: float
    origin: tuple
    counts: tuple

    def __post_init__(self):
        origin = tuple(float(v) for v in self.origin)
        counts = tuple(int(c) for c in self.counts)
        object.__setattr__(self, "origin", origin)
        object.__setattr__(self, "counts", counts)
        if self.n_minus_1 not in (1, 2, 3):
            raise ValueError("n_minus_1 must be 1, 2 or 3")
        if not (self.h > 0 and math.isfinite(self.h)):
            raise ValueError("h must be positive")
        if len(origin) != self.n_minus_1 + 1 or len(counts) != self.n_minus_1 + 1:
            raise ValueError("origin and counts need one entry per axis")
        if min(counts) < 4:
            raise ValueError("at least 4 cells per axis")

    @property
    def dt(self) -> float:
        return self.h * self.h

    @property
    def shape(self) -> tuple:
        return self.counts

    @property
    def size(self) -> int:
        return int(np.prod(self.counts))

    def steps(self) -> tuple:
        return (self.h,) * self.n_minus_1 + (self.dt,)

    def lengths(self) -> tuple:
        return tuple(c * s for c, s in zip(self.counts, self.steps()))

    def axis(self, k: int) -> np.ndarray:
        return self.origin[k] + (np.arange(self.counts[k]) + 0.5) * self.steps()[k]

    def mesh(self) -> list:
        return np.meshgrid(*[self.axis(k) for k in range(len(self.counts))], indexing="ij")

    def cell_volume(self) -> float:
        return self.h ** self.n_minus_1 * self.dt

    def max_cells(self) -> int:
        """Largest m such that a cube of radius m*h fits in the box."""
        m = min(self.counts[:-1]) // 2
        return min(m, math.isqrt(self.counts[-1] // 2))

    def box_radius(self) -> float:
        return self.max_cells() * self.h

    def with_counts(self, counts, origin=None) -> "GridSpec":
        return GridSpec(self.n_minus_1, self.h, self.origin if origin is None else origin, counts)

    def center(self) -> ParabolicPoint:
        c = [o + L / 2 for o, L in zip(self.origin, self.lengths())]
        return ParabolicPoint(tuple(c[:-1]), c[-1])

    @classmethod
    def cube_box(cls, radius: float, h: float, n_minus_1: int = 1, center=None) -> "GridSpec":
        """Grid covering the parabolic cube of the given radius exactly."""
        m = radius / h
        if abs(m - round(m)) > _SNAP:
            raise ValueError("radius must be a multiple of h")
        m = int(round(m))
        c = center or ParabolicPoint((0.0,) * n_minus_1, 0.0)
        origin = tuple(v - radius for v in c.x) + (c.t - radius * radius,)
        return cls(n_minus_1, h, origin, (2 * m,) * n_minus_1 + (2 * m * m,))


@dataclass(frozen=True)
class ScalarField:
    spec: GridSpec
    values: np.ndarray
    periodic: bool = False
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        v = np.array(self.values, dtype=np.float64)
        if v.shape != self.spec.counts:
            if v.size != self.spec.size:
                raise ValueError(f"value count {v.size} does not match grid {self.spec.counts}")
            v = v.reshape(self.spec.counts)
        if not np.all(np.isfinite(v)):
            raise ValueError("field values must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def from_function(cls, spec: GridSpec, fn, periodic: bool = False) -> "ScalarField":
        mesh = spec.mesh()
        vals = fn(*mesh)
        return cls(spec, np.broadcast_to(vals, spec.counts).copy(), periodic)

    def replace(self, values=None, periodic=None, spec=None) -> "ScalarField":
        return ScalarField(spec or self.spec,
                           self.values if values is None else values,
                           self.periodic if periodic is None else periodic)

    def __add__(self, other):
        return self.replace(self.values + (other.values if isinstance(other, ScalarField) else other))

    def __mul__(self, a):
        return self.replace(self.values * a)

    __rmul__ = __mul__


@dataclass(frozen=True)
class GraphDomain:
    phi: ScalarField
    lip_const: float
    eta: float
    d: float

    def __post_init__(self):
        if self.phi.spec.n_minus_1 not in (1, 2):
            raise ValueError("graph variable must have 1 or 2 spatial axes")
        if self.lip_const < 0 or self.eta < 0:
            raise ValueError("lip_const and eta must be nonnegative")

    @classmethod
    def normalized(cls, phi: ScalarField, d: float, eta: float = 0.0, lip_const=None):
        """Shift phi so that its sample closest to (0, 0) vanishes."""
        idx = tuple(int(np.argmin(np.abs(phi.spec.axis(k)))) for k in range(len(phi.spec.counts)))
        shifted = phi.replace(phi.values - phi.values[idx])
        ell = lip_constant_estimate(shifted) if lip_const is None else lip_const
        return cls(shifted, ell, eta, d)


# ---------------------------------------------------------------- cubes

def cube_index_box(spec: GridSpec, Q: ParabolicCube) -> tuple:
    """Index slices for the cells covered by Q; raises if Q is off-grid or outside."""
    if Q.ndim != spec.n_minus_1:
        raise ValueError("cube dimension does not match grid")
    slices = []
    half = (Q.r,) * spec.n_minus_1 + (Q.r * Q.r,)
    centre = Q.center.x + (Q.center.t,)
    for k, (c, w, s, o, n) in enumerate(zip(centre, half, spec.steps(), spec.origin, spec.counts)):
        lo = (c - w - o) / s
        hi = (c + w - o) / s
        ilo, ihi = int(round(lo)), int(round(hi))
        if abs(lo - ilo) > _SNAP * max(1, abs(lo)) or abs(hi - ihi) > _SNAP * max(1, abs(hi)):
            raise OutOfDomainError("cube is not aligned with the grid")
        if ilo < 0 or ihi > n or ihi <= ilo:
            raise OutOfDomainError("cube lies outside the field box")
        slices.append(slice(ilo, ihi))
    return tuple(slices)


def cube_from_index(spec: GridSpec, lower: Sequence[int], m: int) -> ParabolicCube:
    """Cube of radius m*h whose lowest cell has the given indices."""
    h = spec.h
    x = tuple(spec.origin[k] + (lower[k] + m) * h for k in range(spec.n_minus_1))
    t = spec.origin[-1] + (lower[-1] + m * m) * spec.dt
    return ParabolicCube(ParabolicPoint(x, t), m * h)


def cube_average(f: ScalarField, Q: ParabolicCube) -> float:
    return float(f.values[cube_index_box(f.spec, Q)].mean())


def cube_radii(spec: GridSpec, mode: str, r_min: float, r_max: float) -> list:
    """Radii (in cells) visited by enumerate_cubes, largest first."""
    top = spec.max_cells()
    if mode == "sliding":
        top = min(top, int(math.floor(r_max / spec.h + _SNAP)))
    out = []
    m = top
    while m >= 1:
        if r_min - _SNAP * spec.h <= m * spec.h <= r_max + _SNAP * spec.h:
            out.append(m)
        if m % 2:
            break
        m //= 2
    return out


def _dyadic_extent(spec: GridSpec) -> tuple:
    top = spec.max_cells()
    side = (2 * top,) * spec.n_minus_1 + (2 * top * top,)
    return tuple((n // s) * s for n, s in zip(spec.counts, side))


def cube_lower_corners(spec: GridSpec, mode: str, m: int) -> list:
    """Per-axis arrays of admissible lower-corner indices at radius m cells."""
    side = (2 * m,) * spec.n_minus_1 + (2 * m * m,)
    if mode == "dyadic":
        ext = _dyadic_extent(spec)
        return [np.arange(0, e - s + 1, s) for e, s in zip(ext, side)]
    if mode == "sliding":
        step = (m,) * spec.n_minus_1 + (m * m,)
        return [np.arange(0, n - s + 1, st) for n, s, st in zip(spec.counts, side, step)]
    raise ValueError(f"unknown mode {mode!r}")


def enumerate_cubes(spec: GridSpec, mode: str = "sliding", r_min: float | None = None,
                    r_max: float | None = None) -> list:
    r_max = spec.box_radius() if r_max is None else r_max
    r_min = spec.h if r_min is None else r_min
    if r_max > spec.box_radius() + _SNAP * spec.h and r_min > spec.box_radius():
        return []
    cubes = []
    for m in cube_radii(spec, mode, r_min, r_max):
        corners = cube_lower_corners(spec, mode, m)
        for idx in np.stack(np.meshgrid(*corners, indexing="ij"), -1).reshape(-1, len(corners)):
            cubes.append(cube_from_index(spec, idx, m))
    return cubes


def iter_block_tilings(spec: GridSpec, mode: str, m: int) -> Iterator[tuple]:
    """Yield (offset, counts) describing non-overlapping tilings by cubes of radius m.

    The union over yielded tilings is exactly the family from cube_lower_corners.
    """
    side = (2 * m,) * spec.n_minus_1 + (2 * m * m,)
    if mode == "dyadic":
        ext = _dyadic_extent(spec)
        k = tuple(e // s for e, s in zip(ext, side))
        if min(k) > 0:
            yield (0,) * len(side), k
        return
    step = (m,) * spec.n_minus_1 + (m * m,)
    for parity in np.ndindex(*(2,) * len(side)):
        off = tuple(p * st for p, st in zip(parity, step))
        k = tuple((n - o) // s for n, o, s in zip(spec.counts, off, side))
        if min(k) > 0:
            yield off, k


def block_view(values: np.ndarray, offset: tuple, counts: tuple, side: tuple) -> np.ndarray:
    """Reshape a tiled region into (k0, k1, ..., s0, s1, ...) blocks."""
    sl = tuple(slice(o, o + k * s) for o, k, s in zip(offset, counts, side))
    v = values[sl]
    shp = []
    for k, s in zip(counts, side):
        shp += [k, s]
    v = v.reshape(shp)
    nd = len(side)
    return v.transpose(list(range(0, 2 * nd, 2)) + list(range(1, 2 * nd, 2)))


# ---------------------------------------------------------------- Lipschitz

def _pair_quotients(v: np.ndarray, lag: tuple, steps: tuple, ns: int) -> float:
    sl_a, sl_b = [], []
    for L, n in zip(lag, v.shape):
        if abs(L) >= n:
            return 0.0
        if L >= 0:
            sl_a.append(slice(0, n - L))
            sl_b.append(slice(L, n))
        else:
            sl_a.append(slice(-L, n))
            sl_b.append(slice(0, n + L))
    diff = np.abs(v[tuple(sl_a)] - v[tuple(sl_b)])
    dx = math.sqrt(sum((lag[k] * steps[k]) ** 2 for k in range(ns)))
    dist = dx + math.sqrt(abs(lag[-1]) * steps[-1])
    return float(diff.max()) / dist if diff.size else 0.0


def lip_constant_estimate(phi: ScalarField, pair_budget: int = 20000, seed: int = 0) -> float:
    """Lower bound on the Lip(1,1/2) constant from sampled pairs.

    Uses all nearest and diagonal neighbour pairs, all pairs at dyadic lags along
    each axis, and a random pair budget.
    """
    v = phi.values
    spec = phi.spec
    nd = v.ndim
    ns = nd - 1
    steps = spec.steps()
    best = 0.0
    lags = set()
    for sgn in np.ndindex(*(3,) * nd):
        lag = tuple(s - 1 for s in sgn)
        if any(lag) and lag > tuple(0 for _ in lag):
            lags.add(lag)
    for k in range(nd):
        L = 2
        while L < v.shape[k]:
            lag = [0] * nd
            lag[k] = L
            lags.add(tuple(lag))
            L *= 2
    for lag in sorted(lags):
        best = max(best, _pair_quotients(v, lag, steps, ns))
    if pair_budget > 0 and v.size > 1:
        rng = np.random.default_rng(seed)
        flat = v.ravel()
        a = rng.integers(0, v.size, pair_budget)
        b = rng.integers(0, v.size, pair_budget)
        keep = a != b
        a, b = a[keep], b[keep]
        ia = np.array(np.unravel_index(a, v.shape), dtype=float)
        ib = np.array(np.unravel_index(b, v.shape), dtype=float)
        d = ia - ib
        dist = np.sqrt(((d[:ns] * spec.h) ** 2).sum(0)) + np.sqrt(np.abs(d[-1]) * spec.dt)
        if a.size:
            best = max(best, float((np.abs(flat[a] - flat[b]) / dist).max()))
    return best


# ---------------------------------------------------------------- PGRID I/O

_MAGIC = "PGRID1"


def field_io_write(f: ScalarField, path) -> None:
    s = f.spec
    head = [_MAGIC, str(s.n_minus_1), repr(float(s.h))]
    head += [repr(float(o)) for o in s.origin]
    head += [str(c) for c in s.counts]
    head.append("1" if f.periodic else "0")
    payload = np.asarray(f.values, dtype="<f8").ravel(order="F").tobytes()
    with open(path, "wb") as fh:
        fh.write((" ".join(head) + "\n").encode("ascii"))
        fh.write(payload)


def _parse_header(line: bytes) -> tuple:
    try:
        tok = line.decode("ascii").split()
    except UnicodeDecodeError as exc:
        raise PgridHeaderError("header is not ASCII") from exc
    if not tok or tok[0] != _MAGIC:
        raise PgridHeaderError("missing PGRID1 magic")
    try:
        nm1 = int(tok[1])
        h = float(tok[2])
    except (IndexError, ValueError) as exc:
        raise PgridHeaderError("bad dimension or step") from exc
    if nm1 not in (1, 2, 3):
        raise PgridHeaderError("spatial dimension must be 1, 2 or 3")
    if not (h > 0 and math.isfinite(h)):
        raise PgridHeaderError("step h must be positive")
    nax = nm1 + 1
    if len(tok) != 3 + 2 * nax + 1:
        raise PgridDimensionError(
            f"header has {len(tok) - 4} origin/count entries, expected {2 * nax} for n_minus_1={nm1}")
    try:
        origin = tuple(float(v) for v in tok[3:3 + nax])
        counts = tuple(int(v) for v in tok[3 + nax:3 + 2 * nax])
        periodic = int(tok[-1])
    except ValueError as exc:
        raise PgridHeaderError("non-numeric origin or counts") from exc
    if periodic not in (0, 1):
        raise PgridHeaderError("periodic flag must be 0 or 1")
    if min(counts) < 4:
        raise PgridDimensionError("counts must be at least 4")
    return nm1, h, origin, counts, bool(periodic)


def field_io_read(path) -> ScalarField:
    data = Path(path).read_bytes()
    nl = data.find(b"\n")
    if nl < 0:
        raise PgridHeaderError("no header line")
    nm1, h, origin, counts, periodic = _parse_header(data[:nl])
    payload = data[nl + 1:]
    need = 8 * int(np.prod(counts))
    if len(payload) < need:
        raise PgridTruncatedError(f"payload has {len(payload)} bytes, expected {need}")
    if len(payload) > need:
        raise PgridDimensionError(f"payload has {len(payload)} bytes, expected {need}")
    vals = np.frombuffer(payload, dtype="<f8").reshape(counts, order="F")
    return ScalarField(GridSpec(nm1, h, origin, counts), vals.astype(np.float64), periodic)


def pack_header(spec: GridSpec, periodic: bool) -> str:
    return " ".join([_MAGIC, str(spec.n_minus_1), repr(spec.h)] + [repr(o) for o in spec.origin]
                    + [str(c) for c in spec.counts] + ["1" if periodic else "0"])


__all__ = [
    "ParabolicPoint", "ParabolicCube", "GridSpec", "ScalarField", "GraphDomain",
    "parabolic_norm", "parabolic_dist", "enumerate_cubes", "cube_average", "cube_index_box",
    "lip_constant_estimate", "field_io_write", "field_io_read", "OutOfDomainError",
    "PgridError", "PgridHeaderError", "PgridDimensionError", "PgridTruncatedError",
]
