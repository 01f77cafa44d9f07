"""Deterministic families of boundary surfaces and coefficient fields.

Surfaces live on the box [-1, 1) x [0, T).  Rough members are built from the
lacunary sum ``W`` below, which is Lipschitz-like in x and half-Holder in t.
Periodic members are periodic on the box; affine members are not, and get a
box enlarged by the margin the second-difference stencils need.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .grid import GridSpec, ScalarField

X_LEN = 2.0
T_LEN = 0.25


@dataclass
class SurfaceMember:
    name: str
    kind: str                 # "affine" | "smooth" | "rough"
    params: dict = field(default_factory=dict)

    def periodic(self) -> bool:
        return self.kind != "affine"

    def evaluate(self, x: np.ndarray, t: np.ndarray) -> np.ndarray:
        p = self.params
        if self.kind == "affine":
            return p["slope"] * x + p["offset"] + 0.0 * t
        if self.kind == "smooth":
            return (p.get("ax", 0.0) * np.sin(math.pi * x)
                    + p.get("bx", 0.0) * np.cos(math.pi * x)
                    + p.get("ct", 0.0) * np.cos(2 * math.pi * t / T_LEN)
                    + p.get("prod", 0.0) * np.sin(math.pi * x) * np.cos(2 * math.pi * t / T_LEN))
        return rough_surface(x, t, p["K"], p.get("amp_x", 0.0), p.get("amp_t", 0.0))

    def field(self, h: float, nt: int | None = None, margin: tuple = (0, 0)) -> ScalarField:
        """Sample on the base box at spacing h; non-periodic members get ``margin`` extra cells."""
        nx = int(round(X_LEN / h))
        nt = int(round(T_LEN / (h * h))) if nt is None else nt
        mx, mt = margin if not self.periodic() else (0, 0)
        spec = GridSpec(1, h, (-1.0 - mx * h, -mt * h * h), (nx + 2 * mx, nt + 2 * mt))
        X, T = spec.mesh()
        return ScalarField(spec, self.evaluate(X, T), periodic=self.periodic(),
                           meta={"member": self.name})

    def scaled(self, alpha: float) -> "SurfaceMember":
        p = dict(self.params)
        for key in ("slope", "offset", "ax", "bx", "ct", "prod", "amp_x", "amp_t"):
            if key in p:
                p[key] = alpha * p[key]
        return SurfaceMember(f"{self.name}*{alpha:g}", self.kind, p)


def rough_surface(x, t, K: int, amp_x: float, amp_t: float) -> np.ndarray:
    """amp_x * sum 2^-k cos(2^k pi x) + amp_t * sum 2^-k cos(4^k w t) with w = 2 pi / T."""
    out = np.zeros(np.broadcast(x, t).shape)
    w = 2 * math.pi / T_LEN
    for k in range(K + 1):
        if amp_x:
            out = out + amp_x * 2.0 ** -k * np.cos(2 ** k * math.pi * x)
        if amp_t:
            out = out + amp_t * 2.0 ** -k * np.cos(4 ** k * w * t)
    return out


def resolvable_K(h: float, cells_per_wave: int = 8) -> int:
    """Largest K whose finest time and space waves keep ``cells_per_wave`` cells at spacing h."""
    nx = X_LEN / h
    nt = T_LEN / (h * h)
    K = 0
    while 2 ** (K + 1) * cells_per_wave <= nx / 1.0 and 4 ** (K + 1) * cells_per_wave <= nt:
        K += 1
    return K


def equivalence_corpus(K: int = 2) -> list:
    """Twelve surfaces: three affine controls, four smooth and five rough members."""
    return [
        SurfaceMember("affine_zero", "affine", {"slope": 0.0, "offset": 0.0}),
        SurfaceMember("affine_up", "affine", {"slope": 0.5, "offset": 0.25}),
        SurfaceMember("affine_down", "affine", {"slope": -0.375, "offset": 0.125}),
        SurfaceMember("smooth_sin", "smooth", {"ax": 0.1}),
        SurfaceMember("smooth_mix", "smooth", {"bx": 0.1, "ct": 0.02}),
        SurfaceMember("smooth_prod", "smooth", {"prod": 0.05}),
        SurfaceMember("smooth_time", "smooth", {"ct": 0.03}),
        SurfaceMember("rough_small", "rough", {"K": K, "amp_x": 0.01, "amp_t": 0.01}),
        SurfaceMember("rough_mid", "rough", {"K": K, "amp_x": 0.02, "amp_t": 0.02}),
        SurfaceMember("rough_big", "rough", {"K": K, "amp_x": 0.04, "amp_t": 0.04}),
        SurfaceMember("rough_space", "rough", {"K": K, "amp_x": 0.03}),
        SurfaceMember("rough_time", "rough", {"K": K, "amp_t": 0.03}),
    ]


def member_from_dict(d: dict) -> SurfaceMember:
    return SurfaceMember(d["name"], d["kind"], dict(d["params"]))


def write_manifest(path, members: list, measured: dict) -> None:
    rows = [dict(asdict(m), measured=measured.get(m.name, {})) for m in members]
    with open(path, "w") as fh:
        json.dump({"members": rows}, fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_manifest(path) -> tuple:
    with open(path) as fh:
        data = json.load(fh)
    members = [member_from_dict(r) for r in data["members"]]
    measured = {r["name"]: r.get("measured", {}) for r in data["members"]}
    return members, measured


# ---------------------------------------------------------------- main-estimate corpus

def main_corpus(K: int = 2) -> list:
    """Small-eta surfaces for the Dirichlet estimate: flat, smooth and rough."""
    return [
        SurfaceMember("flat", "smooth", {}),
        SurfaceMember("smooth_small", "smooth", {"ax": 0.01, "prod": 0.005}),
        SurfaceMember("rough_tiny", "rough", {"K": K, "amp_x": 0.002, "amp_t": 0.002}),
    ]


def scale_to_eta(member: SurfaceMember, measured: float, target: float) -> SurfaceMember:
    """Rescale a member whose measured smallness is ``measured`` so that it becomes ``target``."""
    if target == 0:
        return SurfaceMember(f"{member.name}@0", "affine", {"slope": 0.0, "offset": 0.0})
    if measured <= 0:
        raise ValueError(f"member {member.name} has zero smallness and cannot reach {target}")
    out = member.scaled(target / measured)
    out.name = f"{member.name}@{target:g}"
    return out


@dataclass
class CoefficientFamily:
    """A(y0, y, t) = I + s w(y0) M(y, t) and B = s (cos pi y, sin pi y) / (1 + y0)."""
    name: str
    scale: float = 0.0

    def A(self, y0, y, t):
        shape = np.broadcast(y0, y, t).shape
        out = np.zeros(shape + (2, 2))
        out[..., 0, 0] = out[..., 1, 1] = 1.0
        if self.scale:
            w = self.scale * y0 / (1.0 + y0)
            out[..., 0, 0] += w * np.sin(math.pi * y)
            out[..., 1, 1] += 0.5 * w * np.cos(2 * math.pi * t / T_LEN)
            out[..., 0, 1] += 0.5 * w * np.cos(math.pi * y)
            out[..., 1, 0] += 0.5 * w * np.cos(math.pi * y)
        return out

    def B(self, y0, y, t):
        shape = np.broadcast(y0, y, t).shape
        out = np.zeros(shape + (2,))
        if self.scale:
            out[..., 0] = self.scale * np.cos(math.pi * y) / (1.0 + y0)
            out[..., 1] = self.scale * np.sin(math.pi * y) / (1.0 + y0)
        return out

    def trivial(self) -> bool:
        return self.scale == 0


def coefficient_families() -> list:
    return [CoefficientFamily("identity", 0.0), CoefficientFamily("perturbed", 0.1)]


def random_boundary_data(rng: np.random.Generator, x: np.ndarray, t: np.ndarray, n: int,
                         bumps: int = 3) -> np.ndarray:
    """n nonnegative smooth data on the lateral cells x and time levels t, zero near the final time.

    Each datum is a sum of separable (1 - z^2)^3 bumps, periodic in x.
    """
    T = t[-1] - t[0]
    out = np.zeros((n, x.size, t.size))
    for b in range(n):
        for _ in range(bumps):
            amp = rng.uniform(0.2, 1.0)
            cx, wx = rng.uniform(-1.0, 1.0), rng.uniform(0.25, 0.6)
            ct, wt = t[0] + T * rng.uniform(0.35, 0.55), T * rng.uniform(0.25, 0.4)
            dx = (x - cx + 1.0) % X_LEN - 1.0
            zx = np.clip(dx / wx, -1, 1)
            zt = np.clip((t - ct) / wt, -1, 1)
            out[b] += amp * np.outer((1 - zx * zx) ** 3, (1 - zt * zt) ** 3)
    return out
