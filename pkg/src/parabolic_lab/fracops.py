"""Parabolic Fourier multipliers and the pointwise half time-derivative.

Frequencies are physical: ``xi = 2*pi*k/L_x`` and ``tau = 2*pi*k/L_t``.  The
forward transform is numpy's, so a derivative in any direction has symbol
``i*frequency``.

The smooth parabolic size of a frequency is the positive root ``rho`` of
``|xi|^2/rho^2 + tau^2/rho^4 = 1``.  It is comparable to ``|xi| + |tau|^(1/2)``
(between one half and one times it) and makes the Riesz decomposition of the
parabolic derivative an exact per-mode identity.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage, special

from .grid import GridSpec, ScalarField

NORMS = ("smooth", "sum")


class NonPeriodicError(ValueError):
    pass


class CalibrationError(RuntimeError):
    pass


@dataclass(frozen=True)
class MultiplierSpec:
    kind: str
    alpha: float = 0.5
    j: int = 1
    norm: str = "smooth"

    def __post_init__(self):
        if self.kind not in ("D_alpha_time", "Dn_half", "D_parabolic", "Riesz", "partial"):
            raise ValueError(f"unknown multiplier kind {self.kind!r}")
        if self.kind == "D_alpha_time" and not 0 < self.alpha < 2:
            raise ValueError("alpha must lie in (0, 2)")
        if self.j < 1:
            raise ValueError("j starts at 1")
        if self.norm not in NORMS:
            raise ValueError(f"norm must be one of {NORMS}")


def frequencies(spec: GridSpec) -> list:
    """Physical angular frequencies per axis in numpy FFT order."""
    out = []
    for n, L in zip(spec.counts, spec.lengths()):
        out.append(2 * np.pi * np.fft.fftfreq(n, d=L / n))
    return out


def _nyquist_mask(n: int) -> np.ndarray:
    m = np.zeros(n, bool)
    if n % 2 == 0:
        m[n // 2] = True
    return m


def parabolic_size(xis: list, tau: np.ndarray, norm: str = "smooth") -> np.ndarray:
    xi2 = sum(x * x for x in xis)
    if norm == "sum":
        return np.sqrt(xi2) + np.sqrt(np.abs(tau))
    return np.sqrt(0.5 * (xi2 + np.sqrt(xi2 * xi2 + 4.0 * tau * tau)))


def symbol(spec: GridSpec, m: MultiplierSpec) -> np.ndarray:
    """Complex symbol on the full FFT grid; zero at the origin and odd parts zero at Nyquist."""
    freqs = frequencies(spec)
    grids = np.meshgrid(*freqs, indexing="ij")
    xis, tau = grids[:-1], grids[-1]
    nyq = np.meshgrid(*[_nyquist_mask(n) for n in spec.counts], indexing="ij")
    size = parabolic_size(xis, tau, m.norm)
    origin = size == 0
    safe = np.where(origin, 1.0, size)
    nax = spec.n_minus_1 + 1
    if m.kind == "D_alpha_time":
        s = np.abs(tau) ** m.alpha + 0j
    elif m.kind == "D_parabolic":
        s = size + 0j
    elif m.kind == "Dn_half":
        s = np.where(nyq[-1], 0, 1j * tau / safe)
    elif m.kind == "partial":
        if m.j > nax:
            raise ValueError("axis out of range")
        k = m.j - 1
        s = np.where(nyq[k], 0, 1j * grids[k]) + 0j
    else:
        if m.j > nax:
            raise ValueError(f"Riesz index must be at most {nax}")
        if m.j < nax:
            k = m.j - 1
            s = np.where(nyq[k], 0, -1j * xis[k] / safe)
        else:
            s = np.where(nyq[-1], 0, -1j * tau / (safe * safe))
    s = np.where(origin, 0, s)
    return s


def _require_periodic(f: ScalarField):
    if not f.periodic:
        raise NonPeriodicError("Fourier operators need a periodic field; apply taper_window first")


def apply_symbol(f: ScalarField, s: np.ndarray) -> ScalarField:
    _require_periodic(f)
    spec_hat = np.fft.fftn(f.values)
    out = np.fft.ifftn(spec_hat * s)
    if not np.all(np.isfinite(out)):
        raise FloatingPointError("non-finite values in transform")
    return f.replace(out.real.copy())


def apply_multiplier(f: ScalarField, m: MultiplierSpec) -> ScalarField:
    return apply_symbol(f, symbol(f.spec, m))


def taper_window(f: ScalarField, fraction: float = 0.1, detrend: bool = True) -> ScalarField:
    """Periodic surrogate of a non-periodic field.

    The affine-in-x part (slope from the end columns) is removed first because
    every parabolic multiplier kills it; the remainder is multiplied by a
    smooth taper that falls to zero over the outer ``fraction`` of each axis.
    """
    v = np.array(f.values, dtype=float)
    if detrend:
        for k in range(f.spec.n_minus_1):
            x = f.spec.axis(k)
            first = np.take(v, [0], axis=k)
            last = np.take(v, [-1], axis=k)
            slope = (last - first) / (x[-1] - x[0])
            shape = [1] * v.ndim
            shape[k] = -1
            v = v - slope * (x - x[0]).reshape(shape) - first
    for k, n in enumerate(f.spec.counts):
        w = _taper(n, fraction)
        shape = [1] * v.ndim
        shape[k] = -1
        v = v * w.reshape(shape)
    return f.replace(v, periodic=True)


def _taper(n: int, fraction: float) -> np.ndarray:
    s = (np.arange(n) + 0.5) / n
    edge = max(fraction, 1e-12)
    u = np.clip(np.minimum(s, 1 - s) / edge, 0, 1)
    return u * u * u * (10 - 15 * u + 6 * u * u)


def riesz_decomposition_residual(f: ScalarField, norm: str = "smooth") -> tuple:
    """Relative L2 residual of D f - sum_j R_j D_j f.  Returns (value, flagged)."""
    _require_periodic(f)
    spec = f.spec
    nax = spec.n_minus_1 + 1
    fh = np.fft.fftn(f.values)
    D = symbol(spec, MultiplierSpec("D_parabolic", norm=norm))
    total = np.zeros_like(fh)
    for j in range(1, nax + 1):
        R = symbol(spec, MultiplierSpec("Riesz", j=j, norm=norm))
        if j < nax:
            Dj = symbol(spec, MultiplierSpec("partial", j=j))
        else:
            Dj = symbol(spec, MultiplierSpec("Dn_half", norm=norm))
        total += R * (Dj * fh)
    lhs = np.fft.ifftn(D * fh).real
    rhs = np.fft.ifftn(total).real
    num = float(np.linalg.norm(lhs - rhs))
    den = float(np.linalg.norm(lhs))
    if den == 0.0:
        return num, True
    return num / den, False


# ---------------------------------------------------------------- pointwise operator

def half_derivative_weights(n_t: int, dt: float, images: int = 3) -> np.ndarray:
    """Periodised kernel weights w_j for lags j = 0..n_t-1 (w_0 excludes the own cell).

    Images beyond ``images`` periods are added as a constant far-field weight,
    which is exact to second order in the ratio of lag to distance.
    """
    T = n_t * dt
    lag = np.arange(n_t) * dt
    w = np.zeros(n_t)
    for m in range(-images, images + 1):
        d = np.abs(lag + m * T)
        with np.errstate(divide="ignore"):
            w += np.where(d > 0.5 * dt, d ** -1.5, 0.0)
    tail = 2.0 * T ** -1.5 * float(special.zeta(1.5, images + 1))
    return (w + tail) * dt


def pointwise_half_time_derivative(f: ScalarField, c_n: float, images: int = 3) -> ScalarField:
    """c_n * integral of (f(s) - f(t)) / |s - t|^(3/2) ds, periodic in t."""
    n_t = f.spec.counts[-1]
    w = half_derivative_weights(n_t, f.spec.dt, images)
    kern = np.roll(w, n_t // 2)
    summed = ndimage.correlate1d(f.values, kern, axis=-1, mode="wrap")
    out = summed - w.sum() * f.values
    return f.replace(c_n * out)


def _time_line(n_t: int, dt: float) -> GridSpec:
    return GridSpec(1, math.sqrt(dt), (0.0, 0.0), (4, n_t))


def calibrate_cn(grid: GridSpec, harmonics=(1, 2, 3, 4), images: int = 3) -> float:
    """Least-squares constant matching the pointwise operator to |tau|^(1/2)."""
    n_t = grid.counts[-1]
    if 2 * max(harmonics) >= n_t:
        raise CalibrationError("harmonics alias on this time grid")
    spec = _time_line(n_t, grid.dt)
    t = spec.axis(1)
    T = n_t * grid.dt
    num = den = 0.0
    for k in harmonics:
        f = ScalarField(spec, np.tile(np.cos(2 * np.pi * k * t / T), (4, 1)), periodic=True)
        p = pointwise_half_time_derivative(f, 1.0, images).values
        q = apply_multiplier(f, MultiplierSpec("D_alpha_time", alpha=0.5)).values
        num += float((p * q).sum())
        den += float((p * p).sum())
    if den == 0:
        raise CalibrationError("degenerate calibration basis")
    return num / den


ANALYTIC_CN = -1.0 / (2.0 * math.sqrt(2.0 * math.pi))


def relative_l2(a: np.ndarray, b: np.ndarray) -> float:
    d = float(np.linalg.norm(b))
    return float(np.linalg.norm(a - b)) / d if d else float(np.linalg.norm(a - b))
