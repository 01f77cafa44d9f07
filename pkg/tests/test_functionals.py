import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from parabolic_lab import functionals as fn
from parabolic_lab.grid import GridSpec, ScalarField
from parabolic_lab.solver import SolutionField, SolverConfig


def strip(values, h=1 / 8):
    n0p, nx, nt = values.shape
    cfg = SolverConfig(h, n0p - 1, nx, nt)
    return SolutionField(values, values[0], cfg)


def random_strip(seed, shape=(7, 8, 12)):
    return strip(np.random.default_rng(seed).random(shape))


def square_function_loops(u, a):
    """S_2 by explicit loops: periodic in x, clipped in t, strict cone, level 0 excluded."""
    U, h, dt = u.u, u.config.h, u.config.dt
    n0p, nx, nt = U.shape
    g0 = np.gradient(U, h, axis=0)
    gx = np.empty_like(U)
    for j in range(nx):
        gx[:, j] = (U[:, (j + 1) % nx] - U[:, (j - 1) % nx]) / (2 * h)
    out = np.zeros((nx, nt))
    for j in range(nx):
        for k in range(nt):
            s = 0.0
            for i in range(1, n0p):
                for jj in range(nx):
                    dj = min((jj - j) % nx, (j - jj) % nx)
                    for kk in range(nt):
                        if dj + math.sqrt(abs(kk - k)) < a * i:
                            s += (g0[i, jj, kk] ** 2 + gx[i, jj, kk] ** 2) / (i * h) ** 2
            out[j, k] = math.sqrt(s * h * h * dt)
    return out


@pytest.mark.parametrize("a", [0.5, 1.0])
def test_square_function_matches_loops(a):
    u = random_strip(11, (5, 12, 10))
    S = fn.p_square_function(u, fn.ConeSpec(a), 2.0).values
    assert np.abs(S - square_function_loops(u, a)).max() <= 1e-12 * S.max()


def test_constants():
    u = strip(np.full((7, 8, 12), -1.5))
    cone = fn.ConeSpec(1.0)
    assert np.all(fn.nontangential_max(u, cone).values == 1.5)
    assert not fn.p_square_function(u, cone, 2.0).values.any()
    assert not fn.p_area_function(u, cone, 1.5).values.any()


def test_area_vanishes_for_time_constant():
    x0 = np.arange(7)[:, None, None] * 0.125
    u = strip(np.broadcast_to(np.sin(3 * x0) + np.zeros((1, 8, 1)), (7, 8, 12)).copy())
    assert not fn.p_area_function(u, fn.ConeSpec(1.0), 2.0).values.any()


def test_truncated_max_of_height():
    h = 1 / 8
    x0 = np.arange(9)[:, None, None] * h
    u = strip(np.broadcast_to(x0, (9, 8, 16)).copy(), h)
    N = fn.nontangential_max(u, fn.ConeSpec(1.0, truncation=0.5))
    assert np.all(N.values == 0.5)


@given(st.integers(0, 2 ** 31 - 1), st.floats(0.25, 2.0), st.floats(0.0, 1.0))
def test_aperture_monotone(seed, a, extra):
    u = random_strip(seed)
    b = a * (1 + extra)
    assert np.all(fn.nontangential_max(u, fn.ConeSpec(a)).values <= fn.nontangential_max(u, fn.ConeSpec(b)).values)
    assert np.all(fn.p_square_function(u, fn.ConeSpec(a), 1.5).values
                  <= fn.p_square_function(u, fn.ConeSpec(b), 1.5).values + 1e-15)


def test_fubini_bracket():
    ratios = []
    for seed in range(4):
        u = random_strip(seed, (9, 16, 24))
        lhs = fn.boundary_lp_norm(fn.p_square_function(u, fn.ConeSpec(1.0), 2.0), 2.0) ** 2
        rhs = fn.strip_integral(u, fn.square_density(u, 2.0), 1 - fn.N_STRIP)
        ratios.append(lhs / rhs)
    assert all(0 < r <= fn.cone_volume_factor(1.0) for r in ratios)


def test_bad_inputs():
    with pytest.raises(ValueError):
        fn.ConeSpec(0.0)
    with pytest.raises(ValueError):
        fn.p_square_function(random_strip(0), fn.ConeSpec(1.0), 1.0)
    with pytest.raises(ValueError):
        fn.ConeSpec(1.0, truncation=10.0).radii(5, 0.125)


def test_carleson_zero_and_height_density():
    h = 1 / 16
    n0, nx, nt = 32, 64, 512
    assert fn.carleson_norm_measure(np.zeros((n0 + 1, nx, nt)), h, 1.0).norm == 0.0
    x0 = np.arange(n0 + 1)[:, None, None] * h
    rep = fn.carleson_norm_measure(np.broadcast_to(x0, (n0 + 1, nx, nt)), h, 1.0)
    m = rep.argmax["m"]
    # mu(T(Q_r)) = 2 r^5 for density x0, so the profile is 2 r^2
    assert rep.norm == pytest.approx(2 * (m * h) ** 2, rel=1e-12)
    assert rep.norm == pytest.approx(2.0 * 1.0 ** 2, rel=0.01)
    with pytest.raises(ValueError):
        fn.carleson_norm_measure(-np.ones((3, 4, 4)), h, 1.0)


def test_carleson_against_max_for_constants():
    h = 1 / 8
    x0 = np.arange(9)[:, None, None] * h
    dens = np.broadcast_to(x0, (9, 16, 64)).copy()
    u = strip(np.ones((9, 16, 64)), h)
    chk = fn.carleson_vs_ntmax_check(dens, u, fn.ConeSpec(1.0), 2.0)
    assert not chk.flagged and chk.ratio <= 1.0
    zero = fn.carleson_vs_ntmax_check(dens, strip(np.zeros((9, 16, 64)), h), fn.ConeSpec(1.0), 2.0)
    assert zero.flagged and zero.ratio == 0.0


@pytest.mark.parametrize("a", [0.5, 1.0])
def test_whitney_cover(a):
    cone = fn.ConeSpec(a, truncation=1.0)
    cubes = fn.whitney_cover(cone, y_min=0.25, strip_height=4.0)
    rep = fn.verify_whitney(cubes, cone, (0.0, 0.0), 0.25, 4.0, n_samples=4000)
    assert rep.ok()
    assert 0 < rep.max_overlap < len(cubes)


def test_whitney_ratio_values():
    assert fn.whitney_ratio(1.0) == 8
    assert fn.whitney_ratio(2.0) == 8
    assert fn.whitney_ratio(0.5) == 16


def test_boundary_norms():
    spec = GridSpec(1, 1 / 8, (0.0, 0.0), (8, 64))
    one = ScalarField(spec, np.ones(spec.counts))
    for p in (1.0, 1.5, 3.0):
        assert fn.boundary_lp_norm(one, p) == pytest.approx(1.0)
    g = ScalarField(spec, np.random.default_rng(0).standard_normal(spec.counts))
    assert fn.boundary_lp_norm(g * -3.0, 2.0) == pytest.approx(3 * fn.boundary_lp_norm(g, 2.0))
    a = 0.75
    plane = ScalarField.from_function(spec, lambda x, t: a * x)
    for p in (1.0, 2.0, 4.0):
        ratio = fn.boundary_lp_norm(g, p, plane) / fn.boundary_lp_norm(g, p)
        assert ratio == pytest.approx(math.sqrt(1 + a * a) ** (1 / p), rel=1e-12)
    assert fn.boundary_sup(g * -2.0) == pytest.approx(2 * np.abs(g.values).max())
