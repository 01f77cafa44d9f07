import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from parabolic_lab import extension as ext
from parabolic_lab.corpus import SurfaceMember, equivalence_corpus
from parabolic_lab.grid import GridSpec, ScalarField
from parabolic_lab.suites import EXT_DEFAULTS, _extension_input, run_extension

H = 1 / 32


def box(fn, h=H, half_width=2.5, half_time=0.0625):
    spec = GridSpec(1, h, (-half_width, -half_time), (int(2 * half_width / h), int(round(2 * half_time / h ** 2))))
    return ScalarField.from_function(spec, fn)


def test_reflection_invisible_for_time_constant():
    phi = box(lambda x, t: np.sin(x) + 0 * t)
    tiled = ext.reflect_tile_time(phi, 0.125, periods=2)
    assert np.array_equal(tiled.values, np.repeat(phi.values[:, :1], tiled.values.shape[1], axis=1))


def test_reflection_of_t_is_a_tent():
    r = 0.125
    phi = box(lambda x, t: t + 0 * x)
    tiled = ext.reflect_tile_time(phi, r, periods=2)
    row = tiled.values[0]
    n = tiled.meta["time_period_cells"]
    assert row.max() == pytest.approx(r * r - 0.5 * H * H)
    # period 4 r^2, even about t = r^2: no jump across the seam
    assert np.array_equal(row[:n], row[n:2 * n])
    assert np.array_equal(row[: n // 2], row[n // 2:n][::-1])


def test_cutoff_values():
    cfg = ext.ExtensionConfig(0.125, 0.3)
    x = np.linspace(-2, 2, 4001)
    rho = ext.build_cutoff(cfg, x)
    assert np.all(rho[np.abs(x) < cfg.r] == 1.0)
    assert np.all(rho[np.abs(x) >= 2 * cfg.R] == 0.0)
    slope = np.abs(np.diff(rho) / np.diff(x)).max()
    assert slope <= 1.875 / (2 * cfg.R - cfg.r) + 1e-6


@pytest.mark.parametrize("eta, k", [(1.0, 0), (0.5, 1), (0.3, 2), (0.25, 2), (0.01, 3), (0.0, 3)])
def test_doubling_count(eta, k):
    cfg = ext.ExtensionConfig(0.125, eta)
    assert cfg.k == k
    if 0 < eta < 1 and k < cfg.k_max:
        assert cfg.R * eta / 2 < cfg.r <= cfg.R * eta


@settings(max_examples=10)
@given(st.floats(-0.5, 0.5), st.floats(-1, 1), st.floats(0.0, 0.5))
def test_affine_extends_exactly(a, b, eta):
    phi = box(lambda x, t: a * x + b + 0 * t)
    Phi = ext.extend(phi, ext.ExtensionConfig(0.125, eta))
    X, _ = Phi.spec.mesh()
    assert np.abs(Phi.values - (a * X + b)).max() <= 1e-12


def test_zero_stays_zero():
    phi = box(lambda x, t: 0 * x)
    assert not ext.extend(phi, ext.ExtensionConfig(0.125, 0.2)).values.any()


@pytest.mark.parametrize("mem", equivalence_corpus(2), ids=lambda m: m.name)
def test_bit_exact_on_cube(mem):
    row = run_extension(mem, 64, dict(EXT_DEFAULTS))
    assert row["exact_on_cube"] is True
    assert np.isfinite(row["grad_ratio"]) and np.isfinite(row["time_ratio"])


def test_time_ratio_roughly_scale_invariant():
    base = next(m for m in equivalence_corpus(2) if m.name == "rough_time")
    c = dict(EXT_DEFAULTS)
    a = run_extension(base, 64, c)["time_ratio"]
    b = run_extension(base.scaled(0.5), 64, c)["time_ratio"]
    assert b == pytest.approx(a, rel=0.2)


def test_unaligned_cube_rejected():
    phi = box(lambda x, t: x)
    with pytest.raises(ext.ExtensionConfigError):
        ext.extend(phi, ext.ExtensionConfig(0.1, 0.5))
    with pytest.raises(ext.ExtensionConfigError):
        ext.extend(phi, ext.ExtensionConfig(0.125, 0.0, center=(2.4, 0.0)))


def test_small_cube_keeps_lipschitz_constant():
    mem = SurfaceMember("s", "smooth", {"ax": 0.1})
    phi = _extension_input(mem, H, EXT_DEFAULTS)
    cfg = ext.ExtensionConfig(1 / 32, 0.5, k_max=1)
    rep = ext.verify_extension(phi, ext.extend(phi, cfg), cfg)
    assert rep.lip_ok and rep.exact_on_cube
