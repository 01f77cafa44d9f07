import numpy as np
import pytest
from hypothesis import given, strategies as st

from parabolic_lab.bmo import (
    adjacent_average_gap, bmo_norm, dist_to_equicontinuous, dyadic_bmo_norm, jones_gap_check,
    stein_product_check, strichartz_functional,
)
from parabolic_lab.grid import GridSpec, ParabolicCube, ScalarField


def box(d=1.0, h=1 / 8):
    return GridSpec.cube_box(d, h)


def brute_force_sup(f):
    """Mean oscillation over every axis-aligned parabolic cube of the grid, by direct loops."""
    v = f.values
    nx, nt = v.shape
    best = 0.0
    for m in range(1, nx // 2 + 1):
        if 2 * m * m > nt:
            break
        for i in range(nx - 2 * m + 1):
            for k in range(nt - 2 * m * m + 1):
                blk = v[i:i + 2 * m, k:k + 2 * m * m]
                best = max(best, float(np.abs(blk - blk.mean()).mean()))
    return best


def test_constant_is_invisible():
    f = ScalarField(box(), np.full(box().counts, 7.0))
    assert bmo_norm(f).norm == 0.0
    assert dyadic_bmo_norm(f).norm == 0.0
    assert adjacent_average_gap(f) == 0.0
    assert strichartz_functional(f) == 0.0


@pytest.mark.parametrize("h", [1 / 8, 1 / 16])
def test_x_has_half_radius(h):
    f = ScalarField.from_function(box(1.0, h), lambda x, t: x)
    assert bmo_norm(f).norm == pytest.approx(0.5, abs=2 * h)


def test_sign_matches_exhaustive_scan():
    f = ScalarField.from_function(box(0.5, 1 / 8), lambda x, t: np.sign(x))
    assert bmo_norm(f).norm == pytest.approx(brute_force_sup(f), abs=1e-15)
    assert dyadic_bmo_norm(f).norm == pytest.approx(brute_force_sup(f), abs=1e-15)


@given(st.integers(0, 2 ** 31 - 1))
def test_dyadic_below_sliding(seed):
    rng = np.random.default_rng(seed)
    spec = box(0.5, 1 / 8)
    f = ScalarField(spec, rng.standard_normal(spec.counts))
    assert dyadic_bmo_norm(f).norm <= bmo_norm(f).norm + 1e-15


@given(st.integers(0, 2 ** 31 - 1), st.floats(-5, 5), st.sampled_from([-2.0, 0.5, 3.0]))
def test_shift_and_scale(seed, c, a):
    rng = np.random.default_rng(seed)
    spec = box(0.5, 1 / 8)
    f = ScalarField(spec, rng.integers(-512, 512, spec.counts) / 1024.0)
    base = bmo_norm(f).norm
    assert bmo_norm(f + c).norm == pytest.approx(base, abs=1e-12)
    assert bmo_norm(f * a).norm == pytest.approx(abs(a) * base, rel=1e-12)


def test_adjacent_gaps():
    spec = box(1.0, 1 / 8)
    assert adjacent_average_gap(ScalarField.from_function(spec, lambda x, t: np.sign(x))) == 2.0
    # averages over neighbouring cubes of radius 1/2 are their centres
    assert adjacent_average_gap(ScalarField.from_function(spec, lambda x, t: x)) == pytest.approx(1.0)


def test_strichartz_refinement():
    vals = [strichartz_functional(ScalarField.from_function(box(1.0, h), lambda x, t: x)) for h in (1 / 8, 1 / 16)]
    assert vals[0] > 0 and abs(vals[1] / vals[0] - 1) < 0.1


def test_distance_zero_inside_class():
    f = ScalarField.from_function(box(0.5, 1 / 8), lambda x, t: 0.1 * x)
    val, fallback, _ = dist_to_equicontinuous(f, lambda s: s)
    assert val == pytest.approx(0.0, abs=1e-14) and not fallback


def test_jones_same_centre():
    spec = box(1.0, 1 / 8)
    f = ScalarField.from_function(spec, lambda x, t: x)
    Q1 = ParabolicCube(spec.center(), 1.0)
    Q0 = ParabolicCube(spec.center(), 0.5)
    ratio, trivial = jones_gap_check(f, Q0, Q1)
    assert ratio == pytest.approx(0.0, abs=1e-14) and not trivial
    assert jones_gap_check(f.replace(np.ones(spec.counts)), Q0, Q1)[1]


def test_jones_chain_bounded():
    spec = box(1.0, 1 / 64)
    f = ScalarField.from_function(spec, lambda x, t: np.sign(x - 1e-9))
    ratios = []
    for g in range(6):
        r = 2.0 ** -g
        Q = ParabolicCube(spec.center(), r)
        ratios.append(jones_gap_check(f, ParabolicCube(Q.center, r / 2), Q)[0])
    assert max(ratios) < 2.0


@given(st.integers(0, 2 ** 31 - 1))
def test_product_inequality(seed):
    rng = np.random.default_rng(seed)
    spec = box(1.0, 1 / 8)
    g = ScalarField(spec, rng.standard_normal(spec.counts))
    h = ScalarField(spec, rng.standard_normal(spec.counts))
    Q = ParabolicCube(spec.center(), 0.5)
    assert stein_product_check(g, h, Q) <= 1e-10
    ones = g.replace(np.ones(spec.counts))
    assert stein_product_check(g, ones, Q) <= 0
    assert stein_product_check(ones, h, Q) <= 0
