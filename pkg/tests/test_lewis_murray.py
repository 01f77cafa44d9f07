import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from parabolic_lab import lewis_murray as lm
from parabolic_lab.corpus import SurfaceMember, equivalence_corpus
from parabolic_lab.grid import GridSpec, ScalarField
from parabolic_lab.suites import _equiv_field

R = 0.125


def member(name):
    return next(m for m in equivalence_corpus(2) if m.name == name)


def square(h):
    spec = GridSpec.cube_box(1.0, h)
    return ScalarField.from_function(spec, lambda x, t: x * x)


def test_affine_member_all_zero():
    rep = lm.equivalence_report(_equiv_field(member("affine_up"), 1 / 32, R), R, with_alt=True)
    assert not rep.failures
    assert rep.trivial() and rep.B_vi_grad_alt == 0.0
    assert np.isnan(rep.max_ratio())


def test_time_only_has_no_spatial_part():
    spec = GridSpec.cube_box(1.0, 1 / 16)
    g = ScalarField.from_function(spec, lambda x, t: np.cos(3 * t) + 0 * x)
    assert lm.functional_second_diff_space(g, 0.5) == pytest.approx(0.0, abs=1e-20)
    assert lm.functional_avg_gradient(g, 0.5) == pytest.approx(0.0, abs=1e-20)


def test_time_quotient_linear_in_t():
    errs = []
    for h in (1 / 16, 1 / 32):
        f = ScalarField.from_function(GridSpec.cube_box(1.0, h), lambda x, t: 0.3 * t)
        errs.append(abs(lm.functional_time_quotient(f, 0.25) - 2 * 0.25 ** 2 * 0.09))
    assert errs[1] < errs[0] and errs[1] <= 0.02 * 2 * 0.25 ** 2 * 0.09
    flat = ScalarField.from_function(GridSpec.cube_box(1.0, 1 / 16), lambda x, t: x + 0 * t)
    assert lm.functional_time_quotient(flat) == 0.0


@pytest.mark.parametrize("fn", [lm.functional_second_diff_spacetime, lm.functional_second_diff_space,
                                lm.functional_avg_gradient])
def test_square_positive_and_stable(fn):
    a, b = fn(square(1 / 16), 0.25), fn(square(1 / 32), 0.25)
    assert a > 0 and abs(b / a - 1) < 0.1


def test_alt_average_comparable():
    vals = []
    for name in ("smooth_sin", "rough_mid", "rough_space"):
        phi = _equiv_field(member(name), 1 / 32, R)
        vals.append(lm.functional_avg_gradient_alt(phi, R) / lm.functional_avg_gradient(phi, R))
    assert all(0 < v < np.inf for v in vals)
    assert max(vals) / min(vals) < 10


@settings(max_examples=5)
@given(st.sampled_from([0.5, 2.0, 3.0]))
def test_quadratic_homogeneity(alpha):
    base = member("rough_mid")
    r1 = lm.equivalence_report(_equiv_field(base, 1 / 16, R), R).combined()
    r2 = lm.equivalence_report(_equiv_field(base.scaled(alpha), 1 / 16, R), R).combined()
    for k in r1:
        assert r2[k] == pytest.approx(alpha ** 2 * r1[k], rel=1e-9)


def test_margin_error_when_no_cube_fits():
    spec = GridSpec(1, 0.5, (0, 0), (4, 4))
    with pytest.raises(lm.MarginError):
        lm.dyadic_cells(spec, 0.1)


def test_eta_zero_for_affine_and_positive_for_rough():
    flat = _equiv_field(SurfaceMember("a", "affine", {"slope": 0.3, "offset": 0.0}), 1 / 32, R)
    assert lm.measure_eta(flat, R) == pytest.approx(0.0, abs=1e-12)
    assert lm.measure_eta(member("rough_mid").field(1 / 32), R) > 0
