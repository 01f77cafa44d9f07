import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from parabolic_lab import pullback as pb
from parabolic_lab.corpus import SurfaceMember, equivalence_corpus
from parabolic_lab.grid import GridSpec, ScalarField, lip_constant_estimate

H = 1 / 32


def periodic(fn, h=H):
    spec = GridSpec(1, h, (-1.0, 0.0), (int(2 / h), int(round(0.25 / h ** 2))))
    return ScalarField.from_function(spec, fn, periodic=True)


def flat(fn, h=H, nx=64, nt=256):
    spec = GridSpec(1, h, (-1.0, 0.0), (nx, nt))
    return ScalarField.from_function(spec, fn)


@pytest.mark.parametrize("lam", [0.25, 0.5, 1.0])
def test_kernel_mass_even_support(lam):
    P = pb.mollifier_kernel(GridSpec(1, 1 / 16, (0, 0), (4, 4)), lam)
    v = P.values
    assert abs(v.sum() * P.spec.cell_volume() - 1) <= 1e-8
    assert np.array_equal(v, v[::-1]) and np.array_equal(v, v[:, ::-1])
    X, T = P.spec.mesh()
    assert not v[(np.abs(X) > lam + P.spec.h) | (np.abs(T) > lam * lam + P.spec.dt)].any()


@settings(max_examples=10)
@given(st.floats(-1, 1), st.floats(-1, 1), st.floats(0.02, 0.2))
def test_mollify_exact_on_affine(a, b, gamma):
    phi = flat(lambda x, t: a * x + b + 0 * t)
    levels = [0.0, 0.25, 0.5]
    out = pb.vertical_mollify(phi, gamma, levels, margin=(8, 16))
    ref = phi.values[8:-8, 16:-16]
    assert np.abs(out - ref).max() <= 1e-12 * max(1, abs(a) + abs(b))


def test_margin_error():
    with pytest.raises(pb.MarginError):
        pb.vertical_mollify(flat(lambda x, t: x), 0.1, [1.0], margin=(1, 1))


def test_mollifier_error_bound():
    mem = next(m for m in equivalence_corpus(2) if m.name == "rough_mid")
    phi = mem.field(H)
    ell = lip_constant_estimate(phi)
    gamma = 0.1
    levels = np.array([0.0625, 0.125, 0.25])
    psi = pb.vertical_mollify(phi, gamma, levels)
    err = np.abs(psi - phi.values[None]).max(axis=(1, 2))
    assert np.all(err <= ell * (gamma * levels + gamma * levels))
    assert np.all(np.diff(err) >= 0) and err[-1] > 0


def test_map_is_identity_for_zero_surface():
    mp = pb.dkns_map(periodic(lambda x, t: 0 * x), [0.0, 0.1, 0.2])
    assert not mp.psi.any() and not mp.psi_x0.any() and mp.certificate == 1.0


def test_map_for_plane():
    a = 0.4
    phi = flat(lambda x, t: a * x + 0 * t)
    mp = pb.dkns_map(phi, [0.0, 0.1, 0.2, 0.3], gamma=0.1, margin=(4, 4))
    X = mp.spec.axis(0)[None, :, None]
    assert np.abs(mp.image_height() - (mp.x0[:, None, None] + a * X)).max() < 1e-12
    assert np.abs(mp.psi_x0).max() < 1e-12


def test_certificate_on_corpus():
    for mem in equivalence_corpus(2):
        if mem.kind == "affine":
            continue
        mp = pb.dkns_map(mem.field(H), np.arange(9) * H)
        assert mp.certificate >= 0.5


def test_identity_pullback_is_bit_equal():
    mp = pb.dkns_map(periodic(lambda x, t: 0 * x), [0.0, 0.1, 0.2])
    A = np.array([[1.5, 0.2], [0.2, 0.8]])
    B = np.array([0.3, -0.1])
    co = pb.pullback_coefficients(mp, A, B)
    assert np.array_equal(co.A_v, np.broadcast_to(A, co.A_v.shape))
    assert np.array_equal(co.B_v, np.broadcast_to(B, co.B_v.shape))


def test_plane_pullback_chain_rule():
    a = 0.4
    phi = flat(lambda x, t: a * x + 0 * t)
    mp = pb.dkns_map(phi, np.linspace(0, 0.3, 4), gamma=0.1, margin=(4, 4))
    co = pb.pullback_coefficients(mp, np.eye(2))
    # J^-1 = [[1, -a], [0, 1]]  =>  A^v = [[1 + a^2, -a], [-a, 1]]
    expect = np.array([[1 + a * a, -a], [-a, 1.0]])
    assert np.abs(co.A_v - expect).max() < 1e-12
    assert np.abs(co.B_v).max() < 1e-12


@pytest.mark.parametrize("case", [(0, 0, 1), (1, 0, 0), (0, 2, 0), (0, 3, 0)])
def test_lemma_quantities_vanish_on_planes(case):
    phi = periodic(lambda x, t: 0.25 + 0 * x)
    assert pb.lemmaA_carleson_norm(phi, *case, 1.0) == 0.0
    assert pb.lemmaA_pointwise_bound(phi, *case, 1.0, 0.1) == 0.0


def test_lemma_hypothesis_enforced():
    with pytest.raises(pb.HypothesisError):
        pb.lemmaA_carleson_norm(periodic(lambda x, t: 0 * x), 0, 1, 0, 1.0)


def test_lemma_scaling():
    base = SurfaceMember("w", "rough", {"K": 2, "amp_x": 0.02, "amp_t": 0.02})
    gamma = 0.1
    vals = [pb.lemmaA_carleson_norm(base.scaled(a).field(H), 0, 0, 1, 2.0, gamma=gamma) for a in (1, 2)]
    assert vals[1] == pytest.approx(4 * vals[0], rel=1e-9)
    eta = 0.05
    p = [pb.lemmaA_pointwise_bound(base.scaled(a).field(H), 1, 0, 0, 2.0, a * eta, gamma=gamma, lip=1.0)
         for a in (1, 2)]
    assert p[1] == pytest.approx(p[0], rel=1e-9)
