import numpy as np
import pytest
from hypothesis import given, strategies as st

from parabolic_lab import _pykernels, kernels

try:
    from parabolic_lab import _ckernels
except ImportError:  # compiled module not built
    _ckernels = None

needs_c = pytest.mark.skipif(_ckernels is None, reason="compiled kernels not built")


def shell_args(seed, n=12, reach=3):
    rng = np.random.default_rng(seed)
    P = rng.standard_normal((n + 2 * reach, n + 2 * reach))
    stride = P.shape[1]
    offs, w, shell = [], [], []
    for dx in range(-reach, reach + 1):
        for dt in range(reach + 1):
            if dt == 0 and dx <= 0:
                continue
            offs.append(dx * stride + dt)
            w.append(rng.random())
            shell.append(max(abs(dx), dt) - 1)
    gx, gt = np.meshgrid(np.arange(n) + reach, np.arange(n) + reach, indexing="ij")
    centers = (gx * stride + gt).ravel().astype(np.intp)
    return P.ravel(), centers, np.array(offs, np.intp), np.array(w), np.array(shell, np.intp), reach


def test_backend_reported():
    assert kernels.BACKEND in ("cython", "python")


def test_shell_accumulate_by_hand():
    P = np.array([0.0, 1.0, 4.0, 9.0, 16.0])
    out = _pykernels.shell_accumulate(P, np.array([2]), np.array([1, 2]), np.array([1.0, 0.5]),
                                      np.array([0, 1]), 2)
    assert out[:, 0].tolist() == [(1 - 8 + 9) ** 2, 0.5 * (0 - 8 + 16) ** 2]


def test_cone_reduce_sum_by_hand():
    W = np.zeros((2, 4, 5))
    W[1] = 1.0
    out = _pykernels.cone_reduce(W, np.array([0.0, 1.5]), True, False)
    # radius 1.5: lateral offsets {-1, 0, 1}; |dk| < 2.25 at dy = 0, |dk| < 0.25 at |dy| = 1
    expect = np.array([5, 6, 7, 6, 5], float)
    assert np.array_equal(out, np.tile(expect, (4, 1)))


@needs_c
@given(st.integers(0, 2 ** 31 - 1))
def test_shell_accumulate_backends_agree(seed):
    args = shell_args(seed)
    assert np.array_equal(_pykernels.shell_accumulate(*args), _ckernels.shell_accumulate(*args))


@needs_c
@given(st.integers(0, 2 ** 31 - 1), st.booleans(), st.booleans(), st.floats(0.1, 3.0))
def test_cone_reduce_backends_agree(seed, periodic, use_max, a):
    rng = np.random.default_rng(seed)
    W = rng.random((6, 9, 11))
    R = a * np.arange(6, dtype=float)
    ref = _pykernels.cone_reduce(W, R, periodic, use_max)
    got = _ckernels.cone_reduce(W, R, periodic, use_max)
    assert np.allclose(got, ref, rtol=1e-12, atol=1e-14)
