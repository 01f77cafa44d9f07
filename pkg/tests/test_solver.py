import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from parabolic_lab import solver as sv


def cfg(n=16, nt=20):
    return sv.SolverConfig(1 / n, n, 2 * n, nt)


def test_certificate_values():
    c = sv.validate_coefficients(np.eye(2), None, 1.0, 1.0)
    assert (c.lam, c.Lam) == (1.0, 1.0)
    c = sv.validate_coefficients(np.diag([2.0, 0.5]), None, 0.5, 2.0)
    assert (c.lam, c.Lam) == (0.5, 2.0)
    with pytest.raises(sv.CoefficientError):
        sv.validate_coefficients(np.diag([2.0, 0.5]), None, 1.0, 2.0)


def test_config_validation():
    with pytest.raises(ValueError):
        sv.SolverConfig(0.1, 8, 8, 8, theta=0.3)
    with pytest.raises(ValueError):
        sv.SolverConfig(0.1, 1, 8, 8)


def test_zero_data_zero_solution():
    c = cfg()
    sol = sv.solve_dirichlet(c, np.zeros((c.nx, c.nt)))
    assert not sol.u.any()


@pytest.mark.parametrize("case", [sv.heat_case(), sv.variable_case()], ids=lambda c: c.name)
def test_manufactured_order(case):
    out = sv.manufactured_error(case)
    assert out["min_order"] >= 1.0


def test_manufactured_zero_case():
    out = sv.manufactured_error(sv.zero_case(), levels=(8, 16))
    assert all(r["linf"] == 0.0 for r in out["rows"])


@settings(max_examples=15)
@given(st.integers(0, 2 ** 31 - 1))
def test_maximum_principle(seed):
    rng = np.random.default_rng(seed)
    c = sv.SolverConfig(1 / 8, 8, 16, 12, theta=1.0)
    f = rng.random((c.nx, c.nt))
    A = np.array([[1.2, 0.1], [0.1, 0.9]])
    u = sv.solve_dirichlet(c, f, A=A).u
    tol = 10 * c.tol
    assert u.min() >= min(f.min(), 0.0) - tol and u.max() <= max(f.max(), 0.0) + tol


def test_future_data_independence():
    rng = np.random.default_rng(3)
    c = cfg()
    assert sv.future_independence(c, rng.random((c.nx, c.nt)), 10) == 0.0


def test_batch_matches_single():
    rng = np.random.default_rng(4)
    c = cfg(8, 10)
    F = rng.random((3, c.nx, c.nt))
    batch = sv.solve_dirichlet(c, F).u
    for b in range(3):
        assert np.allclose(batch[b], sv.solve_dirichlet(c, F[b]).u, atol=1e-13)


def test_energy_ratios():
    c = sv.SolverConfig(1 / 32, 32, 32, 200)
    const = sv.SolutionField(np.full((33, 32, 200), 2.0), np.full((32, 200), 2.0), c)
    r1, r2 = sv.cacciopoli_ratio(const, (20, 10, 100), 2)
    assert np.isfinite(r1) and np.isfinite(r2) and r1 > 0
    zero = sv.SolutionField(np.zeros((33, 32, 200)), np.zeros((32, 200)), c)
    assert sv.cacciopoli_ratio(zero, (20, 10, 100), 2) == (0.0, 0.0)
    with pytest.raises(Exception):
        sv.cacciopoli_ratio(zero, (4, 10, 100), 2)
