import math

import numpy as np
import pytest

import dlsctl


def test_dls_solve_matches_normal_equations():
    rng = np.random.default_rng(3)
    E = rng.uniform(-1, 1, 3)
    A = rng.uniform(-1, 1, (3, 2))
    w = np.array([1.0, 0.5, 2.0])
    lam = np.array([0.3, 0.3])
    B = np.array([0.1, -0.2])
    C = np.eye(2)
    du = dlsctl.dls_solve(E, A, w, lam, B, C)
    W = np.diag(w)
    L = np.diag(lam)
    oracle = np.linalg.solve(A.T @ W @ A + C.T @ L @ C, A.T @ W @ E - C.T @ L @ B)
    np.testing.assert_allclose(du, oracle, rtol=1e-12, atol=1e-14)


def test_dls_solve_simple_single_control():
    du = dlsctl.dls_solve_simple(np.array([1.0]), np.array([[2.0]]), 1.0)
    assert du[0] == pytest.approx(2.0 / 5.0, rel=1e-15)


def test_control_update_closed_form():
    p = dlsctl.DuffingParams()
    cfg = dlsctl.DuffingControlConfig(lambda_=1.0)
    r = dlsctl.control_update(np.array([1.0, 0.1]), np.array([0.0, -0.2]), 0.025, p, cfg)
    f2 = dlsctl.duffing_rhs(np.array([1.0, 0.1]), np.array([0.0, -0.2]), 0.025, p)[1]
    j = -2 * p.omega * -0.2
    assert r["u_next"] == pytest.approx(0.025 - f2 * j / (j * j + 1.0), rel=1e-13)
    assert not r["fallback"]


def test_invalid_parameters_raise():
    with pytest.raises(dlsctl.ConfigurationError):
        dlsctl.DuffingParams(omega=0.0)
    with pytest.raises(dlsctl.UsageError):
        dlsctl.simulate_preset("fig9")


def test_preset_run_and_csv(tmp_path):
    assert dlsctl.preset_names() == ["fig1", "fig2", "fig3", "fig4", "fig5"]
    summary = dlsctl.run_preset("fig2", str(tmp_path))
    assert summary["suppression_ratio"] < 0.5
    traj = dlsctl.read_csv(str(tmp_path / "fig2.csv"))
    again = dlsctl.simulate_preset("fig2")
    np.testing.assert_array_equal(traj["u"], again["u"])
    assert traj["t"][-1] == pytest.approx(200.0)


def test_spectrum_at_origin():
    p = dlsctl.DuffingParams()
    report = dlsctl.map_jacobian_spectrum(p, dlsctl.DuffingControlConfig(lambda_=1.0), 0.01)
    q = sorted(abs(z) for z in report["eigenvalues"])
    assert q[0] <= 1e-8
    assert all(v > 1e-4 for v in q[1:])
    for root in dlsctl.char_poly_roots(dlsctl.DuffingParams(epsilon=0.0, zeta=0.0)):
        assert abs(abs(root) - 1.0) <= 1e-10
    assert dlsctl.q_estimate(1.0, 0.3, 0.0) == -1.0
    assert math.isclose(dlsctl.q_estimate(1.0, 1.0, 4.0), -0.5)


def test_compare_identical_runs():
    a = dlsctl.simulate_preset("fig2", t_end=20.0)
    c = dlsctl.compare_lambda_h(a, a)
    assert c["relative_rms"] == 0.0
