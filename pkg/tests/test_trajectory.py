import numpy as np
import pytest

from airship_smc import CustomTrajectory, LineTrajectory, TanhSTrajectory

# frozen from a 50-digit scalar evaluation of the closed forms at t = 40
Y_AT_40 = 0.24876368842168262
Z_AT_40 = -0.10012036729144506


def test_line_trajectory():
    traj = LineTrajectory(speed=0.1)
    assert np.allclose(traj.position(0.0), 0.0)
    assert np.allclose(traj.position(25.0), [2.5, 0, 0])
    assert np.allclose(traj.velocity(3.0), [0.1, 0, 0])
    assert np.allclose(traj.acceleration(3.0), 0.0)


def test_tanh_s_starts_at_origin():
    p0 = TanhSTrajectory().position(0.0)
    assert np.allclose(p0, 0.0, atol=1e-15)


def test_tanh_s_frozen_values():
    p = TanhSTrajectory().position(40.0)
    assert p[0] == pytest.approx(2.0, abs=1e-15)
    assert p[1] == pytest.approx(Y_AT_40, abs=1e-15)
    assert p[2] == pytest.approx(Z_AT_40, abs=1e-15)


def test_tanh_s_derivatives_match_finite_differences():
    traj = TanhSTrajectory()
    h = 1e-6
    for t in (0.0, 7.3, 40.0, 123.4):
        fd_v = (traj.position(t + h) - traj.position(t - h)) / (2 * h)
        assert np.abs(traj.velocity(t) - fd_v).max() < 1e-8
        fd_a = (traj.velocity(t + h) - traj.velocity(t - h)) / (2 * h)
        assert np.abs(traj.acceleration(t) - fd_a).max() < 1e-8


def test_tanh_s_rate_bounds():
    # |vx| = 0.05, |vy| <= 0.25 * 0.075, |vz| <= 0.1 * 0.0393
    traj = TanhSTrajectory()
    ts = np.linspace(0.0, 200.0, 4001)
    v = np.array([traj.velocity(t) for t in ts])
    assert np.allclose(v[:, 0], 0.05)
    assert np.abs(v[:, 1]).max() <= 0.01875 + 1e-15
    assert np.abs(v[:, 2]).max() <= 0.00393 + 1e-15


def test_custom_trajectory_fd_fallback():
    traj = CustomTrajectory(position_fn=lambda t: np.array([t * t, 0.0, 1.0]))
    assert np.allclose(traj.velocity(2.0), [4.0, 0, 0], atol=1e-5)
    assert np.allclose(traj.acceleration(2.0), [2.0, 0, 0], atol=1e-3)
