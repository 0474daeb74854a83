"""Finite-volume validator: steady states, hand-checked step, speed fits."""

import numpy as np
import pytest

from nlburgers import cauchy as cy
from nlburgers import kernels as kk
from nlburgers import waves as wv
from nlburgers.cauchy import _explicit_update, _rusanov_flux_diff
from nlburgers.convolve import FullLineConvolver

EXP1 = kk.exponential_kernel(1.0)


class TestConfig:
    def test_invariants(self):
        with pytest.raises(ValueError):
            cy.SimConfig(a=1.0, b=-1.0, m=200, t_end=1.0, u_left=0, u_right=0)
        with pytest.raises(ValueError):
            cy.SimConfig(a=-1.0, b=1.0, m=64, t_end=1.0, u_left=0, u_right=0)
        with pytest.raises(ValueError):
            cy.SimConfig(a=-1.0, b=1.0, m=200, t_end=1.0, u_left=0, u_right=0,
                         cfl=1.5)
        with pytest.raises(ValueError):
            cy.SimConfig(a=-1.0, b=1.0, m=200, t_end=0.0, u_left=0, u_right=0)

    def test_centers(self):
        cfg = cy.SimConfig(a=0.0, b=1.0, m=128, t_end=1.0, u_left=0, u_right=0)
        x = cfg.centers()
        assert x[0] == pytest.approx(cfg.dx / 2)
        assert x[-1] == pytest.approx(1.0 - cfg.dx / 2)


class TestStep:
    def test_constant_steady_state(self):
        cfg = cy.SimConfig(a=-40.0, b=40.0, m=256, t_end=1.0,
                           u_left=3.0, u_right=3.0)
        state = cy.initial_state(cfg, 3.0)
        conv = FullLineConvolver(EXP1, state.x)
        for _ in range(100):
            state = cy.step(state, EXP1, cfg, conv)
        assert np.max(np.abs(state.u - 3.0)) <= 1e-12

    def test_five_cell_hand_computation(self):
        # independent scalar re-derivation of one forward-Euler/Rusanov step
        u = np.array([1.0, 0.8, 0.5, 0.1, -0.2])
        conv = np.array([0.9, 0.7, 0.45, 0.15, -0.1])
        u_left, u_right, dt, dx = 1.0, -0.2, 0.01, 0.1

        ext = [u_left, *u, u_right]
        flux = []
        for a, b in zip(ext[:-1], ext[1:]):
            flux.append(0.5 * (0.5 * a * a + 0.5 * b * b)
                        - 0.5 * max(abs(a), abs(b)) * (b - a))
        expected = [
            u[j] - dt / dx * (flux[j + 1] - flux[j]) + dt * (conv[j] - u[j])
            for j in range(5)
        ]
        got = _explicit_update(u, conv, dt, dx, u_left, u_right)
        np.testing.assert_allclose(got, expected, rtol=0, atol=1e-15)

    def test_cfl_dt(self):
        cfg = cy.SimConfig(a=-10.0, b=10.0, m=200, t_end=1.0,
                           u_left=2.0, u_right=0.0)
        state = cy.initial_state(
            cfg, lambda x: np.where(x < 0, 2.0, 0.0))
        assert cy.stable_dt(state.u, cfg) == pytest.approx(0.4 * cfg.dx / 2.0)
        tiny = cy.SimConfig(a=-10.0, b=10.0, m=200, t_end=1.0,
                            u_left=1e-12, u_right=1e-12, cfl=0.9)
        flat = cy.initial_state(tiny, 1e-12)
        assert cy.stable_dt(flat.u, tiny) == cy.DT_CAP

    def test_far_field_mismatch_rejected(self):
        cfg = cy.SimConfig(a=-10.0, b=10.0, m=200, t_end=1.0,
                           u_left=1.0, u_right=0.0)
        with pytest.raises(cy.SimulationError):
            cy.initial_state(cfg, 0.5)


class TestSimulate:
    def test_riemann_front_speed(self):
        cfg = cy.SimConfig(a=-30.0, b=30.0, m=600, t_end=3.0,
                           u_left=2.0, u_right=0.0, snapshot_interval=0.25)
        state = cy.initial_state(cfg, lambda x: np.where(x < 0, 2.0, 0.0))
        traj = cy.simulate(state, EXP1, cfg)
        fit = cy.measure_speed(traj, 1.0)
        assert fit.speed == pytest.approx(1.0, abs=0.05)

    def test_odd_symmetry_preserved(self):
        cfg = cy.SimConfig(a=-30.0, b=30.0, m=512, t_end=1.0,
                           u_left=1.0, u_right=-1.0)
        state = cy.initial_state(cfg, lambda x: -np.tanh(x))
        traj = cy.simulate(state, EXP1, cfg)
        u = traj.final.u
        assert np.max(np.abs(u + u[::-1])) <= 1e-10

    def test_conservation_window(self):
        cfg = cy.SimConfig(a=-30.0, b=30.0, m=512, t_end=1.0,
                           u_left=2.0, u_right=0.0)
        state = cy.initial_state(cfg, lambda x: 1.0 - np.tanh(x))
        conv = FullLineConvolver(EXP1, state.x)
        for _ in range(3):
            dt = cy.stable_dt(state.u, cfg)
            kstar = conv.apply(state.u, cfg.u_left, cfg.u_right)
            flux_diff = _rusanov_flux_diff(state.u, cfg.u_left, cfg.u_right)
            predicted = (-dt / cfg.dx * np.sum(flux_diff)
                         + dt * np.sum(kstar - state.u)) * cfg.dx
            new = cy.step(state, EXP1, cfg, conv, dt)
            change = np.sum(new.u - state.u) * cfg.dx
            assert abs(change - predicted) <= 10.0 * cfg.dx
            state = new

    def test_flat_data_stays_flat(self):
        cfg = cy.SimConfig(a=-30.0, b=30.0, m=256, t_end=1.0,
                           u_left=0.0, u_right=0.0)
        traj = cy.simulate(cy.initial_state(cfg, 0.0), EXP1, cfg)
        assert max(traj.max_slopes) == 0.0

    def test_update_magnitude_within_cfl_bound(self):
        cfg = cy.SimConfig(a=-30.0, b=30.0, m=400, t_end=0.5,
                           u_left=2.0, u_right=-2.0)
        state = cy.initial_state(cfg, lambda x: -2.0 * np.tanh(2.0 * x))
        conv = FullLineConvolver(EXP1, state.x)
        for _ in range(5):
            dt = cy.stable_dt(state.u, cfg)
            new = cy.step(state, EXP1, cfg, conv, dt)
            biggest = np.max(np.abs(new.u - state.u))
            cap = cfg.cfl * np.max(np.abs(state.u)) + dt * 2.0 * np.max(np.abs(state.u))
            assert biggest <= cap + 1e-12
            state = new


class TestMeasureSpeed:
    def make_ramp_trajectory(self, speed):
        cfg = cy.SimConfig(a=-20.0, b=20.0, m=400, t_end=2.0,
                           u_left=1.0, u_right=-1.0, snapshot_interval=0.25)
        x = cfg.centers()
        traj = cy.Trajectory(cfg)
        for t in np.arange(0.0, 2.0 + 1e-12, 0.25):
            u = np.clip(-(x - speed * t), -1.0, 1.0)
            traj.times.append(float(t))
            traj.snapshots.append(u)
            traj.max_slopes.append(1.0)
            traj.total_variations.append(2.0)
        return traj

    def test_exact_linear_motion(self):
        traj = self.make_ramp_trajectory(0.7)
        fit = cy.measure_speed(traj, 0.0)
        assert fit.speed == pytest.approx(0.7, abs=1e-10)
        assert fit.residual_rms <= 1e-10

    def test_stationary_symmetric_wave(self):
        cfg = cy.SimConfig(a=-30.0, b=30.0, m=512, t_end=2.0,
                           u_left=1.0, u_right=-1.0, snapshot_interval=0.25)
        state = cy.initial_state(cfg, lambda x: -np.tanh(x))
        traj = cy.simulate(state, EXP1, cfg)
        fit = cy.measure_speed(traj, 0.0)
        assert abs(fit.speed) <= 0.01

    def test_level_validation(self):
        traj = self.make_ramp_trajectory(0.5)
        with pytest.raises(ValueError):
            cy.measure_speed(traj, 2.0)

    def test_missing_crossing(self):
        traj = self.make_ramp_trajectory(0.5)
        traj.snapshots[3] = np.full_like(traj.snapshots[3], 0.9)
        with pytest.raises(cy.SimulationError):
            cy.measure_speed(traj, 0.0)


class TestProfileCoupling:
    def test_wave_translates_at_rankine_hugoniot_speed(self):
        profile, _ = wv.solve_wave(EXP1, wv.WaveParams(2.0, 0.0), n=1024)
        cfg = cy.SimConfig(a=-30.0, b=30.0, m=800, t_end=2.0,
                           u_left=2.0, u_right=0.0, snapshot_interval=0.25)
        state = cy.state_from_profile(profile, cfg)
        traj = cy.simulate(state, EXP1, cfg)
        fit = cy.measure_speed(traj, 1.0)
        assert fit.speed == pytest.approx(1.0, rel=0.02)
        l1 = cy.l1_distance_to_translate(traj.final, profile)
        assert l1 <= 0.2

    def test_snapshot_csv(self, tmp_path):
        cfg = cy.SimConfig(a=-30.0, b=30.0, m=128, t_end=0.5,
                           u_left=0.0, u_right=0.0, snapshot_interval=0.25)
        traj = cy.simulate(cy.initial_state(cfg, 0.0), EXP1, cfg)
        path = tmp_path / "snapshots.csv"
        cy.write_snapshots_csv(traj, path)
        lines = path.read_text().splitlines()
        assert lines[0] == "t,x,u"
        assert len(lines) == 1 + len(traj.times) * cfg.m
