"""Time-integrator tests.

The analytic traveling waves double as exact solutions, so accuracy is
checked against them directly; self-convergence at dt halving pins the
fourth-order rate.
"""

import numpy as np
import pytest

from landen_kdv import (
    DnWaveParams,
    DomainError,
    InstabilityError,
    PeriodicGrid,
)
from landen_kdv.evolve import (
    STABILITY_C,
    ConservationReport,
    EvolverConfig,
    Scheme,
    conservation_report,
    evolve,
    evolve_trajectory,
    translation_lag,
)


def cnoidal_setup(n=256, m=0.5):
    params = DnWaveParams(alpha=1.0, beta=0.0, m=m)
    grid = params.natural_grid(n=n)
    return params, grid


class TestConfig:
    def test_steps_and_cap(self):
        grid = PeriodicGrid(N=64, L=2 * np.pi)
        config = EvolverConfig(grid=grid, dt=1e-4, T=1e-2)
        assert config.steps == 100
        assert config.stability_cap == pytest.approx(
            STABILITY_C * (grid.L / grid.N) ** 3, rel=1e-13)

    def test_for_duration_rounds_steps_up(self):
        grid = PeriodicGrid(N=64, L=2 * np.pi)
        config = EvolverConfig.for_duration(grid, duration=1.0, target_dt=3e-4)
        assert config.dt <= 3e-4
        assert config.steps * config.dt == pytest.approx(1.0, rel=1e-12)

    @pytest.mark.parametrize("dt,T", [(0.0, 1.0), (-1e-3, 1.0), (1e-3, 0.0), (1e-3, -1.0)])
    def test_positive_durations(self, dt, T):
        grid = PeriodicGrid(N=64, L=2 * np.pi)
        with pytest.raises(DomainError):
            EvolverConfig(grid=grid, dt=dt, T=T)

    def test_duration_must_be_whole_steps(self):
        grid = PeriodicGrid(N=64, L=2 * np.pi)
        with pytest.raises(DomainError):
            EvolverConfig(grid=grid, dt=3e-4, T=1e-3)

    def test_snapshot_interval_nonnegative(self):
        grid = PeriodicGrid(N=64, L=2 * np.pi)
        with pytest.raises(DomainError):
            EvolverConfig(grid=grid, dt=1e-4, T=1e-2, snapshot_every=-1)


class TestAccuracy:
    def test_constant_state_is_a_fixed_point(self):
        grid = PeriodicGrid(N=64, L=2 * np.pi)
        config = EvolverConfig(grid=grid, dt=1e-4, T=1e-2)
        u0 = np.full(64, 0.7)
        assert np.max(np.abs(evolve(u0, config) - 0.7)) < 1e-14

    def test_cnoidal_wave_translates(self):
        params, grid = cnoidal_setup()
        config = EvolverConfig.for_duration(grid, duration=0.05, target_dt=1e-4)
        u_final = evolve(params.sample(grid, 0.0), config)
        exact = params.sample(grid, config.T)
        assert np.max(np.abs(u_final - exact)) < 1e-10

    def test_fourth_order_self_convergence(self):
        # N = 128 keeps both step sizes inside the stability cap while the
        # time-stepping error stays far above roundoff
        params, grid = cnoidal_setup(n=128)
        u0 = params.sample(grid, 0.0)
        errors = []
        for dt in (4e-4, 2e-4):
            config = EvolverConfig.for_duration(grid, duration=0.2, target_dt=dt)
            exact = params.sample(grid, config.T)
            errors.append(np.max(np.abs(evolve(u0, config) - exact)))
        ratio = errors[0] / errors[1]
        assert 8.0 < ratio < 32.0

    def test_dealias_flag_off_still_resolves_smooth_data(self):
        params, grid = cnoidal_setup()
        config = EvolverConfig.for_duration(
            grid, duration=0.05, target_dt=1e-4, dealias=False)
        u_final = evolve(params.sample(grid, 0.0), config)
        assert np.max(np.abs(u_final - params.sample(grid, config.T))) < 1e-9

    def test_wrong_shape_rejected(self):
        grid = PeriodicGrid(N=64, L=2 * np.pi)
        config = EvolverConfig(grid=grid, dt=1e-4, T=1e-2)
        with pytest.raises(DomainError):
            evolve(np.zeros(128), config)


class TestTrajectory:
    def test_snapshot_bookkeeping(self):
        params, grid = cnoidal_setup(n=128)
        config = EvolverConfig.for_duration(
            grid, duration=0.02, target_dt=1e-4, snapshot_every=50)
        traj = evolve_trajectory(params.sample(grid, 0.0), config)
        assert traj.times[0] == 0.0
        assert traj.times[-1] == pytest.approx(config.T, rel=1e-12)
        assert len(traj.times) == len(traj.fields)
        assert all(b > a for a, b in zip(traj.times, traj.times[1:]))
        assert np.array_equal(traj.final, traj.fields[-1])

    def test_no_snapshots_keeps_endpoints(self):
        params, grid = cnoidal_setup(n=128)
        config = EvolverConfig.for_duration(grid, duration=0.02, target_dt=1e-4)
        traj = evolve_trajectory(params.sample(grid, 0.0), config)
        assert len(traj.times) == 2


class TestConservation:
    def test_mean_is_conserved_exactly(self):
        params, grid = cnoidal_setup()
        config = EvolverConfig.for_duration(
            grid, duration=0.05, target_dt=1e-4, snapshot_every=100)
        traj = evolve_trajectory(params.sample(grid, 0.0), config)
        report = conservation_report(traj)
        assert isinstance(report, ConservationReport)
        assert report.mass_drift == 0.0
        assert report.momentum_drift < 1e-12


class TestInstability:
    def test_oversized_step_rejected_before_integration(self):
        grid = PeriodicGrid(N=256, L=2 * np.pi)
        cap = STABILITY_C * (grid.L / grid.N) ** 3
        config = EvolverConfig(grid=grid, dt=2 * cap, T=20 * cap)
        with pytest.raises(InstabilityError):
            evolve(np.zeros(256), config)

    def test_blowup_detected_mid_run(self):
        # a step size inside the linear-stability heuristic still explodes
        # once the nonlinear CFL is violated by huge amplitudes
        grid = PeriodicGrid(N=64, L=2 * np.pi)
        cap = STABILITY_C * (grid.L / grid.N) ** 3
        config = EvolverConfig(grid=grid, dt=0.9 * cap, T=90 * cap, dealias=False)
        u0 = 1e3 * np.sin(grid.x)
        with pytest.raises(InstabilityError):
            evolve(u0, config)


class TestTranslationLag:
    def test_recovers_circular_shift(self):
        params, grid = cnoidal_setup()
        u0 = params.sample(grid, 0.0)
        shifted = np.roll(u0, 37)
        assert translation_lag(u0, shifted, grid) == pytest.approx(
            37 * grid.spacing, abs=1e-12)

    def test_evolved_lag_matches_velocity(self):
        params, grid = cnoidal_setup()
        config = EvolverConfig.for_duration(grid, duration=0.05, target_dt=1e-4)
        u_final = evolve(params.sample(grid, 0.0), config)
        expected = (params.velocity * config.T) % grid.L
        assert translation_lag(params.sample(grid, 0.0), u_final, grid) == pytest.approx(
            expected, abs=grid.spacing)
