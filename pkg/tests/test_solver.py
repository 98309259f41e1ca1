"""Time integration and trajectory monitors."""

import math

import numpy as np
import pytest

from almost2d import (
    SolverConfig,
    SpectralVectorField,
    constants,
    rhs,
    run,
    taylor_green_2d,
)
from almost2d.families import random_divergence_free, set_mode_pair
from almost2d.field import advection, divergence_defect
from almost2d.solver import (
    monitor_enstrophy_inequality,
    monitor_horizontal,
    monitor_strain_identity,
)


def single_mode(grid, k, value):
    coeffs = np.zeros((3, grid.n, grid.n, grid.n), dtype=complex)
    set_mode_pair(coeffs, grid, k, np.asarray(value, dtype=complex))
    return SpectralVectorField(grid, coeffs, mean_zero=True)


class TestRhs:
    def test_zero_field(self, grid16):
        u = SpectralVectorField(grid16, np.zeros((3, 16, 16, 16), dtype=complex), True)
        assert np.max(np.abs(rhs(u, 1.0).coeffs)) == 0.0

    def test_taylor_green_nonlinearity_is_gradient(self, grid32):
        tg = taylor_green_2d(grid32)
        tendency = rhs(tg, 0.01)
        viscous = -0.01 * 4 * np.pi**2 * grid32.k_sq * tg.coeffs
        err = np.max(np.abs(tendency.coeffs - viscous))
        assert err < 1e-12 * np.max(np.abs(viscous))

    def test_advection_skew_symmetry(self, grid16):
        for seed in (1, 2, 3):
            u = random_divergence_free(grid16, seed, kmax=5)
            u.coeffs *= grid16.dealias_mask
            adv = advection(u)
            pairing = float(np.sum(np.real(adv.coeffs * np.conj(u.coeffs))))
            assert abs(pairing) < 1e-10 * float(np.sum(np.abs(u.coeffs) ** 2))

    def test_tendency_divergence_free_and_mean_zero(self, grid16):
        u = random_divergence_free(grid16, 4, kmax=4)
        tendency = rhs(u, 0.3)
        assert divergence_defect(tendency) < 1e-12
        assert np.max(np.abs(tendency.coeffs[:, 0, 0, 0])) == 0.0


class TestRun:
    def test_zero_data_stays_zero(self, grid16):
        u0 = SpectralVectorField(grid16, np.zeros((3, 16, 16, 16), dtype=complex), True)
        series = run(u0, SolverConfig(grid=grid16, nu=1.0, dt=1e-3, t_end=0.01))
        assert np.max(series.K) == 0.0
        assert series.status == "completed"

    def test_taylor_green_decay(self, grid32):
        tg = taylor_green_2d(grid32)
        cfg = SolverConfig(grid=grid32, nu=0.01, dt=1e-3, t_end=0.05)
        series = run(tg, cfg)
        exact = tg.coeffs * math.exp(-8 * math.pi**2 * 0.01 * 0.05)
        err = np.sqrt(np.sum(np.abs(series.final_field.coeffs - exact) ** 2))
        ref = np.sqrt(np.sum(np.abs(exact) ** 2))
        assert err <= 1e-6 * ref
        assert series.summary["max_energy_eq_residual"] <= 1e-6 * series.K[0]

    def test_divergence_and_mean_preserved(self, grid16):
        u0 = random_divergence_free(grid16, 11, kmax=4, amplitude=0.5)
        series = run(u0, SolverConfig(grid=grid16, nu=0.2, dt=1e-4, t_end=5e-3))
        final = series.final_field
        assert divergence_defect(final) <= 1e-10
        assert np.max(np.abs(final.coeffs[:, 0, 0, 0])) <= 1e-14

    def test_energy_nonincreasing(self, grid16):
        u0 = random_divergence_free(grid16, 12, kmax=4, amplitude=0.5)
        series = run(u0, SolverConfig(grid=grid16, nu=0.5, dt=1e-4, t_end=0.01))
        assert series.summary["max_energy_increase_per_step"] <= 1e-8 * series.K[0]

    def test_two_dimensional_invariance(self, grid32):
        series = run(
            taylor_green_2d(grid32, 2.0),
            SolverConfig(grid=grid32, nu=0.05, dt=1e-3, t_end=0.02),
        )
        assert np.max(series.omega_h_hminushalf) <= 1e-12

    def test_reversible_scaling_on_one_mode(self, grid32):
        value = np.array([0.0, 0.7, 0.3])
        u1 = single_mode(grid32, (1, 0, 0), value / 2)
        u2 = single_mode(grid32, (2, 0, 0), value)  # 2 u0(2x)
        nu, dt, t_end = 0.05, 1e-3, 0.08
        s1 = run(u1, SolverConfig(grid=grid32, nu=nu, dt=dt, t_end=t_end))
        s2 = run(u2, SolverConfig(grid=grid32, nu=2 * nu, dt=dt / 2, t_end=t_end / 2))
        for j in range(len(s2.K)):
            if 4 * j >= len(s1.K):
                break
            assert s2.K[j] == pytest.approx(4 * s1.K[4 * j], rel=1e-12)

    def test_blowup_threshold_stops_early(self, grid16):
        u0 = random_divergence_free(grid16, 13, kmax=4, amplitude=1.0)
        cfg = SolverConfig(
            grid=grid16, nu=0.1, dt=1e-5, t_end=1e-3, blowup_threshold=1e-12
        )
        series = run(u0, cfg)
        assert series.status == "blowup_suspected"

    def test_nan_detection_aborts(self, grid16):
        u0 = random_divergence_free(grid16, 14, kmax=5, amplitude=100.0)
        cfg = SolverConfig(grid=grid16, nu=1e-6, dt=0.5, t_end=10.0)
        with pytest.warns(UserWarning, match="CFL"):
            series = run(u0, cfg)
        assert series.status in ("nan_abort", "blowup_suspected")
        assert len(series.t) < 21  # stopped early

    def test_rejects_bad_initial_data(self, grid16):
        coeffs = np.zeros((3, 16, 16, 16), dtype=complex)
        coeffs[0, 0, 0, 0] = 1.0
        with pytest.raises(ValueError, match="mean-zero"):
            run(
                SpectralVectorField(grid16, coeffs),
                SolverConfig(grid=grid16, nu=1.0, dt=1e-3, t_end=0.01),
            )


@pytest.fixture(scope="module")
def monitored_run(grid32):
    u0 = random_divergence_free(grid32, 2024, kmax=4, amplitude=1.0)
    dt = 2e-6
    cfg = SolverConfig(grid=grid32, nu=0.5, dt=dt, t_end=60 * dt)
    return run(u0, cfg), u0, cfg


class TestMonitors:
    def test_strain_identity_residual_small(self, monitored_run):
        series, _, _ = monitored_run
        assert series.summary["max_strain_identity_residual"] <= 1e-5

    def test_strain_identity_second_order(self, monitored_run, grid32):
        series, u0, cfg = monitored_run
        half = run(
            u0,
            SolverConfig(grid=grid32, nu=cfg.nu, dt=cfg.dt / 2, t_end=30 * cfg.dt),
        )
        ratio = (
            series.summary["max_strain_identity_residual"]
            / half.summary["max_strain_identity_residual"]
        )
        assert 2.5 < ratio < 6.0

    def test_taylor_green_identity_is_pure_dissipation(self, grid32):
        series = run(
            taylor_green_2d(grid32),
            SolverConfig(grid=grid32, nu=0.01, dt=1e-3, t_end=0.02),
        )
        assert np.max(np.abs(series.det_S_integral)) == 0.0
        assert series.summary["max_strain_identity_residual"] <= 1e-6

    def test_enstrophy_inequality_never_violated(self, monitored_run):
        series, _, _ = monitored_run
        scale = series.E[0] ** 3 / (3456 * math.pi**4 * 0.5**3)
        assert series.summary["min_enstrophy_ineq_slack"] >= -1e-6 * scale

    def test_decaying_flow_has_positive_slack(self, grid32):
        series = run(
            taylor_green_2d(grid32),
            SolverConfig(grid=grid32, nu=0.01, dt=1e-3, t_end=0.02),
        )
        assert series.summary["min_enstrophy_ineq_slack"] > 0

    def test_horizontal_flag_and_gronwall(self, monitored_run):
        series, _, _ = monitored_run
        assert series.summary["horizontal_flag_all_true"]
        assert series.summary["gronwall_envelope_ok"]

    def test_horizontal_flag_exercised_below_threshold(self, grid32):
        """A small-amplitude field keeps omega_h below R1 nu, so the decay
        branch of the flag is genuinely tested."""
        u0 = random_divergence_free(grid32, 77, kmax=3, amplitude=2e-3)
        cfg = SolverConfig(grid=grid32, nu=0.5, dt=1e-5, t_end=5e-4)
        series = run(u0, cfg)
        small = series.omega_h_hminushalf[1:-1] < constants().r1 * 0.5
        assert np.all(small)
        assert series.summary["horizontal_flag_all_true"]

    def test_monitor_accessors(self, monitored_run):
        series, _, _ = monitored_run
        idx = len(series.t) // 2
        assert monitor_strain_identity(series, idx) >= 0
        assert math.isfinite(monitor_enstrophy_inequality(series, idx))
        info = monitor_horizontal(series, idx)
        assert set(info) == {"flag", "lhs"}
        with pytest.raises(ValueError, match="consecutive"):
            monitor_strain_identity(series, 0)


class TestConfigValidation:
    def test_bad_viscosity(self, grid16):
        with pytest.raises(ValueError, match="positive"):
            SolverConfig(grid=grid16, nu=0.0, dt=1e-3, t_end=1.0)

    def test_bad_dealias_rule(self, grid16):
        with pytest.raises(ValueError, match="dealias"):
            SolverConfig(grid=grid16, nu=1.0, dt=1e-3, t_end=1.0, dealias="half")

    def test_unknown_monitor(self, grid16):
        with pytest.raises(ValueError, match="unknown monitors"):
            SolverConfig(
                grid=grid16, nu=1.0, dt=1e-3, t_end=1.0, monitors=frozenset({"bogus"})
            )
