"""Verification-layer tests: residuals, equivalence, limits and the suites."""

import json

import numpy as np
import pytest

from landen_kdv import (
    AliasingWarning,
    DnWaveParams,
    DomainError,
    PeriodMismatchError,
    PeriodicGrid,
    PmWaveParams,
    VelocityScaling,
    equivalence_check,
    kdv_residual,
    landen_map,
    run_suite,
    soliton_limit_check,
)
from landen_kdv.verify import (
    SUITES,
    CheckResult,
    pm_superposition_velocity_search,
)


class TestKdvResidual:
    def test_single_cnoidal_wave_solves(self):
        params = DnWaveParams(alpha=1.0, beta=0.0, m=0.5)
        report = kdv_residual(params, params.natural_grid(n=256))
        assert report.normalized < 1e-9

    def test_superposition_solves(self):
        params = DnWaveParams(alpha=1.0, beta=0.2, m=0.7, p=3)
        report = kdv_residual(params, params.natural_grid(n=256))
        assert report.normalized < 1e-8

    def test_report_internal_consistency(self):
        params = DnWaveParams(alpha=1.3, beta=-0.1, m=0.6, p=2)
        report = kdv_residual(params, params.natural_grid(n=256), t=0.15)
        assert report.normalized == pytest.approx(report.linf / report.scale, rel=1e-12)
        assert len(report.term_breakdown) == 3
        assert report.scale == pytest.approx(max(report.term_breakdown), rel=1e-12)
        assert report.l2 <= report.linf + 1e-15

    def test_residual_plateau_under_refinement(self):
        # once the spectrum is resolved, doubling N must not inflate the
        # normalized residual: the noise-floor truncation keeps the k^3
        # amplification off the roundoff rubble
        params = DnWaveParams(alpha=1.0, beta=0.0, m=0.5)
        levels = [
            kdv_residual(params, params.natural_grid(n=n)).normalized
            for n in (128, 256, 512, 1024)
        ]
        assert all(r < 1e-9 for r in levels)

    def test_time_slices_agree(self):
        params = DnWaveParams(alpha=1.0, beta=0.0, m=0.5, p=2)
        grid = params.natural_grid(n=256)
        r0 = kdv_residual(params, grid, t=0.0).normalized
        r1 = kdv_residual(params, grid, t=0.4).normalized
        assert abs(r0 - r1) < 1e-10

    def test_grid_must_hold_whole_periods(self):
        params = DnWaveParams(alpha=1.0, beta=0.0, m=0.5)
        with pytest.raises(PeriodMismatchError):
            kdv_residual(params, PeriodicGrid(N=256, L=1.0))

    def test_multiple_periods_accepted(self):
        params = DnWaveParams(alpha=1.0, beta=0.0, m=0.5)
        report = kdv_residual(params, params.natural_grid(n=512, periods=3))
        assert report.normalized < 1e-9

    def test_non_solution_is_loud(self):
        # dn^3 with the cnoidal dispersion relation is not a solution and
        # the residual must say so at order one, not order epsilon
        from landen_kdv import jacobi_sn_cn_dn

        class Dn3Wave:
            velocity = 8.0 - 4.0 * 0.5
            spatial_period = DnWaveParams(alpha=1.0, beta=0.0, m=0.5).spatial_period

            def sample(self, grid, t):
                return -2.0 * jacobi_sn_cn_dn(grid.x - self.velocity * t, 0.5)[2] ** 3

        wave = Dn3Wave()
        grid = PeriodicGrid(N=256, L=wave.spatial_period)
        assert kdv_residual(wave, grid).normalized > 1e-2

    def test_mixed_wave_standard_scaling_solves(self):
        params = PmWaveParams(alpha=1.3, m=0.5, sign=1)
        wave = params.sampler(VelocityScaling.STANDARD)
        grid = params.natural_grid(n=256)
        assert kdv_residual(wave, grid, t=0.1).normalized < 1e-7

    def test_mixed_wave_linear_scaling_fails_off_unit_alpha(self):
        params = PmWaveParams(alpha=1.3, m=0.5, sign=1)
        wave = params.sampler(VelocityScaling.AS_WRITTEN)
        grid = params.natural_grid(n=256)
        assert kdv_residual(wave, grid, t=0.1).normalized > 1e-3

    def test_aliasing_warning_on_coarse_grid(self):
        params = DnWaveParams(alpha=1.0, beta=0.0, m=1.0 - 1e-9)
        grid = params.natural_grid(n=64)
        with pytest.warns(AliasingWarning):
            kdv_residual(params, grid)


class TestEquivalence:
    def test_identity_map_is_exact(self):
        params = DnWaveParams(alpha=1.0, beta=0.0, m=0.5)
        lmap = landen_map(1, 0.5)
        dev = equivalence_check(params, lmap, params.natural_grid(n=256))
        assert dev < 1e-13

    def test_two_term_collapse(self):
        params = DnWaveParams(alpha=1.0, beta=0.0, m=0.5, p=2)
        lmap = landen_map(2, 0.5)
        dev = equivalence_check(params, lmap, params.natural_grid(n=512, periods=2))
        assert dev < 1e-10

    def test_stressed_parameters(self):
        params = DnWaveParams(alpha=1.7, beta=-0.4, m=0.9, p=5)
        lmap = landen_map(5, 0.9)
        dev = equivalence_check(params, lmap, params.natural_grid(n=512, periods=2))
        assert dev < 1e-9

    def test_time_shift_invariance(self):
        for p, m in ((2, 0.5), (3, 0.7)):
            params = DnWaveParams(alpha=1.0, beta=0.1, m=m, p=p)
            lmap = landen_map(p, m)
            grid = params.natural_grid(n=512, periods=2)
            d0 = equivalence_check(params, lmap, grid, t=0.0)
            d1 = equivalence_check(params, lmap, grid, t=0.25)
            assert abs(d0 - d1) < 2e-11

    def test_map_and_params_must_match(self):
        params = DnWaveParams(alpha=1.0, beta=0.0, m=0.5, p=2)
        with pytest.raises(DomainError):
            equivalence_check(params, landen_map(3, 0.5), params.natural_grid())
        with pytest.raises(DomainError):
            equivalence_check(params, landen_map(2, 0.6), params.natural_grid())


class TestLimits:
    def test_soliton_limit_default_epsilon(self):
        assert soliton_limit_check(1.0, 0.0) < 1e-5
        assert soliton_limit_check(2.0, 1.0) < 1e-5

    def test_soliton_exact_endpoint(self):
        assert soliton_limit_check(1.0, 0.0, epsilon=0.0) < 1e-12

    def test_limit_tightens_with_epsilon(self):
        coarse = soliton_limit_check(1.0, 0.0, epsilon=1e-6)
        fine = soliton_limit_check(1.0, 0.0, epsilon=1e-10)
        assert fine < coarse

    @pytest.mark.parametrize("kwargs", [{"x_range": 0.0}, {"epsilon": -1e-3}, {"epsilon": 1.0}])
    def test_validation(self, kwargs):
        with pytest.raises(DomainError):
            soliton_limit_check(1.0, 0.0, **kwargs)


class TestMixedSuperpositionProbe:
    def test_single_copy_recovers_base_speed(self):
        base = PmWaveParams(alpha=1.0, m=0.5, sign=1)
        speed, res = pm_superposition_velocity_search(base, 1)
        assert res < 1e-9
        assert speed == pytest.approx(-1.5, abs=1e-8)

    def test_two_copies_travel_rigidly(self):
        # the two-copy sum collapses to a pure sn^2 profile moving at -6
        base = PmWaveParams(alpha=1.0, m=0.5, sign=1)
        speed, res = pm_superposition_velocity_search(base, 2)
        assert res < 1e-9
        assert speed == pytest.approx(-6.0, abs=1e-8)

    def test_three_copies_travel_rigidly(self):
        base = PmWaveParams(alpha=1.0, m=0.5, sign=1)
        speed, res = pm_superposition_velocity_search(base, 3)
        assert res < 1e-9
        assert speed == pytest.approx(-11.3348963228472, abs=1e-9)


class TestSuites:
    def test_all_suites_pass(self):
        for name in SUITES:
            results = run_suite(name)
            assert results, name
            failed = [r for r in results if not r.passed]
            assert not failed, (name, [r.check for r in failed])

    def test_combined_suite_is_concatenation(self):
        combined = run_suite("all")
        total = sum(len(run_suite(name)) for name in SUITES)
        assert len(combined) == total

    def test_unknown_suite(self):
        with pytest.raises(DomainError):
            run_suite("nonsense")

    def test_unknown_tolerance_key(self):
        with pytest.raises(DomainError):
            run_suite("limits", tolerances={"bogus": 1.0})

    def test_tolerance_override_forces_failures(self):
        results = run_suite("equivalence", tolerances={"equivalence": 1e-18})
        assert any(not r.passed for r in results)

    def test_parallel_matches_serial(self):
        serial = [r.json_line() for r in run_suite("kdv", jobs=1)]
        parallel = [r.json_line() for r in run_suite("kdv", jobs=4)]
        assert serial == parallel

    def test_json_line_schema(self):
        result = run_suite("limits")[0]
        assert isinstance(result, CheckResult)
        record = json.loads(result.json_line())
        assert set(record) == {"check", "params", "metric", "tol", "pass"}
        assert isinstance(record["pass"], bool)
        assert isinstance(record["metric"], float)

    def test_deterministic_output(self):
        lines_a = [r.json_line() for r in run_suite("identities")]
        lines_b = [r.json_line() for r in run_suite("identities")]
        assert lines_a == lines_b
